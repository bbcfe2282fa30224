//! Values, the domain operation bundle, and domain combinators.
//!
//! A [`Domain`] never owns its values. It is a bundle of operations
//! (bottom, partial order, total order, partial least upper bound and
//! rendering) that gives structure to a set of [`Value`]s. Compound domains
//! are built from smaller ones with the constructors re-exported here.
//!
//! Every value that is not a limit point has exactly one representation, so
//! equality in a domain coincides with structural equality of [`Value`]s.

mod base;
mod compound;
mod graph;
pub mod laws;
mod set;

use std::cmp::Ordering;
use std::sync::Arc;

pub use base::{FlatStringDomain, NatDomain};
pub use compound::{ListDomain, TupleDomain};
pub use graph::{FunctionGraph, GraphDomain};
pub use set::SetDomain;

/// The universal first-order carrier.
///
/// Lists and sets share the [`Value::Seq`] representation; a set is a
/// sequence sorted by its element domain's total order, without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Bot,
    Nat(u64),
    Str(String),
    Graph(FunctionGraph),
    Seq(Vec<Value>),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Value::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&[Value]> {
        match self {
            Value::Seq(xs) => Some(xs),
            _ => None,
        }
    }

    pub fn as_graph(&self) -> Option<&FunctionGraph> {
        match self {
            Value::Graph(g) => Some(g),
            _ => None,
        }
    }

    // Fixed tag order for comparisons across variants.
    fn tag(&self) -> u8 {
        match self {
            Value::Bot => 0,
            Value::Nat(_) => 1,
            Value::Str(_) => 2,
            Value::Graph(_) => 3,
            Value::Seq(_) => 4,
            Value::Tuple(_) => 5,
        }
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Nat(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    /// The two values have no common upper bound in the domain.
    #[error("no upper bound for {left} and {right}")]
    NoUpperBound { left: String, right: String },
}

/// Structure over a set of [`Value`]s.
///
/// `lub` is partial: two values without a common upper bound yield
/// [`DomainError::NoUpperBound`]. `compare` is a total order used only for
/// representation (sorting keys and sets) and need not agree with `leq`,
/// but it must report `Equal` exactly when `equal` holds.
pub trait Domain: Send + Sync {
    fn bottom(&self) -> Value;
    fn leq(&self, a: &Value, b: &Value) -> bool;
    fn equal(&self, a: &Value, b: &Value) -> bool;
    fn compare(&self, a: &Value, b: &Value) -> Ordering;
    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError>;
    fn render(&self, v: &Value) -> String;

    fn is_bottom(&self, v: &Value) -> bool {
        self.equal(v, &self.bottom())
    }
}

pub type Dom = Arc<dyn Domain>;

impl<D: Domain + ?Sized> Domain for Arc<D> {
    fn bottom(&self) -> Value {
        (**self).bottom()
    }
    fn leq(&self, a: &Value, b: &Value) -> bool {
        (**self).leq(a, b)
    }
    fn equal(&self, a: &Value, b: &Value) -> bool {
        (**self).equal(a, b)
    }
    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        (**self).compare(a, b)
    }
    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        (**self).lub(a, b)
    }
    fn render(&self, v: &Value) -> String {
        (**self).render(v)
    }
}

pub fn flat_string_domain() -> Dom {
    Arc::new(FlatStringDomain)
}

pub fn nat_domain() -> Dom {
    Arc::new(NatDomain)
}

pub fn list_domain(elem: Dom) -> Dom {
    Arc::new(ListDomain::new(elem))
}

pub fn tuple_domain(first: Dom, second: Dom) -> Dom {
    Arc::new(TupleDomain::new(first, second))
}

/// The concrete type is returned so callers can reach the set operations;
/// it coerces to [`Dom`].
pub fn set_domain(elem: Dom) -> Arc<SetDomain> {
    Arc::new(SetDomain::new(elem))
}

/// The concrete type is returned so callers can reach lookup, update and
/// definedness tests; it coerces to [`Dom`].
pub fn graph_domain(arg: Dom, res: Dom) -> Arc<GraphDomain> {
    Arc::new(GraphDomain::new(arg, res))
}

/// Lexicographic order over sequences using `dom`'s total order; a proper
/// prefix sorts first.
pub fn compare_seq(dom: &dyn Domain, a: &[Value], b: &[Value]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match dom.compare(x, y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub fn equal_seq(dom: &dyn Domain, a: &[Value], b: &[Value]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| dom.equal(x, y))
}

fn tag_order(a: &Value, b: &Value) -> Ordering {
    a.tag().cmp(&b.tag())
}

fn no_upper_bound(dom: &dyn Domain, a: &Value, b: &Value) -> DomainError {
    DomainError::NoUpperBound {
        left: dom.render(a),
        right: dom.render(b),
    }
}

fn render_joined(dom: &dyn Domain, xs: &[Value], open: &str, close: &str) -> String {
    let parts: Vec<String> = xs.iter().map(|x| dom.render(x)).collect();
    format!("{open}{}{close}", parts.join(", "))
}
