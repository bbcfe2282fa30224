use std::cmp::Ordering;

use super::{no_upper_bound, tag_order, Domain, DomainError, Value};

/// Flat domain of strings with the empty string as bottom.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatStringDomain;

impl Domain for FlatStringDomain {
    fn bottom(&self) -> Value {
        Value::Str(String::new())
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Str(x), Value::Str(y)) => x.is_empty() || x == y,
            _ => false,
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        a == b
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        match (a, b) {
            (Value::Str(x), Value::Str(y)) => x.cmp(y),
            _ => tag_order(a, b),
        }
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        match (a, b) {
            (Value::Str(x), Value::Str(_)) if x.is_empty() => Ok(b.clone()),
            (Value::Str(_), Value::Str(y)) if y.is_empty() => Ok(a.clone()),
            (Value::Str(x), Value::Str(y)) if x == y => Ok(a.clone()),
            _ => Err(no_upper_bound(self, a, b)),
        }
    }

    fn render(&self, v: &Value) -> String {
        match v {
            Value::Str(s) if s.is_empty() => "⊥".to_string(),
            Value::Str(s) => format!("{s:?}"),
            other => format!("{other:?}"),
        }
    }
}

/// Natural numbers under the usual order. Zero is bottom; the limit point
/// at infinity has no representation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NatDomain;

impl Domain for NatDomain {
    fn bottom(&self) -> Value {
        Value::Nat(0)
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        matches!((a, b), (Value::Nat(x), Value::Nat(y)) if x <= y)
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        a == b
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => x.cmp(y),
            _ => tag_order(a, b),
        }
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => Ok(Value::Nat(*x.max(y))),
            _ => Err(no_upper_bound(self, a, b)),
        }
    }

    fn render(&self, v: &Value) -> String {
        match v {
            Value::Nat(n) => n.to_string(),
            other => format!("{other:?}"),
        }
    }
}
