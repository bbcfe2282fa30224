use std::cmp::Ordering;

use super::{
    compare_seq, equal_seq, no_upper_bound, render_joined, tag_order, Dom, Domain, DomainError,
    Value,
};

/// Lists over an element domain. A shorter list is below a longer one when
/// the two are related element-wise on the shorter one's length.
pub struct ListDomain {
    elem: Dom,
}

impl ListDomain {
    pub fn new(elem: Dom) -> Self {
        ListDomain { elem }
    }
}

impl Domain for ListDomain {
    fn bottom(&self) -> Value {
        Value::Seq(Vec::new())
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => {
                xs.len() <= ys.len() && xs.iter().zip(ys).all(|(x, y)| self.elem.leq(x, y))
            }
            _ => false,
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => equal_seq(&*self.elem, xs, ys),
            _ => false,
        }
    }

    // Length first, then lexicographic.
    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => xs
                .len()
                .cmp(&ys.len())
                .then_with(|| compare_seq(&*self.elem, xs, ys)),
            _ => tag_order(a, b),
        }
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        let (Value::Seq(xs), Value::Seq(ys)) = (a, b) else {
            return Err(no_upper_bound(self, a, b));
        };
        let (short, long) = if xs.len() <= ys.len() {
            (xs, ys)
        } else {
            (ys, xs)
        };
        let mut out = Vec::with_capacity(long.len());
        for (x, y) in short.iter().zip(long) {
            out.push(
                self.elem
                    .lub(x, y)
                    .map_err(|_| no_upper_bound(self, a, b))?,
            );
        }
        out.extend_from_slice(&long[short.len()..]);
        Ok(Value::Seq(out))
    }

    fn render(&self, v: &Value) -> String {
        match v {
            Value::Seq(xs) => render_joined(&*self.elem, xs, "[", "]"),
            other => format!("{other:?}"),
        }
    }
}

/// Pairs ordered component-wise.
pub struct TupleDomain {
    first: Dom,
    second: Dom,
}

impl TupleDomain {
    pub fn new(first: Dom, second: Dom) -> Self {
        TupleDomain { first, second }
    }

    fn split<'a>(&self, v: &'a Value) -> Option<(&'a Value, &'a Value)> {
        match v {
            Value::Tuple(parts) if parts.len() == 2 => Some((&parts[0], &parts[1])),
            _ => None,
        }
    }
}

impl Domain for TupleDomain {
    fn bottom(&self) -> Value {
        Value::Tuple(vec![self.first.bottom(), self.second.bottom()])
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        match (self.split(a), self.split(b)) {
            (Some((a1, a2)), Some((b1, b2))) => self.first.leq(a1, b1) && self.second.leq(a2, b2),
            _ => false,
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        match (self.split(a), self.split(b)) {
            (Some((a1, a2)), Some((b1, b2))) => {
                self.first.equal(a1, b1) && self.second.equal(a2, b2)
            }
            _ => false,
        }
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        match (self.split(a), self.split(b)) {
            (Some((a1, a2)), Some((b1, b2))) => self
                .first
                .compare(a1, b1)
                .then_with(|| self.second.compare(a2, b2)),
            _ => tag_order(a, b),
        }
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        let (Some((a1, a2)), Some((b1, b2))) = (self.split(a), self.split(b)) else {
            return Err(no_upper_bound(self, a, b));
        };
        let first = self
            .first
            .lub(a1, b1)
            .map_err(|_| no_upper_bound(self, a, b))?;
        let second = self
            .second
            .lub(a2, b2)
            .map_err(|_| no_upper_bound(self, a, b))?;
        Ok(Value::Tuple(vec![first, second]))
    }

    fn render(&self, v: &Value) -> String {
        match self.split(v) {
            Some((x, y)) => format!("({}, {})", self.first.render(x), self.second.render(y)),
            None => format!("{v:?}"),
        }
    }
}
