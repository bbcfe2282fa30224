use std::cmp::Ordering;

use super::{compare_seq, equal_seq, render_joined, tag_order, Dom, Domain, DomainError, Value};

/// Finite sets ordered by inclusion.
///
/// A set is a [`Value::Seq`] sorted by the element domain's total order
/// with no duplicates. Union (the least upper bound) is a sorted merge.
pub struct SetDomain {
    elem: Dom,
}

impl SetDomain {
    pub fn new(elem: Dom) -> Self {
        SetDomain { elem }
    }

    pub fn elem(&self) -> &Dom {
        &self.elem
    }

    /// Canonical set from arbitrary values.
    pub fn from_values(&self, values: impl IntoIterator<Item = Value>) -> Value {
        let mut xs: Vec<Value> = values.into_iter().collect();
        xs.sort_by(|a, b| self.elem.compare(a, b));
        xs.dedup_by(|a, b| self.elem.equal(a, b));
        Value::Seq(xs)
    }

    pub fn empty(&self) -> Value {
        Value::Seq(Vec::new())
    }

    /// Not monotonic in general.
    pub fn singleton(&self, v: Value) -> Value {
        Value::Seq(vec![v])
    }

    pub fn member(&self, set: &Value, v: &Value) -> bool {
        elems(set)
            .binary_search_by(|x| self.elem.compare(x, v))
            .is_ok()
    }

    pub fn union(&self, a: &Value, b: &Value) -> Value {
        let (xs, ys) = (elems(a), elems(b));
        let mut out = Vec::with_capacity(xs.len() + ys.len());
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            match self.elem.compare(&xs[i], &ys[j]) {
                Ordering::Less => {
                    out.push(xs[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(ys[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(xs[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&xs[i..]);
        out.extend_from_slice(&ys[j..]);
        Value::Seq(out)
    }

    pub fn intersect(&self, a: &Value, b: &Value) -> Value {
        self.walk(a, b, |ord| ord == Ordering::Equal)
    }

    /// Elements of `a` not in `b`. Not monotonic in its second argument.
    pub fn difference(&self, a: &Value, b: &Value) -> Value {
        let (xs, ys) = (elems(a), elems(b));
        let mut out = Vec::new();
        let mut j = 0;
        for x in xs {
            while j < ys.len() && self.elem.compare(&ys[j], x) == Ordering::Less {
                j += 1;
            }
            if j < ys.len() && self.elem.equal(&ys[j], x) {
                continue;
            }
            out.push(x.clone());
        }
        Value::Seq(out)
    }

    // Keeps elements of `a` that meet `keep` against the matching position in `b`.
    fn walk(&self, a: &Value, b: &Value, keep: impl Fn(Ordering) -> bool) -> Value {
        let (xs, ys) = (elems(a), elems(b));
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            let ord = self.elem.compare(&xs[i], &ys[j]);
            if keep(ord) {
                out.push(xs[i].clone());
            }
            match ord {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        Value::Seq(out)
    }

    fn is_subset(&self, xs: &[Value], ys: &[Value]) -> bool {
        let mut j = 0;
        for x in xs {
            loop {
                if j == ys.len() {
                    return false;
                }
                match self.elem.compare(&ys[j], x) {
                    Ordering::Less => j += 1,
                    Ordering::Equal => {
                        j += 1;
                        break;
                    }
                    Ordering::Greater => return false,
                }
            }
        }
        true
    }
}

fn elems(v: &Value) -> &[Value] {
    v.as_seq().unwrap_or(&[])
}

impl Domain for SetDomain {
    fn bottom(&self) -> Value {
        self.empty()
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => xs.len() <= ys.len() && self.is_subset(xs, ys),
            _ => false,
        }
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => equal_seq(&*self.elem, xs, ys),
            _ => false,
        }
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        match (a, b) {
            (Value::Seq(xs), Value::Seq(ys)) => compare_seq(&*self.elem, xs, ys),
            _ => tag_order(a, b),
        }
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        Ok(self.union(a, b))
    }

    fn render(&self, v: &Value) -> String {
        render_joined(&*self.elem, elems(v), "{", "}")
    }
}
