use std::cmp::Ordering;

use super::{compare_seq, equal_seq, no_upper_bound, tag_order, Dom, Domain, DomainError, Value};

/// Finite tabulation of a function: argument vectors mapped to results.
///
/// Entries are kept sorted by the argument domain's total order, applied
/// lexicographically to the key vector. A graph does not know its domain;
/// the [`GraphDomain`] that owns it performs every key comparison, so the
/// sort order is only meaningful relative to that domain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FunctionGraph {
    entries: Vec<(Vec<Value>, Value)>,
}

impl FunctionGraph {
    pub fn new() -> Self {
        FunctionGraph::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Value], &Value)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &[Value]> {
        self.entries.iter().map(|(k, _)| k.as_slice())
    }
}

/// Domain of partial function graphs from an argument domain to a result
/// domain.
///
/// `g1 ⊑ g2` holds when every key defined in `g1` is defined in `g2` with a
/// result at least as large. Requiring definedness keeps the order
/// antisymmetric under structural equality, where an entry that maps to
/// bottom is distinct from an absent key.
pub struct GraphDomain {
    arg: Dom,
    res: Dom,
}

impl GraphDomain {
    pub fn new(arg: Dom, res: Dom) -> Self {
        GraphDomain { arg, res }
    }

    pub fn arg(&self) -> &Dom {
        &self.arg
    }

    pub fn res(&self) -> &Dom {
        &self.res
    }

    pub fn compare_keys(&self, a: &[Value], b: &[Value]) -> Ordering {
        compare_seq(&*self.arg, a, b)
    }

    fn search(&self, g: &FunctionGraph, key: &[Value]) -> Result<usize, usize> {
        g.entries
            .binary_search_by(|(k, _)| self.compare_keys(k, key))
    }

    pub fn get<'g>(&self, g: &'g FunctionGraph, key: &[Value]) -> Option<&'g Value> {
        self.search(g, key).ok().map(|i| &g.entries[i].1)
    }

    /// Stored result, or the result domain's bottom for an absent key.
    pub fn lookup(&self, g: &FunctionGraph, key: &[Value]) -> Value {
        self.get(g, key)
            .cloned()
            .unwrap_or_else(|| self.res.bottom())
    }

    /// True when the key is stored, even if it maps to bottom.
    pub fn is_defined(&self, g: &FunctionGraph, key: &[Value]) -> bool {
        self.search(g, key).is_ok()
    }

    /// Overwrites any previous result for `key`; no implicit lub.
    pub fn update(&self, g: &FunctionGraph, key: &[Value], v: Value) -> FunctionGraph {
        let mut out = g.clone();
        self.insert(&mut out, key, v);
        out
    }

    pub fn insert(&self, g: &mut FunctionGraph, key: &[Value], v: Value) {
        match self.search(g, key) {
            Ok(i) => g.entries[i].1 = v,
            Err(i) => g.entries.insert(i, (key.to_vec(), v)),
        }
    }

    pub fn remove(&self, g: &mut FunctionGraph, key: &[Value]) -> Option<Value> {
        self.search(g, key).ok().map(|i| g.entries.remove(i).1)
    }

    pub fn from_entries(
        &self,
        entries: impl IntoIterator<Item = (Vec<Value>, Value)>,
    ) -> FunctionGraph {
        let mut g = FunctionGraph::new();
        for (k, v) in entries {
            self.insert(&mut g, &k, v);
        }
        g
    }

    /// True when every entry of `sub` is stored in `g` with an equal result.
    pub fn is_subgraph(&self, sub: &FunctionGraph, g: &FunctionGraph) -> bool {
        sub.iter()
            .all(|(k, v)| self.get(g, k).is_some_and(|w| self.res.equal(v, w)))
    }

    /// Structural equality over stored entries, bottom-valued ones included.
    pub fn graph_eq(&self, g1: &FunctionGraph, g2: &FunctionGraph) -> bool {
        g1.len() == g2.len()
            && g1
                .entries
                .iter()
                .zip(&g2.entries)
                .all(|((k1, v1), (k2, v2))| equal_seq(&*self.arg, k1, k2) && self.res.equal(v1, v2))
    }

    pub fn render_graph(&self, g: &FunctionGraph) -> String {
        let parts: Vec<String> = g
            .iter()
            .map(|(k, v)| {
                let args: Vec<String> = k.iter().map(|a| self.arg.render(a)).collect();
                format!("[{}] -> {}", args.join(", "), self.res.render(v))
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn graph_of(v: &Value) -> Option<&FunctionGraph> {
    v.as_graph()
}

impl Domain for GraphDomain {
    fn bottom(&self) -> Value {
        Value::Graph(FunctionGraph::new())
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        let (Some(g1), Some(g2)) = (graph_of(a), graph_of(b)) else {
            return false;
        };
        g1.iter()
            .all(|(k, v)| self.get(g2, k).is_some_and(|w| self.res.leq(v, w)))
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        match (graph_of(a), graph_of(b)) {
            (Some(g1), Some(g2)) => self.graph_eq(g1, g2),
            _ => false,
        }
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        let (Some(g1), Some(g2)) = (graph_of(a), graph_of(b)) else {
            return tag_order(a, b);
        };
        for ((k1, v1), (k2, v2)) in g1.entries.iter().zip(&g2.entries) {
            let ord = self
                .compare_keys(k1, k2)
                .then_with(|| self.res.compare(v1, v2));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        g1.len().cmp(&g2.len())
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        let (Some(g1), Some(g2)) = (graph_of(a), graph_of(b)) else {
            return Err(no_upper_bound(self, a, b));
        };
        let (xs, ys) = (&g1.entries, &g2.entries);
        let mut out = Vec::with_capacity(xs.len().max(ys.len()));
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            match self.compare_keys(&xs[i].0, &ys[j].0) {
                Ordering::Less => {
                    out.push(xs[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(ys[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let v = self
                        .res
                        .lub(&xs[i].1, &ys[j].1)
                        .map_err(|_| no_upper_bound(self, a, b))?;
                    out.push((xs[i].0.clone(), v));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&xs[i..]);
        out.extend_from_slice(&ys[j..]);
        Ok(Value::Graph(FunctionGraph { entries: out }))
    }

    fn render(&self, v: &Value) -> String {
        match graph_of(v) {
            Some(g) => self.render_graph(g),
            None => format!("{v:?}"),
        }
    }
}
