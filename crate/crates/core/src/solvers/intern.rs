use crate::domain::{FunctionGraph, GraphDomain, Value};

/// Dense ids for argument vectors, so strategies can keep per-argument
/// bookkeeping in plain vectors. Key lookups go through the argument
/// domain and are counted when it is instrumented.
#[derive(Default)]
pub(crate) struct Interner {
    index: FunctionGraph,
    keys: Vec<Vec<Value>>,
}

impl Interner {
    /// Returns the id and whether the key was new.
    pub fn intern(&mut self, graphs: &GraphDomain, key: &[Value]) -> (usize, bool) {
        if let Some(Value::Nat(id)) = graphs.get(&self.index, key) {
            return (*id as usize, false);
        }
        let id = self.keys.len();
        graphs.insert(&mut self.index, key, Value::Nat(id as u64));
        self.keys.push(key.to_vec());
        (id, true)
    }

    pub fn key(&self, id: usize) -> &[Value] {
        &self.keys[id]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }
}
