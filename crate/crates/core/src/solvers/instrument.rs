use std::cmp::Ordering;
use std::sync::atomic::{self, AtomicU64};
use std::sync::Arc;

use crate::domain::{Dom, Domain, DomainError, Value};

/// Shared comparison counter; clones observe the same count.
#[derive(Debug, Clone, Default)]
pub struct CmpCounter(Arc<AtomicU64>);

impl CmpCounter {
    pub fn new() -> Self {
        CmpCounter::default()
    }

    pub fn get(&self) -> u64 {
        self.0.load(atomic::Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, atomic::Ordering::Relaxed);
    }

    fn bump(&self) {
        self.0.fetch_add(1, atomic::Ordering::Relaxed);
    }
}

/// A domain that counts every `leq`, `equal` and `compare` call made on it.
///
/// Wrap a base domain and build compound domains on top of the wrapper to
/// count base-element comparisons performed inside set merges and graph
/// lookups.
pub struct Instrumented {
    inner: Dom,
    counter: CmpCounter,
}

pub fn instrument(dom: Dom, counter: &CmpCounter) -> Dom {
    Arc::new(Instrumented {
        inner: dom,
        counter: counter.clone(),
    })
}

impl Domain for Instrumented {
    fn bottom(&self) -> Value {
        self.inner.bottom()
    }

    fn leq(&self, a: &Value, b: &Value) -> bool {
        self.counter.bump();
        self.inner.leq(a, b)
    }

    fn equal(&self, a: &Value, b: &Value) -> bool {
        self.counter.bump();
        self.inner.equal(a, b)
    }

    fn compare(&self, a: &Value, b: &Value) -> Ordering {
        self.counter.bump();
        self.inner.compare(a, b)
    }

    fn lub(&self, a: &Value, b: &Value) -> Result<Value, DomainError> {
        self.inner.lub(a, b)
    }

    fn render(&self, v: &Value) -> String {
        self.inner.render(v)
    }
}
