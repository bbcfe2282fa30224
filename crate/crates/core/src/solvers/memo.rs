use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::Hash;

/// Memoized first-order function; see [`memo`].
pub struct Memo<K, V, F> {
    f: F,
    table: RefCell<HashMap<K, V>>,
}

/// Wraps `f` so each distinct argument is evaluated at most once.
///
/// Only calls made through the returned value are cached; recursive calls
/// inside `f` are not. Use [`memo_fix`] for those.
pub fn memo<K, V, F>(f: F) -> Memo<K, V, F>
where
    K: Hash + Eq + Clone,
    V: Clone,
    F: Fn(&K) -> V,
{
    Memo {
        f,
        table: RefCell::new(HashMap::new()),
    }
}

impl<K, V, F> Memo<K, V, F>
where
    K: Hash + Eq + Clone,
    V: Clone,
    F: Fn(&K) -> V,
{
    pub fn call(&self, x: &K) -> V {
        if let Some(v) = self.table.borrow().get(x) {
            return v.clone();
        }
        let v = (self.f)(x);
        self.table.borrow_mut().insert(x.clone(), v.clone());
        v
    }
}

/// Recursive closure of a functional with every internal call memoized;
/// see [`memo_fix`].
pub struct MemoFix<K, V, F> {
    functional: F,
    table: RefCell<HashMap<K, V>>,
}

/// Ties the knot of `functional` through a memo table.
///
/// Recursion must be well-founded on the queried argument: a circular
/// dependency recurses without bound. Circular definitions need one of the
/// fixpoint solvers instead.
pub fn memo_fix<K, V, F>(functional: F) -> MemoFix<K, V, F>
where
    K: Hash + Eq + Clone,
    V: Clone,
    F: Fn(&dyn Fn(&K) -> V, &K) -> V,
{
    MemoFix {
        functional,
        table: RefCell::new(HashMap::new()),
    }
}

impl<K, V, F> MemoFix<K, V, F>
where
    K: Hash + Eq + Clone,
    V: Clone,
    F: Fn(&dyn Fn(&K) -> V, &K) -> V,
{
    pub fn call(&self, x: &K) -> V {
        if let Some(v) = self.table.borrow().get(x) {
            return v.clone();
        }
        let v = (self.functional)(&|y| self.call(y), x);
        self.table.borrow_mut().insert(x.clone(), v.clone());
        v
    }
}
