//! Checks of the domain axioms on concrete samples, for property tests.
//!
//! Each check returns a description of the first violated law.

use std::cmp::Ordering;

use super::{Domain, Value};

type Verdict = Result<(), String>;

fn fail(d: &dyn Domain, law: &str, xs: &[&Value]) -> Verdict {
    let shown: Vec<String> = xs.iter().map(|x| d.render(x)).collect();
    Err(format!("{law} fails for {}", shown.join(", ")))
}

/// Reflexivity, antisymmetry, transitivity and least bottom.
pub fn check_order(d: &dyn Domain, a: &Value, b: &Value, c: &Value) -> Verdict {
    if !d.leq(a, a) {
        return fail(d, "reflexivity", &[a]);
    }
    if d.leq(a, b) && d.leq(b, a) && !d.equal(a, b) {
        return fail(d, "antisymmetry", &[a, b]);
    }
    if d.leq(a, b) && d.leq(b, c) && !d.leq(a, c) {
        return fail(d, "transitivity", &[a, b, c]);
    }
    if !d.leq(&d.bottom(), a) {
        return fail(d, "bottom is least", &[a]);
    }
    Ok(())
}

/// `lub(a, b)` is an upper bound below `u` whenever `u` bounds both, and
/// it exists whenever such a `u` does.
pub fn check_lub(d: &dyn Domain, a: &Value, b: &Value, u: &Value) -> Verdict {
    let bounded = d.leq(a, u) && d.leq(b, u);
    match d.lub(a, b) {
        Ok(l) => {
            if !d.leq(a, &l) || !d.leq(b, &l) {
                return fail(d, "lub is an upper bound", &[a, b, &l]);
            }
            if bounded && !d.leq(&l, u) {
                return fail(d, "lub is least", &[a, b, u]);
            }
            if !d.equal(&l, &d.lub(b, a).map_err(|e| e.to_string())?) {
                return fail(d, "lub is commutative", &[a, b]);
            }
            Ok(())
        }
        Err(_) if bounded => fail(d, "lub exists below a common upper bound", &[a, b, u]),
        Err(_) => Ok(()),
    }
}

/// The total order is consistent with equality, antisymmetric and
/// transitive.
pub fn check_compare(d: &dyn Domain, a: &Value, b: &Value, c: &Value) -> Verdict {
    let ab = d.compare(a, b);
    if (ab == Ordering::Equal) != d.equal(a, b) {
        return fail(d, "compare agrees with equal", &[a, b]);
    }
    if (ab == Ordering::Equal) != (a == b) {
        return fail(d, "equality is structural", &[a, b]);
    }
    if d.compare(b, a) != ab.reverse() {
        return fail(d, "compare is antisymmetric", &[a, b]);
    }
    if ab != Ordering::Greater
        && d.compare(b, c) != Ordering::Greater
        && d.compare(a, c) == Ordering::Greater
    {
        return fail(d, "compare is transitive", &[a, b, c]);
    }
    Ok(())
}

/// All of the above on one triple.
pub fn check_all(d: &dyn Domain, a: &Value, b: &Value, c: &Value) -> Verdict {
    check_order(d, a, b, c)?;
    check_lub(d, a, b, c)?;
    check_compare(d, a, b, c)
}

/// Sorting a sample by the total order is idempotent.
pub fn check_sort(d: &dyn Domain, xs: &[Value]) -> Verdict {
    let mut once = xs.to_vec();
    once.sort_by(|x, y| d.compare(x, y));
    let mut twice = once.clone();
    twice.sort_by(|x, y| d.compare(x, y));
    if once != twice {
        return Err("sorting is not idempotent".to_string());
    }
    if once
        .windows(2)
        .any(|w| d.compare(&w[0], &w[1]) == Ordering::Greater)
    {
        return Err("sorted sample is out of order".to_string());
    }
    Ok(())
}
