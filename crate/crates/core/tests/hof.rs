use std::collections::BTreeMap;

use fixcalc_core::analyses::cps_demo_functional;
use fixcalc_core::hof::{hof_fix, r2v, v2r, HValue, HofFix, Needs, Res, ResGraph};
use fixcalc_core::report::{hof_demo, Style};

/// The CPS example over first-order `k : {0,1} -> {0,1}`, tabulated by
/// round-robin iteration. `k` is encoded as `(k(0), k(1))`.
fn cps_oracle() -> BTreeMap<(u64, (u64, u64)), u64> {
    let ks = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let mut g: BTreeMap<(u64, (u64, u64)), u64> = BTreeMap::new();
    for n in 0..2 {
        for k in ks {
            g.insert((n, k), 0);
        }
    }
    loop {
        let mut next = g.clone();
        for n in 0..2u64 {
            for k in ks {
                let apply = |x: u64| if x == 0 { k.0 } else { k.1 };
                // m(n, k) = λx. k(n ⊓ x)
                let m = (apply(0), apply(n));
                next.insert((n, k), n.min(k.1.max(g[&(n, m)])));
            }
        }
        if next == g {
            return g;
        }
        g = next;
    }
}

fn query(f: &str, x: u64) -> u64 {
    let fix = hof_fix(cps_demo_functional());
    match fix.query(&[HValue::str(f), HValue::Nat(x)]).unwrap() {
        HValue::Nat(n) => n,
        HValue::Bot => 0,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn demo_tabulation_is_exact() {
    let out = hof_demo(Style::default()).unwrap();
    assert_eq!(
        out,
        "ft: [1] => (1, [])\n\
         g: [1,{[1]->1}] => (1, [[],[[1]]])\n\
         m: [1,{[1]->1},1] => (1, [[],[[1]],[]])\n\
         top: [1] => (1, [])\n\
         ft [1] = 1\n"
    );
    let ascii = hof_demo(Style { ascii: true }).unwrap();
    assert_eq!(ascii, out);
}

#[test]
fn fb_and_ft_match_first_order_oracle() {
    let oracle = cps_oracle();
    for x in 0..2 {
        assert_eq!(query("fb", x), oracle[&(x, (0, 0))], "fb {x}");
        assert_eq!(query("ft", x), oracle[&(x, (1, 1))], "ft {x}");
    }
    assert_eq!(query("fb", 1), 0);
    assert_eq!(query("ft", 1), 1);
}

#[test]
fn g_with_top_at_zero() {
    let fix = hof_fix(cps_demo_functional());
    let top = fix.query(&[HValue::str("top")]).unwrap();
    let v = fix.query(&[HValue::str("g"), HValue::Nat(0), top]).unwrap();
    assert!(matches!(v, HValue::Nat(0)));
}

#[test]
fn deterministic() {
    let run = || {
        let fix = hof_fix(cps_demo_functional());
        fix.query(&[HValue::str("ft"), HValue::Nat(1)]).unwrap();
        (fix.graph(), fix.rhs_evals(), fix.passes())
    };
    let first = run();
    for _ in 0..5 {
        assert_eq!(run(), first);
    }
}

fn logged(f: &str, x: u64) -> HofFix {
    let fix = HofFix::with_needs_log(cps_demo_functional());
    fix.query(&[HValue::str(f), HValue::Nat(x)]).unwrap();
    fix
}

#[test]
fn needs_chains_ascend_strictly() {
    for (f, x) in [("ft", 1), ("fb", 1), ("ft", 0)] {
        let log = logged(f, x).needs_log();
        assert!(!log.is_empty());
        for chain in log {
            assert!(chain[0] == Needs::bottom());
            for w in chain.windows(2) {
                assert!(w[0].leq(&w[1]), "{} then {}", w[0], w[1]);
                assert!(!w[0].same(&w[1]), "repeated {}", w[0]);
            }
        }
    }
}

#[test]
fn tabulation_is_a_post_fixpoint_of_lub() {
    let fix = logged("ft", 1);
    let g = fix.graph();
    assert!(g.leq(&g.lub(&g).unwrap()) && g.lub(&g).unwrap().leq(&g));
}

#[test]
fn res_round_trip() {
    let mut inner = ResGraph::new();
    inner.insert(vec![Res::Nat(1)], (Res::Nat(1), Needs::bottom()));
    let mut outer = ResGraph::new();
    outer.insert(
        vec![Res::str("k"), Res::Graph(inner.clone())],
        (Res::Nat(0), Needs::empty(2)),
    );
    for r in [
        Res::Bot,
        Res::Nat(0),
        Res::str("ft"),
        Res::Graph(inner),
        Res::Graph(outer),
    ] {
        assert_eq!(v2r(&r2v(&r)), r);
    }
}
