mod support;

use fixcalc_core::domain::nat_domain;
use fixcalc_core::solvers::{Solution, SolverKind};
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::System;

fn solve_all(sys: &System, kind: SolverKind) -> Vec<u8> {
    let s = Solution::new(kind, nat_domain(), sys.carrier.domain(), sys.functional())
        .with_universe(sys.keys());
    sys.keys()
        .iter()
        .map(|k| sys.carrier.decode(&s.query(k).unwrap()))
        .collect()
}

#[test]
fn every_solver_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..300 {
        let sys = System::random(&mut rng);
        let expected = sys.brute_force();
        for kind in SolverKind::ALL {
            assert_eq!(
                solve_all(&sys, kind),
                expected,
                "case {case}, {kind}: {sys:?}"
            );
        }
    }
}

// A fresh solution per key, so each query starts from an empty memo and
// only tabulates what that key needs.
#[test]
fn single_queries_on_fresh_solutions() {
    let mut rng = StdRng::seed_from_u64(17);
    for case in 0..150 {
        let sys = System::random(&mut rng);
        let expected = sys.brute_force();
        for kind in SolverKind::ALL {
            for (i, k) in sys.keys().iter().enumerate() {
                let s = Solution::new(kind, nat_domain(), sys.carrier.domain(), sys.functional())
                    .with_universe(sys.keys());
                let got = sys.carrier.decode(&s.query(k).unwrap());
                assert_eq!(got, expected[i], "case {case}, {kind}, key {i}");
            }
        }
    }
}

#[test]
fn demand_driven_solvers_tabulate_only_reachable_keys() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..100 {
        let sys = System::random(&mut rng);
        let s = Solution::new(
            SolverKind::Tdf,
            nat_domain(),
            sys.carrier.domain(),
            sys.functional(),
        );
        s.query(&sys.keys()[0]).unwrap();
        assert!(s.graph().len() <= sys.rhs.len());
    }
}

#[test]
fn repeated_queries_are_free() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let sys = System::random(&mut rng);
        for kind in SolverKind::ALL {
            let s = Solution::new(kind, nat_domain(), sys.carrier.domain(), sys.functional())
                .with_universe(sys.keys());
            let k = &sys.keys()[0];
            let v = s.query(k).unwrap();
            let evals = s.stats().rhs_evals;
            assert_eq!(s.query(k).unwrap(), v);
            assert_eq!(s.stats().rhs_evals, evals);
        }
    }
}
