//! Second-order fixpoint solvers over function graphs.
//!
//! A [`Functional`] receives a recursive query and an argument vector and
//! returns the right-hand side at that argument. Every solver computes the
//! least fixpoint of the functional at the queried arguments, tabulating
//! only the arguments transitively needed from the query. The strategies
//! differ in scheduling and in the bookkeeping they maintain, which shows
//! up in [`SolverStats`] but never in the results.
//!
//! Solved values are memoized: once a query has stabilised, its whole
//! tabulation is kept and later queries reuse it without re-evaluation.

mod instrument;
mod intern;
mod memo;
mod strategies;

use std::cell::{Cell, RefCell};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::domain::{Dom, DomainError, FunctionGraph, GraphDomain, Value};

pub use instrument::{instrument, CmpCounter, Instrumented};
pub use memo::{memo, memo_fix, Memo, MemoFix};

/// Recursive query handed to a functional.
pub type Query<'a> = dyn Fn(&[Value]) -> Result<Value, SolveError> + 'a;

/// Right-hand side of a recursive definition: `G φ x`.
///
/// Expected to be pseudo-monotonic. A functional that is not may make a
/// solver fail with [`SolveError::Domain`] or loop forever; neither is
/// detected in general.
pub type Functional = Arc<dyn Fn(&Query<'_>, &[Value]) -> Result<Value, SolveError> + Send + Sync>;

pub fn functional<F>(f: F) -> Functional
where
    F: Fn(&Query<'_>, &[Value]) -> Result<Value, SolveError> + Send + Sync + 'static,
{
    Arc::new(f)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    /// Raised by a functional, e.g. for an argument outside its definition.
    #[error("{0}")]
    Functional(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Kleene,
    Dep,
    TopDown,
    Worklist,
    Tdf,
    TdfSub,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Kleene,
        SolverKind::Dep,
        SolverKind::TopDown,
        SolverKind::Worklist,
        SolverKind::Tdf,
        SolverKind::TdfSub,
    ];

    /// Command-line spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            SolverKind::Kleene => "kleene",
            SolverKind::Dep => "dep",
            SolverKind::TopDown => "td",
            SolverKind::Worklist => "w",
            SolverKind::Tdf => "tdf",
            SolverKind::TdfSub => "tdf-sub",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Kleene => "Kleene",
            SolverKind::Dep => "Dep",
            SolverKind::TopDown => "TD",
            SolverKind::Worklist => "W",
            SolverKind::Tdf => "TDF",
            SolverKind::TdfSub => "TDF-sub",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown solver `{0}` (expected one of kleene, dep, td, w, tdf, tdf-sub)")]
pub struct UnknownSolver(pub String);

impl FromStr for SolverKind {
    type Err = UnknownSolver;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.cli_name() == s)
            .ok_or_else(|| UnknownSolver(s.to_string()))
    }
}

/// Work counters for one solved function.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    /// Invocations of the functional, confirming passes included.
    pub rhs_evals: u64,
    /// Base-element comparisons counted by an attached [`CmpCounter`].
    pub cmp_count: u64,
}

/// State shared by all strategies during one run.
pub(crate) struct Ctx {
    graphs: GraphDomain,
    functional: Functional,
    rhs: Cell<u64>,
}

impl Ctx {
    fn eval(&self, query: &Query<'_>, x: &[Value]) -> Result<Value, SolveError> {
        self.rhs.set(self.rhs.get() + 1);
        (self.functional)(query, x)
    }
}

/// Result of running a strategy for one query.
pub(crate) struct Run {
    graph: FunctionGraph,
    passes: Vec<FunctionGraph>,
}

/// A solved function: the least fixpoint of a functional, evaluated on
/// demand and memoized across queries.
pub struct Solution {
    kind: SolverKind,
    ctx: Ctx,
    solved: RefCell<FunctionGraph>,
    passes: RefCell<Vec<FunctionGraph>>,
    universe: Vec<Vec<Value>>,
    counter: Option<CmpCounter>,
}

impl Solution {
    pub fn new(kind: SolverKind, arg: Dom, res: Dom, functional: Functional) -> Self {
        Solution {
            kind,
            ctx: Ctx {
                graphs: GraphDomain::new(arg, res),
                functional,
                rhs: Cell::new(0),
            },
            solved: RefCell::new(FunctionGraph::new()),
            passes: RefCell::new(Vec::new()),
            universe: Vec::new(),
            counter: None,
        }
    }

    /// Extra argument vectors tabulated on the first query. Only the Kleene
    /// strategy uses them; the others discover needed arguments themselves.
    pub fn with_universe(mut self, universe: Vec<Vec<Value>>) -> Self {
        self.universe = universe;
        self
    }

    /// Reports the counter's value as [`SolverStats::cmp_count`].
    pub fn with_counter(mut self, counter: CmpCounter) -> Self {
        self.counter = Some(counter);
        self
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    pub fn graphs(&self) -> &GraphDomain {
        &self.ctx.graphs
    }

    pub fn query(&self, x: &[Value]) -> Result<Value, SolveError> {
        let graphs = &self.ctx.graphs;
        if let Some(v) = graphs.get(&self.solved.borrow(), x) {
            return Ok(v.clone());
        }
        let run = {
            let solved = self.solved.borrow();
            match self.kind {
                SolverKind::Kleene => strategies::kleene(&self.ctx, &solved, x, &self.universe)?,
                SolverKind::Dep => strategies::dep(&self.ctx, &solved, x)?,
                SolverKind::TopDown => strategies::top_down(&self.ctx, &solved, x)?,
                SolverKind::Worklist => strategies::worklist(&self.ctx, &solved, x)?,
                SolverKind::Tdf => strategies::tdf(&self.ctx, &solved, x, false)?,
                SolverKind::TdfSub => strategies::tdf(&self.ctx, &solved, x, true)?,
            }
        };
        let mut solved = self.solved.borrow_mut();
        for (k, v) in run.graph.iter() {
            graphs.insert(&mut solved, k, v.clone());
        }
        *self.passes.borrow_mut() = run.passes;
        Ok(graphs.lookup(&solved, x))
    }

    /// Every tabulated argument with its least fixpoint value.
    pub fn graph(&self) -> FunctionGraph {
        self.solved.borrow().clone()
    }

    /// Snapshots of the working graph after each outer pass of the most
    /// recent query that ran the strategy.
    pub fn passes(&self) -> Vec<FunctionGraph> {
        self.passes.borrow().clone()
    }

    pub fn stats(&self) -> SolverStats {
        SolverStats {
            rhs_evals: self.ctx.rhs.get(),
            cmp_count: self.counter.as_ref().map_or(0, CmpCounter::get),
        }
    }
}

pub fn fix_tdf(arg: Dom, res: Dom, f: Functional) -> Solution {
    Solution::new(SolverKind::Tdf, arg, res, f)
}

pub fn fix_tdf_sub(arg: Dom, res: Dom, f: Functional) -> Solution {
    Solution::new(SolverKind::TdfSub, arg, res, f)
}

pub fn fix_kleene(arg: Dom, res: Dom, f: Functional, universe: Vec<Vec<Value>>) -> Solution {
    Solution::new(SolverKind::Kleene, arg, res, f).with_universe(universe)
}

pub fn fix_worklist(arg: Dom, res: Dom, f: Functional) -> Solution {
    Solution::new(SolverKind::Worklist, arg, res, f)
}

pub fn fix_topdown(arg: Dom, res: Dom, f: Functional) -> Solution {
    Solution::new(SolverKind::TopDown, arg, res, f)
}

pub fn fix_dep(arg: Dom, res: Dom, f: Functional) -> Solution {
    Solution::new(SolverKind::Dep, arg, res, f)
}

/// Evaluates `G f x` once with `f` given by a graph, returning the result
/// and the argument vectors `f` was queried at, sorted and deduplicated.
pub fn record_needs(
    f: &Functional,
    graphs: &GraphDomain,
    phi: &FunctionGraph,
    x: &[Value],
) -> Result<(Value, Vec<Vec<Value>>), SolveError> {
    let seen = RefCell::new(FunctionGraph::new());
    let query = |y: &[Value]| {
        graphs.insert(&mut seen.borrow_mut(), y, Value::Bot);
        Ok::<_, SolveError>(graphs.lookup(phi, y))
    };
    let v = f(&query, x)?;
    let needs = seen.into_inner().keys().map(<[Value]>::to_vec).collect();
    Ok((v, needs))
}

/// Partial fixpoint iteration restricted to the fixed argument set `keys`.
///
/// Returns `φ0, φ1, ..., φsteps`. With `accumulate` set, each step joins the
/// previous value with the re-evaluated one; without it the step is plain
/// re-evaluation, which need not form an ascending chain.
pub fn partial_iteration(
    f: &Functional,
    graphs: &GraphDomain,
    keys: &[Vec<Value>],
    steps: usize,
    accumulate: bool,
) -> Result<Vec<FunctionGraph>, SolveError> {
    let mut seq = vec![FunctionGraph::new()];
    for _ in 0..steps {
        let phi = seq.last().expect("sequence starts non-empty");
        let mut next = phi.clone();
        for k in keys {
            let r = f(&|y: &[Value]| Ok(graphs.lookup(phi, y)), k)?;
            let v = if accumulate {
                graphs.res().lub(&graphs.lookup(phi, k), &r)?
            } else {
                r
            };
            graphs.insert(&mut next, k, v);
        }
        seq.push(next);
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::nat_domain;

    fn constant(n: u64) -> Functional {
        functional(move |_, _| Ok(Value::Nat(n)))
    }

    // φ(φ(x)) ⊕ 1 over {0,1,2}, with x ⊕ 1 = min(x + 1, 2).
    fn oscillating() -> Functional {
        functional(|phi, x| {
            let inner = phi(x)?;
            let outer = phi(&[inner])?;
            Ok(Value::Nat((outer.as_nat().unwrap_or(0) + 1).min(2)))
        })
    }

    fn key(n: u64) -> Vec<Value> {
        vec![Value::Nat(n)]
    }

    #[test]
    fn solver_names_round_trip() {
        for kind in SolverKind::ALL {
            assert_eq!(kind.cli_name().parse::<SolverKind>().unwrap(), kind);
        }
        assert!("bfs".parse::<SolverKind>().is_err());
        assert_eq!(SolverKind::TdfSub.to_string(), "TDF-sub");
    }

    #[test]
    fn tdf_constant_takes_two_passes() {
        let s = fix_tdf(nat_domain(), nat_domain(), constant(7));
        assert_eq!(s.query(&key(3)).unwrap(), Value::Nat(7));
        assert_eq!(s.passes().len(), 2);
        assert_eq!(s.stats().rhs_evals, 2);
    }

    #[test]
    fn tdf_counterexample() {
        let s = fix_tdf(nat_domain(), nat_domain(), oscillating());
        assert_eq!(s.query(&key(1)).unwrap(), Value::Nat(2));
    }

    #[test]
    fn kleene_tabulates_universe() {
        let universe = vec![key(0), key(1), key(2)];
        let s = fix_kleene(nat_domain(), nat_domain(), constant(7), universe.clone());
        s.query(&key(0)).unwrap();
        let g = s.graph();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|(_, v)| *v == Value::Nat(7)));

        let s = fix_kleene(nat_domain(), nat_domain(), oscillating(), universe);
        s.query(&key(1)).unwrap();
        assert!(s.graph().iter().all(|(_, v)| *v == Value::Nat(2)));
    }

    #[test]
    fn worklist_constant_is_single_evaluation() {
        let s = fix_worklist(nat_domain(), nat_domain(), constant(7));
        assert_eq!(s.query(&key(4)).unwrap(), Value::Nat(7));
        assert_eq!(s.stats().rhs_evals, 1);
    }

    #[test]
    fn every_solver_handles_counterexample() {
        for kind in SolverKind::ALL {
            let s = Solution::new(kind, nat_domain(), nat_domain(), oscillating());
            assert_eq!(s.query(&key(1)).unwrap(), Value::Nat(2), "{kind}");
        }
    }

    #[test]
    fn memoized_across_queries() {
        for kind in SolverKind::ALL {
            let s = Solution::new(kind, nat_domain(), nat_domain(), oscillating());
            s.query(&key(1)).unwrap();
            let evals = s.stats().rhs_evals;
            s.query(&key(1)).unwrap();
            assert_eq!(s.stats().rhs_evals, evals, "{kind}");
        }
    }

    #[test]
    fn record_needs_examples() {
        let graphs = GraphDomain::new(nat_domain(), nat_domain());
        let (v, needs) =
            record_needs(&constant(7), &graphs, &FunctionGraph::new(), &key(1)).unwrap();
        assert_eq!((v, needs.len()), (Value::Nat(7), 0));

        let f = graphs.from_entries([(key(1), Value::Nat(1))]);
        let (v, needs) = record_needs(&oscillating(), &graphs, &f, &key(1)).unwrap();
        assert_eq!(v, Value::Nat(2));
        assert_eq!(needs, vec![key(1)]);

        let f = graphs.from_entries([(key(1), Value::Nat(2))]);
        let (v, needs) = record_needs(&oscillating(), &graphs, &f, &key(1)).unwrap();
        assert_eq!(v, Value::Nat(1));
        assert_eq!(needs, vec![key(1), key(2)]);
    }

    #[test]
    fn naive_iteration_oscillates() {
        let graphs = GraphDomain::new(nat_domain(), nat_domain());
        let trace = |accumulate| -> Vec<u64> {
            partial_iteration(&oscillating(), &graphs, &[key(1)], 5, accumulate)
                .unwrap()
                .iter()
                .map(|g| graphs.lookup(g, &key(1)).as_nat().unwrap())
                .collect()
        };
        assert_eq!(trace(false), vec![0, 1, 2, 1, 2, 1]);
        assert_eq!(trace(true), vec![0, 1, 2, 2, 2, 2]);
    }
}
