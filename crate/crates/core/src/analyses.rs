//! Client analyses built on the solvers: first-order strictness analysis
//! and grammar FIRST sets. Also the demo functionals used by the command
//! line: the oscillating counterexample and the CPS strictness example for
//! the higher-order fixpoint.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::domain::{
    flat_string_domain, list_domain, nat_domain, set_domain, tuple_domain, Dom, Value,
};
use crate::hof::{glb, higher_order, lub_v, partial_application, HValue, HigherOrder};
use crate::solvers::{
    functional, instrument, CmpCounter, Functional, Query, Solution, SolveError, SolverKind,
    SolverStats,
};

// ---------------------------------------------------------------------------
// Strictness

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Param(String),
    Const(u64),
    Add(Box<Expr>, Box<Expr>),
    Cond(Box<Expr>, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
}

/// A validated first-order program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    defs: Vec<Definition>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("function `{0}` is defined twice")]
    Duplicate(String),
    #[error("call to undefined function `{0}`")]
    Undefined(String),
    #[error("`{name}` takes {expected} arguments, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("unbound parameter `{param}` in `{name}`")]
    Unbound { name: String, param: String },
}

impl Program {
    pub fn new(defs: Vec<Definition>) -> Result<Program, ProgramError> {
        let p = Program { defs };
        let mut seen = BTreeSet::new();
        for d in &p.defs {
            if !seen.insert(d.name.as_str()) {
                return Err(ProgramError::Duplicate(d.name.clone()));
            }
        }
        for d in &p.defs {
            p.check(d, &d.body)?;
        }
        Ok(p)
    }

    fn check(&self, d: &Definition, e: &Expr) -> Result<(), ProgramError> {
        match e {
            Expr::Param(x) if !d.params.contains(x) => Err(ProgramError::Unbound {
                name: d.name.clone(),
                param: x.clone(),
            }),
            Expr::Param(_) | Expr::Const(_) => Ok(()),
            Expr::Add(a, b) => {
                self.check(d, a)?;
                self.check(d, b)
            }
            Expr::Cond(c, t, f) => {
                self.check(d, c)?;
                self.check(d, t)?;
                self.check(d, f)
            }
            Expr::Call(f, args) => {
                self.arity_check(f, args.len())?;
                args.iter().try_for_each(|a| self.check(d, a))
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.defs.iter().find(|d| d.name == name)
    }

    pub fn defs(&self) -> &[Definition] {
        &self.defs
    }

    pub fn arity_check(&self, name: &str, got: usize) -> Result<(), ProgramError> {
        let d = self
            .get(name)
            .ok_or_else(|| ProgramError::Undefined(name.to_string()))?;
        if d.params.len() != got {
            return Err(ProgramError::Arity {
                name: name.to_string(),
                expected: d.params.len(),
                got,
            });
        }
        Ok(())
    }
}

/// Argument domain of the strictness analysis: function name paired with
/// the abstract argument list.
pub fn strictness_arg_domain() -> Dom {
    tuple_domain(flat_string_domain(), list_domain(nat_domain()))
}

pub fn strictness_key(name: &str, args: &[u64]) -> Vec<Value> {
    vec![Value::Tuple(vec![
        Value::str(name),
        Value::Seq(args.iter().map(|&b| Value::Nat(b)).collect()),
    ])]
}

/// Abstract semantics over `{0, 1}`: constants are 1, `+` is the minimum,
/// a conditional is `test ⊓ (then ⊔ else)`, and calls go through the
/// recursive query.
pub fn strictness_functional(p: &Program) -> Functional {
    let p = Arc::new(p.clone());
    functional(move |seval, x| {
        let (name, args) = split_key(x)?;
        let d = p
            .get(&name)
            .ok_or_else(|| SolveError::Functional(format!("no function `{name}`")))?;
        let env: Vec<(&str, u64)> = d.params.iter().map(String::as_str).zip(args).collect();
        eval_abstract(seval, &env, &d.body)
    })
}

fn split_key(x: &[Value]) -> Result<(String, Vec<u64>), SolveError> {
    let bad = || SolveError::Functional(format!("malformed strictness argument {x:?}"));
    let [Value::Tuple(parts)] = x else {
        return Err(bad());
    };
    match parts.as_slice() {
        [Value::Str(name), Value::Seq(args)] => {
            let args = args
                .iter()
                .map(|a| a.as_nat().ok_or_else(bad))
                .collect::<Result<_, _>>()?;
            Ok((name.clone(), args))
        }
        _ => Err(bad()),
    }
}

fn eval_abstract(seval: &Query<'_>, env: &[(&str, u64)], e: &Expr) -> Result<Value, SolveError> {
    let nat = |e: &Expr| -> Result<u64, SolveError> {
        Ok(eval_abstract(seval, env, e)?.as_nat().unwrap_or(0))
    };
    let v = match e {
        Expr::Const(_) => 1,
        Expr::Param(x) => env.iter().find(|(p, _)| p == x).map_or(0, |&(_, v)| v),
        Expr::Add(a, b) => nat(a)?.min(nat(b)?),
        Expr::Cond(c, t, f) => nat(c)?.min(nat(t)?.max(nat(f)?)),
        Expr::Call(f, args) => {
            let vals = args.iter().map(nat).collect::<Result<Vec<_>, _>>()?;
            return seval(&strictness_key(f, &vals));
        }
    };
    Ok(Value::Nat(v))
}

/// The solved strictness function of a program.
pub struct Strictness {
    program: Program,
    solution: Solution,
}

pub fn analyze_strictness(p: &Program, kind: SolverKind) -> Strictness {
    Strictness {
        program: p.clone(),
        solution: Solution::new(
            kind,
            strictness_arg_domain(),
            nat_domain(),
            strictness_functional(p),
        ),
    }
}

/// As [`analyze_strictness`], counting every comparison of names and
/// abstract values in the solver's statistics.
pub fn analyze_strictness_counted(p: &Program, kind: SolverKind) -> Strictness {
    let counter = CmpCounter::new();
    let nats = instrument(nat_domain(), &counter);
    let arg = tuple_domain(
        instrument(flat_string_domain(), &counter),
        list_domain(nats.clone()),
    );
    Strictness {
        program: p.clone(),
        solution: Solution::new(kind, arg, nats, strictness_functional(p)).with_counter(counter),
    }
}

impl Strictness {
    pub fn query(&self, name: &str, args: &[u64]) -> Result<u64, AnalysisError> {
        self.program.arity_check(name, args.len())?;
        if let Some(b) = args.iter().find(|&&b| b > 1) {
            return Err(AnalysisError::NotAbstract(*b));
        }
        let v = self.solution.query(&strictness_key(name, args))?;
        Ok(v.as_nat().unwrap_or(0))
    }

    /// True when `name` returns 0 with parameter `i` at 0 and the rest at 1.
    pub fn is_strict_in(&self, name: &str, i: usize) -> Result<bool, AnalysisError> {
        let arity = self
            .program
            .get(name)
            .ok_or_else(|| ProgramError::Undefined(name.to_string()))?
            .params
            .len();
        let args: Vec<u64> = (0..arity).map(|j| u64::from(j != i)).collect();
        Ok(self.query(name, &args)? == 0)
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("abstract values are 0 or 1, got {0}")]
    NotAbstract(u64),
    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),
    #[error("solvers {left} and {right} disagree")]
    Disagreement { left: SolverKind, right: SolverKind },
}

impl AnalysisError {
    /// Failures of the solver or of the analysis' own invariants, as
    /// opposed to bad input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            AnalysisError::Solve(_) | AnalysisError::Disagreement { .. }
        )
    }
}

// ---------------------------------------------------------------------------
// FIRST sets

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Nt(String),
    Tm(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub productions: Vec<Production>,
}

impl Grammar {
    pub fn nonterminals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.productions {
            if !out.contains(&p.lhs) {
                out.push(p.lhs.clone());
            }
        }
        out
    }

    /// Nonterminals used on a right-hand side without any production.
    pub fn undefined(&self) -> Vec<String> {
        let defined = self.nonterminals();
        let mut out = Vec::new();
        for p in &self.productions {
            for e in &p.rhs {
                if let Elem::Nt(n) = e {
                    if !defined.contains(n) && !out.contains(n) {
                        out.push(n.clone());
                    }
                }
            }
        }
        out
    }
}

/// The expression grammar used in the examples. Note `term : term "+"
/// factor`; a conventional grammar would use `*`, which does not change
/// any FIRST set.
pub fn expression_grammar() -> Grammar {
    let nt = |s: &str| Elem::Nt(s.to_string());
    let tm = |s: &str| Elem::Tm(s.to_string());
    let prod = |lhs: &str, rhs: Vec<Elem>| Production {
        lhs: lhs.to_string(),
        rhs,
    };
    Grammar {
        productions: vec![
            prod("exp", vec![nt("exp"), tm("+"), nt("term")]),
            prod("exp", vec![nt("term")]),
            prod("term", vec![nt("term"), tm("+"), nt("factor")]),
            prod("term", vec![nt("factor")]),
            prod("factor", vec![tm("name")]),
            prod("factor", vec![tm("number")]),
            prod("factor", vec![tm("("), nt("exp"), tm(")")]),
        ],
    }
}

/// The set domain of FIRST results. `""` marks epsilon.
pub fn first_res_domain(strings: Dom) -> Dom {
    set_domain(strings)
}

/// FIRST of a right-hand side given FIRST of its nonterminals.
pub fn firstrh(
    first: &Query<'_>,
    sets: &crate::domain::SetDomain,
    rhs: &[Elem],
) -> Result<Value, SolveError> {
    match rhs.split_first() {
        None => Ok(sets.singleton(Value::str(""))),
        Some((Elem::Tm(t), _)) => Ok(sets.singleton(Value::str(t))),
        Some((Elem::Nt(n), rest)) => {
            let f = first(&[Value::str(n)])?;
            let eps = sets.singleton(Value::str(""));
            if sets.member(&f, &Value::str("")) {
                // Epsilon survives only if the rest is nullable too.
                Ok(sets.union(&sets.difference(&f, &eps), &firstrh(first, sets, rest)?))
            } else {
                Ok(f)
            }
        }
    }
}

/// `first(s)` is the union of FIRST over the right-hand sides of `s`.
///
/// `strings` is used for both the argument domain and the set elements,
/// so an instrumented string domain counts every base comparison.
pub fn first_functional(g: &Grammar, strings: Dom) -> Functional {
    let mut by_lhs: HashMap<String, Vec<Vec<Elem>>> = HashMap::new();
    for p in &g.productions {
        by_lhs.entry(p.lhs.clone()).or_default().push(p.rhs.clone());
    }
    let sets = set_domain(strings);
    functional(move |first, x| {
        let name = x.first().and_then(Value::as_str).unwrap_or("");
        let mut acc = sets.empty();
        for rhs in by_lhs.get(name).into_iter().flatten() {
            acc = sets.union(&acc, &firstrh(first, &sets, rhs)?);
        }
        Ok(acc)
    })
}

/// The solved FIRST function of a grammar.
pub struct FirstSets {
    nonterminals: Vec<String>,
    solution: Solution,
}

pub fn first_sets(g: &Grammar, kind: SolverKind) -> FirstSets {
    first_sets_in(g, kind, flat_string_domain())
}

/// As [`first_sets`], counting every string comparison in the solver's
/// statistics.
pub fn first_sets_counted(g: &Grammar, kind: SolverKind) -> FirstSets {
    let counter = CmpCounter::new();
    first_sets_in(g, kind, instrument(flat_string_domain(), &counter)).with_counter(counter)
}

/// As [`first_sets`], over a caller-supplied string domain.
pub fn first_sets_in(g: &Grammar, kind: SolverKind, strings: Dom) -> FirstSets {
    let universe = g
        .nonterminals()
        .iter()
        .map(|n| vec![Value::str(n)])
        .collect();
    let solution = Solution::new(
        kind,
        strings.clone(),
        first_res_domain(strings.clone()),
        first_functional(g, strings),
    )
    .with_universe(universe);
    FirstSets {
        nonterminals: g.nonterminals(),
        solution,
    }
}

impl FirstSets {
    /// FIRST of `nt` as sorted terminal texts, `""` for epsilon.
    pub fn query(&self, nt: &str) -> Result<Vec<String>, AnalysisError> {
        if !self.nonterminals.iter().any(|n| n == nt) {
            return Err(AnalysisError::UnknownNonterminal(nt.to_string()));
        }
        let v = self.solution.query(&[Value::str(nt)])?;
        Ok(v.as_seq()
            .unwrap_or(&[])
            .iter()
            .filter_map(|t| t.as_str().map(str::to_string))
            .collect())
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn with_counter(self, counter: CmpCounter) -> FirstSets {
        FirstSets {
            solution: self.solution.with_counter(counter),
            ..self
        }
    }
}

/// One solver's FIRST sets for every nonterminal, with its counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub kind: SolverKind,
    pub stats: SolverStats,
    pub sets: Vec<(String, Vec<String>)>,
}

/// Computes every FIRST set under each of the six solvers with a counting
/// string domain, and checks that all solvers agree.
pub fn bench_first(g: &Grammar) -> Result<Vec<BenchRow>, AnalysisError> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for kind in SolverKind::ALL {
        let first = first_sets_counted(g, kind);
        let sets = g
            .nonterminals()
            .into_iter()
            .map(|n| first.query(&n).map(|s| (n, s)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first_row) = rows.first() {
            if first_row.sets != sets {
                return Err(AnalysisError::Disagreement {
                    left: first_row.kind,
                    right: kind,
                });
            }
        }
        rows.push(BenchRow {
            kind,
            stats: first.solution().stats(),
            sets,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Demo functionals

/// `G φ x = φ(φ(x)) ⊕ 1` over `{0, 1, 2}` with `x ⊕ 1 = min(x + 1, 2)`.
/// Plain re-evaluation of it oscillates; accumulating iteration does not.
pub fn oscillation_fixture() -> Functional {
    functional(|phi, x| {
        let inner = phi(x)?;
        let outer = phi(&[inner])?;
        Ok(Value::Nat((outer.as_nat().unwrap_or(0) + 1).min(2)))
    })
}

pub fn oscillation_universe() -> Vec<Vec<Value>> {
    (0..=2).map(|n| vec![Value::Nat(n)]).collect()
}

/// Strictness abstraction of a CPS factorial, for the higher-order
/// fixpoint:
///
/// ```text
/// g(n, k)    = n ⊓ (k(1) ⊔ g(n, m(n, k)))
/// m(n, k, x) = k(n ⊓ x)
/// top(x) = 1    bot(x) = 0
/// ft(x) = g(x, top)    fb(x) = g(x, bot)
/// ```
///
/// A call with too few arguments yields a partial application.
pub fn cps_demo_functional() -> HigherOrder {
    higher_order(|call, xs| {
        let name = match xs.first() {
            Some(HValue::Str(s)) => s.as_str(),
            _ => "",
        };
        let s = HValue::str;
        match (name, &xs[1.min(xs.len())..]) {
            ("g", [n, k]) => {
                let direct = call(&[k.clone(), HValue::Nat(1)])?;
                let m = call(&[s("m"), n.clone(), k.clone()])?;
                let rec = call(&[s("g"), n.clone(), m])?;
                Ok(glb(n, &lub_v(&direct, &rec)?))
            }
            ("m", [n, k, x]) => call(&[k.clone(), glb(n, x)]),
            ("top", [_]) => Ok(HValue::Nat(1)),
            ("bot", [_]) => Ok(HValue::Nat(0)),
            ("fb", [x]) => {
                let bot = call(&[s("bot")])?;
                call(&[s("g"), x.clone(), bot])
            }
            ("ft", [x]) => {
                let top = call(&[s("top")])?;
                call(&[s("g"), x.clone(), top])
            }
            _ => Ok(partial_application(call, xs)),
        }
    })
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nt(n) => f.write_str(n),
            Elem::Tm(t) => write!(f, "{t:?}"),
        }
    }
}
