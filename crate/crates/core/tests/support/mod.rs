//! Random inputs and independent oracles for the integration tests.
//!
//! The oracles never call a solver: they tabulate whole universes by plain
//! round-robin iteration from bottom.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fixcalc_core::analyses::{Definition, Elem, Expr, Grammar, Production, Program};
use fixcalc_core::domain::{
    flat_string_domain, nat_domain, set_domain, Dom, FunctionGraph, GraphDomain, SetDomain, Value,
};
use fixcalc_core::solvers::{functional, Functional, Query, SolveError};
use rand::rngs::StdRng;
use rand::Rng;

// ---------------------------------------------------------------------------
// Random monotone equation systems

/// Carriers small enough to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    /// 0 < 1 < 2 < 3 < 4.
    Chain,
    /// Subsets of {a, b}, as two-bit masks.
    Powerset,
}

const LETTERS: [&str; 2] = ["a", "b"];

impl Carrier {
    pub fn elements(self) -> Vec<u8> {
        match self {
            Carrier::Chain => (0..5).collect(),
            Carrier::Powerset => (0..4).collect(),
        }
    }

    pub fn leq(self, a: u8, b: u8) -> bool {
        match self {
            Carrier::Chain => a <= b,
            Carrier::Powerset => a & !b == 0,
        }
    }

    pub fn join(self, a: u8, b: u8) -> u8 {
        match self {
            Carrier::Chain => a.max(b),
            Carrier::Powerset => a | b,
        }
    }

    pub fn meet(self, a: u8, b: u8) -> u8 {
        match self {
            Carrier::Chain => a.min(b),
            Carrier::Powerset => a & b,
        }
    }

    /// Monotone and inflationary.
    pub fn succ(self, a: u8) -> u8 {
        match self {
            Carrier::Chain => (a + 1).min(4),
            Carrier::Powerset => {
                if a & 1 == 0 {
                    a | 1
                } else {
                    a | 2
                }
            }
        }
    }

    pub fn domain(self) -> Dom {
        match self {
            Carrier::Chain => nat_domain(),
            Carrier::Powerset => set_domain(flat_string_domain()),
        }
    }

    pub fn encode(self, a: u8) -> Value {
        match self {
            Carrier::Chain => Value::Nat(u64::from(a)),
            Carrier::Powerset => SetDomain::new(flat_string_domain()).from_values(
                LETTERS
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| a & (1 << i) != 0)
                    .map(|(_, s)| Value::str(*s)),
            ),
        }
    }

    pub fn decode(self, v: &Value) -> u8 {
        match self {
            Carrier::Chain => v.as_nat().unwrap_or(0) as u8,
            Carrier::Powerset => v.as_seq().unwrap_or(&[]).iter().fold(0, |m, x| {
                let i = LETTERS.iter().position(|l| Some(*l) == x.as_str()).unwrap();
                m | (1 << i)
            }),
        }
    }
}

/// Right-hand side expressions. All constructors are monotone in the
/// values returned by queries.
#[derive(Clone, Debug)]
pub enum Rhs {
    Const(u8),
    Query(usize),
    Join(Box<Rhs>, Box<Rhs>),
    Meet(Box<Rhs>, Box<Rhs>),
    Succ(Box<Rhs>),
    /// `body` once `threshold ⊑ test`, bottom before. Makes the set of
    /// queried keys depend on intermediate values.
    Guard {
        test: Box<Rhs>,
        threshold: u8,
        body: Box<Rhs>,
    },
}

impl Rhs {
    pub fn eval<E>(&self, c: Carrier, q: &mut dyn FnMut(usize) -> Result<u8, E>) -> Result<u8, E> {
        Ok(match self {
            Rhs::Const(a) => *a,
            Rhs::Query(k) => q(*k)?,
            Rhs::Join(a, b) => {
                let a = a.eval(c, q)?;
                c.join(a, b.eval(c, q)?)
            }
            Rhs::Meet(a, b) => {
                let a = a.eval(c, q)?;
                c.meet(a, b.eval(c, q)?)
            }
            Rhs::Succ(a) => c.succ(a.eval(c, q)?),
            Rhs::Guard {
                test,
                threshold,
                body,
            } => {
                if c.leq(*threshold, test.eval(c, q)?) {
                    body.eval(c, q)?
                } else {
                    0
                }
            }
        })
    }
}

/// `x_k = rhs[k]` for keys `0..rhs.len()`.
#[derive(Clone, Debug)]
pub struct System {
    pub carrier: Carrier,
    pub rhs: Vec<Rhs>,
}

fn random_rhs(rng: &mut StdRng, c: Carrier, keys: usize, depth: u32) -> Rhs {
    let elems = c.elements();
    let pick = |rng: &mut StdRng| elems[rng.gen_range(0..elems.len())];
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.7) {
            Rhs::Query(rng.gen_range(0..keys))
        } else {
            Rhs::Const(pick(rng))
        };
    }
    let sub = |rng: &mut StdRng| Box::new(random_rhs(rng, c, keys, depth - 1));
    match rng.gen_range(0..4) {
        0 => Rhs::Join(sub(rng), sub(rng)),
        1 => Rhs::Meet(sub(rng), sub(rng)),
        2 => Rhs::Succ(sub(rng)),
        _ => Rhs::Guard {
            test: sub(rng),
            threshold: pick(rng),
            body: sub(rng),
        },
    }
}

impl System {
    pub fn random(rng: &mut StdRng) -> System {
        let carrier = if rng.gen_bool(0.5) {
            Carrier::Chain
        } else {
            Carrier::Powerset
        };
        let keys = rng.gen_range(1..=8);
        let rhs = (0..keys)
            .map(|_| random_rhs(rng, carrier, keys, 3))
            .collect();
        System { carrier, rhs }
    }

    pub fn keys(&self) -> Vec<Vec<Value>> {
        (0..self.rhs.len())
            .map(|k| vec![Value::Nat(k as u64)])
            .collect()
    }

    pub fn graphs(&self) -> GraphDomain {
        GraphDomain::new(nat_domain(), self.carrier.domain())
    }

    pub fn functional(&self) -> Functional {
        let sys = self.clone();
        functional(move |phi: &Query<'_>, x: &[Value]| {
            let k = x[0].as_nat().unwrap() as usize;
            let c = sys.carrier;
            let v = sys.rhs[k].eval(c, &mut |j| {
                Ok::<_, SolveError>(c.decode(&phi(&[Value::Nat(j as u64)])?))
            })?;
            Ok(c.encode(v))
        })
    }

    /// Least solution by round-robin iteration over all keys.
    pub fn brute_force(&self) -> Vec<u8> {
        let c = self.carrier;
        let mut cur = vec![0u8; self.rhs.len()];
        loop {
            let next: Vec<u8> = self
                .rhs
                .iter()
                .map(|r| r.eval(c, &mut |j| Ok::<_, ()>(cur[j])).unwrap())
                .collect();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// A graph with random values at a random subset of keys.
    pub fn random_graph(&self, rng: &mut StdRng) -> FunctionGraph {
        let graphs = self.graphs();
        let elems = self.carrier.elements();
        let mut g = FunctionGraph::new();
        for k in 0..self.rhs.len() {
            if rng.gen_bool(0.7) {
                let v = elems[rng.gen_range(0..elems.len())];
                graphs.insert(&mut g, &[Value::Nat(k as u64)], self.carrier.encode(v));
            }
        }
        g
    }
}

// ---------------------------------------------------------------------------
// Strictness

fn random_expr(rng: &mut StdRng, params: usize, sigs: &[(String, usize)], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.8) {
            Expr::Param(format!("p{}", rng.gen_range(0..params)))
        } else {
            Expr::Const(rng.gen_range(0..10))
        };
    }
    let sub = |rng: &mut StdRng| random_expr(rng, params, sigs, depth - 1);
    match rng.gen_range(0..3) {
        0 => Expr::Add(Box::new(sub(rng)), Box::new(sub(rng))),
        1 => Expr::Cond(Box::new(sub(rng)), Box::new(sub(rng)), Box::new(sub(rng))),
        _ => {
            let (name, arity) = &sigs[rng.gen_range(0..sigs.len())];
            Expr::Call(name.clone(), (0..*arity).map(|_| sub(rng)).collect())
        }
    }
}

pub fn random_program(rng: &mut StdRng) -> Program {
    let n = rng.gen_range(1..=3);
    let sigs: Vec<(String, usize)> = (0..n)
        .map(|i| (format!("f{i}"), rng.gen_range(1..=3)))
        .collect();
    let defs = sigs
        .iter()
        .map(|(name, arity)| Definition {
            name: name.clone(),
            params: (0..*arity).map(|i| format!("p{i}")).collect(),
            body: random_expr(rng, *arity, &sigs, 3),
        })
        .collect();
    Program::new(defs).expect("generated programs are well formed")
}

/// All bit vectors of length `n`.
pub fn bit_vectors(n: usize) -> Vec<Vec<u64>> {
    (0..1u64 << n)
        .map(|m| (0..n).map(|i| (m >> i) & 1).collect())
        .collect()
}

/// Abstract values of every function at every bit vector, by full
/// tabulation from the all-zero table.
pub fn strictness_oracle(p: &Program) -> BTreeMap<(String, Vec<u64>), u64> {
    let mut table: BTreeMap<(String, Vec<u64>), u64> = BTreeMap::new();
    for d in p.defs() {
        for bits in bit_vectors(d.params.len()) {
            table.insert((d.name.clone(), bits), 0);
        }
    }
    loop {
        let mut next = table.clone();
        for d in p.defs() {
            for bits in bit_vectors(d.params.len()) {
                let v = abstract_eval(&table, &d.params, &bits, &d.body);
                next.insert((d.name.clone(), bits), v);
            }
        }
        if next == table {
            return table;
        }
        table = next;
    }
}

fn abstract_eval(
    table: &BTreeMap<(String, Vec<u64>), u64>,
    params: &[String],
    bits: &[u64],
    e: &Expr,
) -> u64 {
    let ev = |e: &Expr| abstract_eval(table, params, bits, e);
    match e {
        Expr::Const(_) => 1,
        Expr::Param(x) => bits[params.iter().position(|p| p == x).unwrap()],
        Expr::Add(a, b) => ev(a) & ev(b),
        Expr::Cond(c, t, f) => ev(c) & (ev(t) | ev(f)),
        Expr::Call(f, args) => table[&(f.clone(), args.iter().map(ev).collect())],
    }
}

// ---------------------------------------------------------------------------
// FIRST sets

pub fn random_grammar(rng: &mut StdRng) -> Grammar {
    let nts: Vec<String> = (0..rng.gen_range(1..=4)).map(|i| format!("N{i}")).collect();
    let tms = ["a", "b", "c"];
    let mut productions = Vec::new();
    for lhs in &nts {
        for _ in 0..rng.gen_range(1..=3) {
            let rhs = (0..rng.gen_range(0..=3))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Elem::Nt(nts[rng.gen_range(0..nts.len())].clone())
                    } else {
                        Elem::Tm(tms[rng.gen_range(0..tms.len())].to_string())
                    }
                })
                .collect();
            productions.push(Production {
                lhs: lhs.clone(),
                rhs,
            });
        }
    }
    Grammar { productions }
}

/// FIRST sets by growing every set until nothing changes; `""` stands
/// for epsilon.
pub fn first_oracle(g: &Grammar) -> BTreeMap<String, BTreeSet<String>> {
    let mut first: BTreeMap<String, BTreeSet<String>> = g
        .nonterminals()
        .into_iter()
        .map(|n| (n, BTreeSet::new()))
        .collect();
    loop {
        let mut changed = false;
        for p in &g.productions {
            let mut add = BTreeSet::new();
            let mut nullable = true;
            for e in &p.rhs {
                match e {
                    Elem::Tm(t) => {
                        add.insert(t.clone());
                        nullable = false;
                    }
                    Elem::Nt(n) => {
                        let f = &first[n];
                        add.extend(f.iter().filter(|s| !s.is_empty()).cloned());
                        nullable = f.contains("");
                    }
                }
                if !nullable {
                    break;
                }
            }
            if nullable {
                add.insert(String::new());
            }
            let set = first.get_mut(&p.lhs).unwrap();
            for s in add {
                changed |= set.insert(s);
            }
        }
        if !changed {
            return first;
        }
    }
}
