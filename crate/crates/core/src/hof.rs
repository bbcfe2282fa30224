//! Need-instrumented higher-order values and the higher-order fixpoint
//! operator.
//!
//! A functional argument is represented twice: as a live closure and as a
//! finite [`ResGraph`] tabulating it at the argument vectors it is known to
//! be called with. Each tabulated entry also carries [`Needs`], the calls
//! made to its own functional arguments, so tabulation can be driven by
//! demand at every order.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use crate::domain::DomainError;
use crate::solvers::SolveError;

type Result<T> = std::result::Result<T, SolveError>;

/// First-order image of a higher-order value.
///
/// Variant order gives the total order: `Bot < Nat < Str < Graph`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Res {
    Bot,
    Nat(u64),
    Str(String),
    Graph(ResGraph),
}

impl Res {
    pub fn str(s: &str) -> Res {
        Res::Str(s.to_string())
    }

    pub fn leq(&self, other: &Res) -> bool {
        match (self, other) {
            (Res::Bot, _) => true,
            (Res::Nat(a), Res::Nat(b)) => a <= b,
            (Res::Str(a), Res::Str(b)) => a == b,
            (Res::Graph(a), Res::Graph(b)) => a.leq(b),
            _ => false,
        }
    }

    pub fn lub(&self, other: &Res) -> std::result::Result<Res, DomainError> {
        match (self, other) {
            (Res::Bot, x) | (x, Res::Bot) => Ok(x.clone()),
            (Res::Nat(a), Res::Nat(b)) => Ok(Res::Nat(*a.max(b))),
            (Res::Str(a), Res::Str(b)) if a == b => Ok(self.clone()),
            (Res::Graph(a), Res::Graph(b)) => a.lub(b).map(Res::Graph),
            _ => Err(DomainError::NoUpperBound {
                left: self.to_string(),
                right: other.to_string(),
            }),
        }
    }
}

impl fmt::Display for Res {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Res::Bot => f.write_str("⊥"),
            Res::Nat(n) => write!(f, "{n}"),
            Res::Str(s) => write!(f, "{s:?}"),
            Res::Graph(g) => write!(f, "{g}"),
        }
    }
}

/// Per-position call sets: entry `i` holds every argument vector that
/// argument `i` was applied to. Non-function positions stay empty.
///
/// Positions past the end count as empty, so the empty sequence is bottom
/// for every arity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Needs(pub Vec<BTreeSet<Vec<Res>>>);

impl Needs {
    pub fn bottom() -> Needs {
        Needs(Vec::new())
    }

    pub fn empty(arity: usize) -> Needs {
        Needs(vec![BTreeSet::new(); arity])
    }

    pub fn at(&self, i: usize) -> impl Iterator<Item = &Vec<Res>> {
        self.0.get(i).into_iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(BTreeSet::is_empty)
    }

    pub fn leq(&self, other: &Needs) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, s)| s.is_empty() || other.0.get(i).is_some_and(|t| s.is_subset(t)))
    }

    pub fn lub(&self, other: &Needs) -> Needs {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.0.clone();
        for (o, s) in out.iter_mut().zip(&short.0) {
            o.extend(s.iter().cloned());
        }
        Needs(out)
    }

    /// Equality that ignores padding with empty positions.
    pub fn same(&self, other: &Needs) -> bool {
        self.leq(other) && other.leq(self)
    }
}

impl fmt::Display for Needs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, set) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, args) in set.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "[{}]", join(args))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Tabulation of a higher-order function: argument vectors to results and
/// the needs recorded while computing them.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResGraph(BTreeMap<Vec<Res>, (Res, Needs)>);

impl ResGraph {
    pub fn new() -> ResGraph {
        ResGraph::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, key: &[Res]) -> Option<&(Res, Needs)> {
        self.0.get(key)
    }

    /// Stored pair, or `(Bot, bottom needs)` when absent.
    pub fn lookup(&self, key: &[Res]) -> (Res, Needs) {
        self.get(key)
            .cloned()
            .unwrap_or((Res::Bot, Needs::bottom()))
    }

    pub fn is_defined(&self, key: &[Res]) -> bool {
        self.0.contains_key(key)
    }

    /// Overwrites; no implicit lub.
    pub fn insert(&mut self, key: Vec<Res>, entry: (Res, Needs)) {
        self.0.insert(key, entry);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Res>, &(Res, Needs))> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<Res>> {
        self.0.keys()
    }

    pub fn leq(&self, other: &ResGraph) -> bool {
        self.0.iter().all(|(k, (r, n))| {
            other
                .0
                .get(k)
                .is_some_and(|(r2, n2)| r.leq(r2) && n.leq(n2))
        })
    }

    pub fn lub(&self, other: &ResGraph) -> std::result::Result<ResGraph, DomainError> {
        let mut out = self.clone();
        for (k, entry) in &other.0 {
            let merged = match out.0.get(k) {
                Some(mine) => lub_rn(mine, entry)?,
                None => entry.clone(),
            };
            out.0.insert(k.clone(), merged);
        }
        Ok(out)
    }
}

/// Compact form `{[k]->v, ...}` without needs.
impl fmt::Display for ResGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, (r, _))) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{}]->{r}", join(k))?;
        }
        f.write_str("}")
    }
}

fn join(xs: &[Res]) -> String {
    xs.iter().map(Res::to_string).collect::<Vec<_>>().join(",")
}

pub fn lub_rn(
    a: &(Res, Needs),
    b: &(Res, Needs),
) -> std::result::Result<(Res, Needs), DomainError> {
    Ok((a.0.lub(&b.0)?, a.1.lub(&b.1)))
}

/// A function over higher-order values.
pub type Call = Rc<dyn Fn(&[HValue]) -> Result<HValue>>;

/// Higher-order value: an atom or a closure paired with its tabulation.
#[derive(Clone)]
pub enum HValue {
    Str(String),
    Nat(u64),
    Bot,
    Closure(ResGraph, Call),
}

impl HValue {
    pub fn str(s: &str) -> HValue {
        HValue::Str(s.to_string())
    }

    pub fn closure(f: impl Fn(&[HValue]) -> Result<HValue> + 'static) -> HValue {
        HValue::Closure(ResGraph::new(), Rc::new(f))
    }
}

impl fmt::Debug for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HValue::Str(s) => write!(f, "Str({s:?})"),
            HValue::Nat(n) => write!(f, "Nat({n})"),
            HValue::Bot => f.write_str("Bot"),
            HValue::Closure(g, _) => write!(f, "Closure({g})"),
        }
    }
}

pub fn v2r(v: &HValue) -> Res {
    match v {
        HValue::Str(s) => Res::Str(s.clone()),
        HValue::Nat(n) => Res::Nat(*n),
        HValue::Bot => Res::Bot,
        HValue::Closure(g, _) => Res::Graph(g.clone()),
    }
}

/// A graph turns into a closure that answers by lookup; absent arguments
/// give `Bot`.
pub fn r2v(r: &Res) -> HValue {
    match r {
        Res::Str(s) => HValue::Str(s.clone()),
        Res::Nat(n) => HValue::Nat(*n),
        Res::Bot => HValue::Bot,
        Res::Graph(g) => {
            let table = g.clone();
            HValue::Closure(
                g.clone(),
                Rc::new(move |xs| {
                    let key: Vec<Res> = xs.iter().map(v2r).collect();
                    Ok(r2v(&table.lookup(&key).0))
                }),
            )
        }
    }
}

pub fn rs2v(rs: &[Res]) -> Vec<HValue> {
    rs.iter().map(r2v).collect()
}

/// Applies `f` with every closure argument wrapped to record its calls,
/// and returns the result with the recorded needs.
pub fn callneed(
    f: &dyn Fn(&[HValue]) -> Result<HValue>,
    args: &[HValue],
) -> Result<(HValue, Needs)> {
    let record = Rc::new(RefCell::new(Needs::empty(args.len())));
    let wrapped: Vec<HValue> = args
        .iter()
        .enumerate()
        .map(|(i, a)| match a {
            HValue::Closure(g, call) => {
                let record = Rc::clone(&record);
                let call = Rc::clone(call);
                let spy: Call = Rc::new(move |ys: &[HValue]| {
                    record.borrow_mut().0[i].insert(ys.iter().map(v2r).collect());
                    call(ys)
                });
                HValue::Closure(g.clone(), spy)
            }
            other => other.clone(),
        })
        .collect();
    let v = f(&wrapped)?;
    let needs = record.borrow().clone();
    Ok((v, needs))
}

/// Converts arguments to `Res`. Each closure is called at every vector
/// listed for its position, and the results are added to the graph it
/// already carries.
pub fn tabulate(args: &[HValue], needs: &Needs) -> Result<Vec<Res>> {
    args.iter()
        .enumerate()
        .map(|(i, a)| match a {
            HValue::Closure(g, call) => {
                let mut g = g.clone();
                for key in needs.at(i) {
                    let (v, n) = callneed(&**call, &rs2v(key))?;
                    g.insert(key.clone(), (v2r(&v), n));
                }
                Ok(Res::Graph(g))
            }
            other => Ok(v2r(other)),
        })
        .collect()
}

/// Applies the closure in position 0 to the rest; `Bot` otherwise.
pub fn fstcall(xs: &[HValue]) -> Result<HValue> {
    match xs.split_first() {
        Some((HValue::Closure(_, f), rest)) => f(rest),
        _ => Ok(HValue::Bot),
    }
}

/// A closure with an empty tabulation that appends its arguments to
/// `pending` and calls `call`.
pub fn partial_application(call: &Call, pending: &[HValue]) -> HValue {
    let call = Rc::clone(call);
    let pending = pending.to_vec();
    HValue::closure(move |ys| {
        let mut all = pending.clone();
        all.extend_from_slice(ys);
        call(&all)
    })
}

pub fn lub_v(x: &HValue, y: &HValue) -> Result<HValue> {
    Ok(r2v(&v2r(x).lub(&v2r(y))?))
}

/// Minimum on naturals; anything else is `Bot`.
pub fn glb(x: &HValue, y: &HValue) -> HValue {
    match (x, y) {
        (HValue::Nat(a), HValue::Nat(b)) => HValue::Nat(*a.min(b)),
        _ => HValue::Bot,
    }
}

/// A higher-order functional: given the recursive call and an argument
/// vector, computes the result. Position 0 names the function by
/// convention.
pub type HigherOrder = Rc<dyn Fn(&Call, &[HValue]) -> Result<HValue>>;

pub fn higher_order(f: impl Fn(&Call, &[HValue]) -> Result<HValue> + 'static) -> HigherOrder {
    Rc::new(f)
}

struct Engine {
    functional: HigherOrder,
    prev: RefCell<ResGraph>,
    cur: RefCell<ResGraph>,
    rhs: Cell<u64>,
    passes: Cell<u64>,
    needs_log: Option<RefCell<Vec<Vec<Needs>>>>,
}

impl Engine {
    fn call(self: &Rc<Self>) -> Call {
        let me = Rc::clone(self);
        Rc::new(move |ws| me.ff(ws))
    }

    fn ff(self: &Rc<Self>, ws: &[HValue]) -> Result<HValue> {
        Ok(self.gg(ws)?.0)
    }

    // Re-tabulates the arguments until their recorded needs stop growing.
    fn gg(self: &Rc<Self>, vs: &[HValue]) -> Result<(HValue, Needs)> {
        let mut nd = Needs::bottom();
        let mut chain = Vec::new();
        loop {
            chain.push(nd.clone());
            let (v1, n1) = self.big_ff(&tabulate(vs, &nd)?)?;
            let n2 = n1.lub(&nd);
            if nd.same(&n2) {
                if let Some(log) = &self.needs_log {
                    log.borrow_mut().push(chain);
                }
                return Ok((v1, n2));
            }
            nd = n2;
        }
    }

    fn big_ff(self: &Rc<Self>, rs: &[Res]) -> Result<(HValue, Needs)> {
        match rs.first() {
            None | Some(Res::Bot) => return Ok((HValue::Bot, Needs::bottom())),
            Some(Res::Graph(_)) => return callneed(&fstcall, &rs2v(rs)),
            _ => {}
        }
        if let Some((r, n)) = self.cur.borrow().get(rs) {
            return Ok((r2v(r), n.clone()));
        }
        let seed = self.prev.borrow().lookup(rs);
        self.cur.borrow_mut().insert(rs.to_vec(), seed);
        self.rhs.set(self.rhs.get() + 1);
        let call = self.call();
        let functional = Rc::clone(&self.functional);
        let (v1, nds) = callneed(&|xs| functional(&call, xs), &rs2v(rs))?;
        let r2 = self.cur.borrow().lookup(rs);
        let merged = lub_rn(&r2, &(v2r(&v1), nds.clone()))?;
        self.cur.borrow_mut().insert(rs.to_vec(), merged);
        Ok((v1, nds))
    }

    fn iterate(self: &Rc<Self>, xs: &[HValue]) -> Result<HValue> {
        loop {
            let last = std::mem::take(&mut *self.cur.borrow_mut());
            *self.prev.borrow_mut() = last;
            self.passes.set(self.passes.get() + 1);
            let v = self.ff(xs)?;
            if *self.cur.borrow() == *self.prev.borrow() {
                return Ok(v);
            }
        }
    }
}

/// The higher-order fixpoint operator. Queries share the tabulation built
/// by earlier ones.
pub struct HofFix {
    engine: Rc<Engine>,
}

pub fn hof_fix(functional: HigherOrder) -> HofFix {
    HofFix::new(functional)
}

impl HofFix {
    pub fn new(functional: HigherOrder) -> HofFix {
        HofFix::build(functional, false)
    }

    /// Keeps the needs chain of every completed inner loop.
    pub fn with_needs_log(functional: HigherOrder) -> HofFix {
        HofFix::build(functional, true)
    }

    fn build(functional: HigherOrder, log: bool) -> HofFix {
        HofFix {
            engine: Rc::new(Engine {
                functional,
                prev: RefCell::default(),
                cur: RefCell::default(),
                rhs: Cell::new(0),
                passes: Cell::new(0),
                needs_log: log.then(RefCell::default),
            }),
        }
    }

    pub fn query(&self, xs: &[HValue]) -> Result<HValue> {
        self.engine.iterate(xs)
    }

    /// The recursive call handed to the functional.
    pub fn call(&self) -> Call {
        self.engine.call()
    }

    /// The tabulation after the last query.
    pub fn graph(&self) -> ResGraph {
        self.engine.cur.borrow().clone()
    }

    pub fn rhs_evals(&self) -> u64 {
        self.engine.rhs.get()
    }

    pub fn passes(&self) -> u64 {
        self.engine.passes.get()
    }

    pub fn needs_log(&self) -> Vec<Vec<Needs>> {
        self.engine
            .needs_log
            .as_ref()
            .map(|log| log.borrow().clone())
            .unwrap_or_default()
    }
}
