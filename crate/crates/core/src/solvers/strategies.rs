//! The six evaluation strategies. Each one reads already solved arguments
//! from `solved` as constants and returns the newly stabilised entries.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, VecDeque};

use super::intern::Interner;
use super::{Ctx, Run, SolveError};
use crate::domain::{FunctionGraph, Value};

type Result<T> = std::result::Result<T, SolveError>;

/// Breadth-first iteration over every argument discovered so far. Each
/// round re-evaluates all of them against the previous round's graph.
pub(super) fn kleene(
    ctx: &Ctx,
    solved: &FunctionGraph,
    x: &[Value],
    universe: &[Vec<Value>],
) -> Result<Run> {
    let graphs = &ctx.graphs;
    let bottom = graphs.res().bottom();
    let mut phi = FunctionGraph::new();
    for k in universe.iter().map(Vec::as_slice).chain([x]) {
        if graphs.get(solved, k).is_none() {
            graphs.insert(&mut phi, k, bottom.clone());
        }
    }
    let mut passes = Vec::new();
    loop {
        let needs = RefCell::new(FunctionGraph::new());
        let mut next = phi.clone();
        for (k, old) in phi.iter() {
            let r = ctx.eval(
                &|y| {
                    if let Some(v) = graphs.get(solved, y) {
                        return Ok(v.clone());
                    }
                    graphs.insert(&mut needs.borrow_mut(), y, Value::Bot);
                    Ok(graphs.lookup(&phi, y))
                },
                k,
            )?;
            graphs.insert(&mut next, k, graphs.res().lub(old, &r)?);
        }
        for y in needs.into_inner().keys() {
            if !graphs.is_defined(&next, y) {
                graphs.insert(&mut next, y, bottom.clone());
            }
        }
        passes.push(next.clone());
        if graphs.graph_eq(&phi, &next) {
            return Ok(Run {
                graph: next,
                passes,
            });
        }
        phi = next;
    }
}

/// Breadth-first rounds that re-evaluate only arguments whose inputs
/// changed in the previous round, plus newly discovered ones.
pub(super) fn dep(ctx: &Ctx, solved: &FunctionGraph, x: &[Value]) -> Result<Run> {
    let graphs = &ctx.graphs;
    let bottom = graphs.res().bottom();
    let keys = RefCell::new(Interner::default());
    let values = RefCell::new(Vec::new());
    let infl: RefCell<Vec<BTreeSet<usize>>> = RefCell::new(Vec::new());
    let discovered = RefCell::new(BTreeSet::new());

    let add_key = |y: &[Value]| -> usize {
        let (id, new) = keys.borrow_mut().intern(graphs, y);
        if new {
            values.borrow_mut().push(bottom.clone());
            infl.borrow_mut().push(BTreeSet::new());
            discovered.borrow_mut().insert(id);
        }
        id
    };

    let mut dirty: BTreeSet<usize> = [add_key(x)].into();
    discovered.borrow_mut().clear();
    let mut passes = Vec::new();
    while !dirty.is_empty() {
        let old = values.borrow().clone();
        let mut changed = Vec::new();
        for &i in &dirty {
            let key = keys.borrow().key(i).to_vec();
            let r = ctx.eval(
                &|y| {
                    if let Some(v) = graphs.get(solved, y) {
                        return Ok(v.clone());
                    }
                    let j = add_key(y);
                    infl.borrow_mut()[j].insert(i);
                    Ok(old.get(j).cloned().unwrap_or_else(|| bottom.clone()))
                },
                &key,
            )?;
            let v = graphs.res().lub(&old[i], &r)?;
            if !graphs.res().equal(&v, &old[i]) {
                values.borrow_mut()[i] = v;
                changed.push(i);
            }
        }
        let mut next = std::mem::take(&mut *discovered.borrow_mut());
        let infl = infl.borrow();
        for c in changed {
            next.extend(infl[c].iter().copied());
        }
        passes.push(to_graph(ctx, &keys.borrow(), &values.borrow()));
        dirty = next;
    }
    let graph = to_graph(ctx, &keys.borrow(), &values.borrow());
    Ok(Run { graph, passes })
}

/// Change-propagation worklist with a FIFO queue. A changed argument puts
/// every argument that read it back on the queue.
pub(super) fn worklist(ctx: &Ctx, solved: &FunctionGraph, x: &[Value]) -> Result<Run> {
    let graphs = &ctx.graphs;
    let bottom = graphs.res().bottom();
    let keys = RefCell::new(Interner::default());
    let values = RefCell::new(Vec::new());
    let infl: RefCell<Vec<BTreeSet<usize>>> = RefCell::new(Vec::new());
    let queue = RefCell::new(VecDeque::new());
    let queued = RefCell::new(Vec::new());

    let add_key = |y: &[Value]| -> usize {
        let (id, new) = keys.borrow_mut().intern(graphs, y);
        if new {
            values.borrow_mut().push(bottom.clone());
            infl.borrow_mut().push(BTreeSet::new());
            queued.borrow_mut().push(true);
            queue.borrow_mut().push_back(id);
        }
        id
    };

    add_key(x);
    loop {
        let Some(i) = queue.borrow_mut().pop_front() else {
            break;
        };
        queued.borrow_mut()[i] = false;
        let key = keys.borrow().key(i).to_vec();
        let r = ctx.eval(
            &|y| {
                if let Some(v) = graphs.get(solved, y) {
                    return Ok(v.clone());
                }
                let j = add_key(y);
                infl.borrow_mut()[j].insert(i);
                Ok(values.borrow()[j].clone())
            },
            &key,
        )?;
        let old = values.borrow()[i].clone();
        let v = graphs.res().lub(&old, &r)?;
        if !graphs.res().equal(&v, &old) {
            values.borrow_mut()[i] = v;
            let dependents = std::mem::take(&mut infl.borrow_mut()[i]);
            let mut queued = queued.borrow_mut();
            for d in dependents {
                if !queued[d] {
                    queued[d] = true;
                    queue.borrow_mut().push_back(d);
                }
            }
        }
    }
    let graph = to_graph(ctx, &keys.borrow(), &values.borrow());
    Ok(Run {
        passes: vec![graph.clone()],
        graph,
    })
}

/// Top-down solving: an argument is solved depth-first before its value is
/// read, and a change destabilises the arguments that read it, which are
/// then re-solved immediately.
pub(super) fn top_down(ctx: &Ctx, solved: &FunctionGraph, x: &[Value]) -> Result<Run> {
    let td = TopDown {
        ctx,
        solved,
        keys: RefCell::default(),
        values: RefCell::default(),
        stable: RefCell::default(),
        infl: RefCell::default(),
    };
    let root = td.add_key(x);
    td.solve(root)?;
    let graph = to_graph(ctx, &td.keys.borrow(), &td.values.borrow());
    Ok(Run {
        passes: vec![graph.clone()],
        graph,
    })
}

struct TopDown<'a> {
    ctx: &'a Ctx,
    solved: &'a FunctionGraph,
    keys: RefCell<Interner>,
    values: RefCell<Vec<Value>>,
    stable: RefCell<Vec<bool>>,
    infl: RefCell<Vec<BTreeSet<usize>>>,
}

impl TopDown<'_> {
    fn add_key(&self, y: &[Value]) -> usize {
        let (id, new) = self.keys.borrow_mut().intern(&self.ctx.graphs, y);
        if new {
            self.values
                .borrow_mut()
                .push(self.ctx.graphs.res().bottom());
            self.stable.borrow_mut().push(false);
            self.infl.borrow_mut().push(BTreeSet::new());
        }
        id
    }

    fn solve(&self, i: usize) -> Result<()> {
        if self.stable.borrow()[i] {
            return Ok(());
        }
        self.stable.borrow_mut()[i] = true;
        let key = self.keys.borrow().key(i).to_vec();
        let r = self.ctx.eval(&|y| self.read(i, y), &key)?;
        let res = self.ctx.graphs.res();
        let old = self.values.borrow()[i].clone();
        let v = res.lub(&old, &r)?;
        if !res.equal(&v, &old) {
            self.values.borrow_mut()[i] = v;
            let dependents = std::mem::take(&mut self.infl.borrow_mut()[i]);
            for &d in &dependents {
                self.stable.borrow_mut()[d] = false;
            }
            for d in dependents {
                self.solve(d)?;
            }
        }
        Ok(())
    }

    fn read(&self, from: usize, y: &[Value]) -> Result<Value> {
        if let Some(v) = self.ctx.graphs.get(self.solved, y) {
            return Ok(v.clone());
        }
        let j = self.add_key(y);
        self.solve(j)?;
        self.infl.borrow_mut()[j].insert(from);
        Ok(self.values.borrow()[j].clone())
    }
}

/// Truncated depth-first iteration.
///
/// Each outer pass starts from an empty current graph and evaluates
/// depth-first from the query. An argument met again while it is still
/// being evaluated is truncated: its value is seeded from the previous
/// pass, or bottom. Re-evaluated results are joined with the seed. Passes
/// repeat until the current graph equals the previous one.
///
/// With `sub` set, the values handed out by every query during a pass are
/// also kept in a used-values graph, and iteration stops as soon as that
/// graph is a subgraph of the current one. Acyclic dependencies then take
/// a single pass.
pub(super) fn tdf(ctx: &Ctx, solved: &FunctionGraph, x: &[Value], sub: bool) -> Result<Run> {
    let t = Tdf {
        ctx,
        solved,
        prev: RefCell::default(),
        cur: RefCell::default(),
        used: RefCell::default(),
        inconsistent: Cell::new(false),
    };
    let graphs = &ctx.graphs;
    let mut passes = Vec::new();
    loop {
        let last = std::mem::take(&mut *t.cur.borrow_mut());
        *t.prev.borrow_mut() = last;
        *t.used.borrow_mut() = FunctionGraph::new();
        t.inconsistent.set(false);
        t.eval(x)?;
        let cur = t.cur.borrow();
        passes.push(cur.clone());
        let stable = if sub {
            !t.inconsistent.get() && graphs.is_subgraph(&t.used.borrow(), &cur)
        } else {
            graphs.graph_eq(&t.prev.borrow(), &cur)
        };
        if stable {
            return Ok(Run {
                graph: cur.clone(),
                passes,
            });
        }
    }
}

struct Tdf<'a> {
    ctx: &'a Ctx,
    solved: &'a FunctionGraph,
    prev: RefCell<FunctionGraph>,
    cur: RefCell<FunctionGraph>,
    used: RefCell<FunctionGraph>,
    inconsistent: Cell<bool>,
}

impl Tdf<'_> {
    fn eval(&self, y: &[Value]) -> Result<Value> {
        let graphs = &self.ctx.graphs;
        if let Some(v) = graphs.get(self.solved, y) {
            return Ok(v.clone());
        }
        let cached = graphs.get(&self.cur.borrow(), y).cloned();
        if let Some(v) = cached {
            self.note_use(y, &v);
            return Ok(v);
        }
        let seed = graphs.lookup(&self.prev.borrow(), y);
        graphs.insert(&mut self.cur.borrow_mut(), y, seed.clone());
        let r = self.ctx.eval(&|z| self.eval(z), y)?;
        let joined = graphs.res().lub(&r, &seed)?;
        graphs.insert(&mut self.cur.borrow_mut(), y, joined);
        self.note_use(y, &r);
        Ok(r)
    }

    fn note_use(&self, y: &[Value], v: &Value) {
        let graphs = &self.ctx.graphs;
        let mut used = self.used.borrow_mut();
        match graphs.get(&used, y) {
            Some(prior) if !graphs.res().equal(prior, v) => self.inconsistent.set(true),
            Some(_) => {}
            None => graphs.insert(&mut used, y, v.clone()),
        }
    }
}

fn to_graph(ctx: &Ctx, keys: &Interner, values: &[Value]) -> FunctionGraph {
    ctx.graphs
        .from_entries((0..keys.len()).map(|i| (keys.key(i).to_vec(), values[i].clone())))
}
