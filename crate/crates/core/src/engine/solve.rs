//! Clause evaluation and the iteration strategies.

use std::collections::{BinaryHeap, HashSet, VecDeque};

use crate::bool_core::{Formula, FormulaBuilder, Var, VarStore};
use crate::frontend::{AbstractClause, AbstractProgram, Item, PredId};
use crate::gep::{mgu_flat, Pattern};
use crate::graphs::{self, answ_node, bourdoncle_wto, call_graph, is_recursive, magic_graph, tarjan, WtoElem};

use super::facts::{FactStore, Kind};
use super::options::Strategy;

/// What one clause evaluation does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Task {
    /// Solve the whole body left to right, registering calls.
    Solve,
    /// Re-evaluate after a new answer for the call at this body position:
    /// look up answers to its left, solve to its right.
    Answer(usize),
    /// Look up answers for the whole body; register no calls.
    Lookup,
    /// Look up answers left of this position and register its call.
    CallAt(usize),
}

/// The redo list: call entries are always taken before answer entries.
#[derive(Debug, Default)]
struct Redo {
    calls: VecDeque<PredId>,
    answers: VecDeque<PredId>,
}

/// Evaluation state of one clause instance.
struct Frame {
    store: VarStore,
    vars: Vec<Var>,
    formula: Formula,
}

impl Frame {
    fn args(&self, xs: &[u32]) -> Vec<Var> {
        xs.iter().map(|&x| self.vars[x as usize]).collect()
    }

    fn pattern(&self, xs: &[u32]) -> Pattern {
        Pattern::new(self.args(xs), self.formula.clone())
    }

    fn primitive(&mut self, it: &Item) -> bool {
        match it {
            Item::Iff { x, vars } => {
                let x = self.vars[*x as usize];
                let ys: Vec<Var> = vars.iter().map(|&v| self.vars[v as usize]).collect();
                if ys.is_empty() {
                    self.store.ground_var(x);
                } else {
                    let mut b = FormulaBuilder::new();
                    b.add(&mut self.store, x, &ys);
                    for &y in &ys {
                        b.add(&mut self.store, y, &[x]);
                    }
                    self.formula = self.formula.meet(&b.finish());
                    self.store.counters.meet += 1;
                }
                true
            }
            Item::Ground(vs) => {
                for &v in vs {
                    self.store.ground_var(self.vars[v as usize]);
                }
                true
            }
            Item::Fail => false,
            Item::Call { .. } | Item::Probe { .. } => unreachable!("not a primitive"),
        }
    }

    /// Meets in the stored answer; false when there is none.
    fn meet_answer(&mut self, fs: &mut FactStore, pred: PredId, xs: &[u32]) -> bool {
        let Some(a) = fs.read(Kind::Answ, pred, &mut self.store) else {
            return false;
        };
        let args = self.args(xs);
        mgu_flat(&mut self.store, &args, &a.args).expect("answer arity");
        self.formula = self.formula.meet(&a.formula);
        self.store.counters.meet += 1;
        true
    }
}

/// Outcome of registering a call during `solve_right`.
enum Flow {
    Continue,
    Abort,
}

#[derive(Debug, Default)]
struct Dyd {
    time: u64,
    stamp: Vec<u64>,
    queued: Vec<bool>,
    in_progress: Vec<bool>,
    heap: BinaryHeap<(u64, std::cmp::Reverse<PredId>)>,
    /// `readers[q]` holds the predicates whose clauses looked up answers of `q`.
    readers: Vec<HashSet<PredId>>,
}

pub(super) struct Solver<'a> {
    ap: &'a AbstractProgram,
    strategy: Strategy,
    pub fs: FactStore,
    pub evaluations: u64,
    /// Body positions of every call to a predicate, as (clause, item).
    occurrences: Vec<Vec<(usize, usize)>>,
    redo: Redo,
    /// Component rank of each predicate in the original call graph,
    /// callees first.
    rank: Vec<usize>,
    dyd: Dyd,
}

impl<'a> Solver<'a> {
    pub fn new(ap: &'a AbstractProgram, strategy: Strategy, fs: FactStore) -> Solver<'a> {
        let n = ap.preds.len();
        let mut occurrences = vec![Vec::new(); n];
        for (ci, c) in ap.clauses.iter().enumerate() {
            for k in c.call_positions() {
                if let Item::Call { pred, .. } | Item::Probe { pred, .. } = &c.body[k] {
                    occurrences[*pred].push((ci, k));
                }
            }
        }
        let mut rank = vec![0; n];
        if strategy == Strategy::Scc {
            for (i, comp) in tarjan(&call_graph(ap)).iter().enumerate() {
                for &p in comp {
                    rank[p] = i;
                }
            }
        }
        let dyd = Dyd {
            stamp: vec![0; n],
            queued: vec![false; n],
            in_progress: vec![false; n],
            readers: vec![HashSet::new(); n],
            ..Dyd::default()
        };
        Solver { ap, strategy, fs, evaluations: 0, occurrences, redo: Redo::default(), rank, dyd }
    }

    /// Asserts an entry call and runs the strategy to a fixpoint.
    pub fn run(&mut self, seeds: Vec<(PredId, Vec<bool>)>) {
        for (p, ground) in seeds {
            let mut store = self.fs.store();
            let args = store.fresh_vars(ground.len());
            for (i, &g) in ground.iter().enumerate() {
                if g {
                    store.ground_var(args[i]);
                }
            }
            let changed = self.fs.cond_assert(Kind::Call, p, &mut store, &Pattern::new(args, Formula::top()));
            self.fs.counters.absorb(&store.counters);
            if changed {
                match self.strategy {
                    Strategy::Ord | Strategy::Scc => self.push(Kind::Call, p),
                    Strategy::Eim => self.call_solve(p),
                    Strategy::Dyd => self.enqueue(p),
                    Strategy::Scm | Strategy::Bom => {}
                }
            }
        }
        match self.strategy {
            Strategy::Ord | Strategy::Scc => self.run_redo(),
            Strategy::Eim => {}
            Strategy::Scm => self.run_scm(),
            Strategy::Bom => self.run_bom(),
            Strategy::Dyd => self.run_dyd(),
        }
    }

    // ---- redo list ----

    fn push(&mut self, kind: Kind, p: PredId) {
        match kind {
            Kind::Call => {
                self.redo.calls.retain(|&q| q != p);
                self.redo.calls.push_front(p);
            }
            Kind::Answ => {
                self.redo.answers.retain(|&q| q != p);
                if self.strategy == Strategy::Scc {
                    let r = self.rank[p];
                    let at = self.redo.answers.iter().position(|&q| self.rank[q] >= r).unwrap_or(self.redo.answers.len());
                    self.redo.answers.insert(at, p);
                } else {
                    self.redo.answers.push_front(p);
                }
            }
        }
    }

    fn run_redo(&mut self) {
        loop {
            if let Some(p) = self.redo.calls.pop_front() {
                self.call_solve(p);
            } else if let Some(p) = self.redo.answers.pop_front() {
                self.answ_solve(p);
            } else {
                break;
            }
        }
    }

    fn call_solve(&mut self, p: PredId) {
        for ci in self.ap.by_pred[p].clone() {
            self.eval(ci, Task::Solve);
        }
    }

    fn answ_solve(&mut self, p: PredId) {
        for (ci, k) in self.occurrences[p].clone() {
            if matches!(self.ap.clauses[ci].body[k], Item::Call { .. }) {
                self.eval(ci, Task::Answer(k));
            }
        }
    }

    /// Reaction to a changed table entry.
    fn notify(&mut self, kind: Kind, p: PredId) {
        match (self.strategy, kind) {
            (Strategy::Ord | Strategy::Scc, _) => self.push(kind, p),
            (Strategy::Eim, Kind::Call) => self.call_solve(p),
            (Strategy::Eim, Kind::Answ) => self.answ_solve(p),
            (Strategy::Dyd, Kind::Answ) => {
                let readers: Vec<PredId> = self.dyd.readers[p].iter().copied().collect();
                for r in readers {
                    self.enqueue(r);
                }
            }
            (Strategy::Dyd, Kind::Call) | (Strategy::Scm | Strategy::Bom, _) => {}
        }
    }

    /// Strategy hook after a call from `owner`'s clause was registered.
    fn on_call(&mut self, owner: PredId, pred: PredId, changed: bool, probe: bool) -> Flow {
        match self.strategy {
            Strategy::Ord | Strategy::Scc => {
                if changed && !probe {
                    self.push(Kind::Answ, pred);
                    return Flow::Abort;
                }
                Flow::Continue
            }
            Strategy::Dyd => {
                if !probe {
                    self.dyd.readers[pred].insert(owner);
                }
                let unsolved = self.dyd.stamp[pred] == 0;
                if changed || unsolved {
                    if self.dyd.in_progress[pred] {
                        if changed {
                            self.enqueue(pred);
                        }
                    } else {
                        self.dyd_solve(pred);
                    }
                }
                Flow::Continue
            }
            Strategy::Eim | Strategy::Scm | Strategy::Bom => Flow::Continue,
        }
    }

    // ---- clause evaluation ----

    /// Evaluates one clause; returns whether the final assertion changed a
    /// table entry.
    fn eval(&mut self, ci: usize, task: Task) -> bool {
        let c: &'a AbstractClause = &self.ap.clauses[ci];
        self.evaluations += 1;
        let mut store = self.fs.store();
        let Some(call) = self.fs.read(Kind::Call, c.pred, &mut store) else {
            return false;
        };
        let vars = store.fresh_vars(c.nvars as usize);
        let mut frame = Frame { store, vars, formula: call.formula };
        let head = frame.args(&c.head);
        mgu_flat(&mut frame.store, &head, &call.args).expect("call arity");
        frame.store.counters.meet += 1;
        let changed = self.body(c, task, &mut frame);
        self.fs.counters.absorb(&frame.store.counters);
        changed
    }

    fn body(&mut self, c: &'a AbstractClause, task: Task, frame: &mut Frame) -> bool {
        let (left_end, right_start) = match task {
            Task::Solve => (0, 0),
            Task::Answer(k) => (k, k + 1),
            Task::Lookup => (c.body.len(), c.body.len()),
            Task::CallAt(k) => (k, c.body.len()),
        };
        // solve_left: primitives and stored answers only
        for it in &c.body[..left_end] {
            let ok = match it {
                Item::Call { pred, args } => frame.meet_answer(&mut self.fs, *pred, args),
                Item::Probe { .. } => true,
                prim => frame.primitive(prim),
            };
            if !ok {
                return false;
            }
        }
        match task {
            Task::CallAt(k) => {
                let (Item::Call { pred, args } | Item::Probe { pred, args }) = &c.body[k] else {
                    unreachable!("call position");
                };
                let pat = frame.pattern(args);
                return self.fs.cond_assert(Kind::Call, *pred, &mut frame.store, &pat);
            }
            Task::Answer(k) => {
                let Item::Call { pred, args } = &c.body[k] else { unreachable!("call position") };
                if !frame.meet_answer(&mut self.fs, *pred, args) {
                    return false;
                }
            }
            Task::Solve | Task::Lookup => {}
        }
        // solve_right: register each call, then use its answer
        for it in &c.body[right_start..] {
            match it {
                Item::Call { pred, args } | Item::Probe { pred, args } => {
                    let probe = matches!(it, Item::Probe { .. });
                    let pat = frame.pattern(args);
                    let changed = self.fs.cond_assert(Kind::Call, *pred, &mut frame.store, &pat);
                    if changed {
                        self.notify(Kind::Call, *pred);
                    }
                    if let Flow::Abort = self.on_call(c.pred, *pred, changed, probe) {
                        return false;
                    }
                    if !probe && !frame.meet_answer(&mut self.fs, *pred, args) {
                        return false;
                    }
                }
                prim => {
                    if !frame.primitive(prim) {
                        return false;
                    }
                }
            }
        }
        let pat = frame.pattern(&c.head);
        let changed = self.fs.cond_assert(Kind::Answ, c.pred, &mut frame.store, &pat);
        if changed {
            self.notify(Kind::Answ, c.pred);
        }
        changed
    }

    // ---- SCC magic and Bourdoncle magic ----

    /// Re-evaluates one node of the magic graph.
    fn eval_node(&mut self, node: usize) -> bool {
        let p = node / 2;
        let mut changed = false;
        if node == answ_node(p) {
            for ci in self.ap.by_pred[p].clone() {
                changed |= self.eval(ci, Task::Lookup);
            }
        } else {
            for (ci, k) in self.occurrences[p].clone() {
                changed |= self.eval(ci, Task::CallAt(k));
            }
        }
        changed
    }

    fn run_scm(&mut self) {
        let g = magic_graph(self.ap);
        for comp in tarjan(&g) {
            if !is_recursive(&g, &comp) {
                self.eval_node(comp[0]);
                continue;
            }
            let mut order = comp.clone();
            order.sort_unstable();
            loop {
                let mut any = false;
                for &n in &order {
                    any |= self.eval_node(n);
                }
                if !any {
                    break;
                }
            }
        }
    }

    fn run_bom(&mut self) {
        let wto = bourdoncle_wto(&magic_graph(self.ap));
        for e in &wto.elems {
            self.stabilize(e);
        }
    }

    fn stabilize(&mut self, e: &graphs::WtoElem) {
        match e {
            WtoElem::Vertex(v) => {
                self.eval_node(*v);
            }
            WtoElem::Component { head, body } => {
                self.eval_node(*head);
                loop {
                    for b in body {
                        self.stabilize(b);
                    }
                    if !self.eval_node(*head) {
                        break;
                    }
                }
            }
        }
    }

    // ---- dynamic dependencies ----

    fn enqueue(&mut self, p: PredId) {
        if !self.dyd.queued[p] {
            self.dyd.queued[p] = true;
            self.dyd.heap.push((self.dyd.stamp[p], std::cmp::Reverse(p)));
        }
    }

    fn run_dyd(&mut self) {
        while let Some((stamp, std::cmp::Reverse(p))) = self.dyd.heap.pop() {
            if !self.dyd.queued[p] || stamp != self.dyd.stamp[p] {
                continue;
            }
            self.dyd_solve(p);
        }
    }

    fn dyd_solve(&mut self, p: PredId) {
        self.dyd.queued[p] = false;
        self.dyd.in_progress[p] = true;
        self.dyd.time += 1;
        self.dyd.stamp[p] = self.dyd.time;
        for ci in self.ap.by_pred[p].clone() {
            self.eval(ci, Task::Solve);
        }
        self.dyd.in_progress[p] = false;
    }
}
