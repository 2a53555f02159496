//! Dependency graphs over predicates and call/answer tables, strongly
//! connected components and weak topological orderings.
//!
//! An edge `u -> v` means that `u` reads `v`: an update of `v` can
//! invalidate `u`.

use std::fmt::{self, Write as _};

use crate::frontend::{AbstractProgram, Item, PredId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Pred(PredId),
    Call(PredId),
    Answ(PredId),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepGraph {
    pub keys: Vec<Key>,
    pub labels: Vec<String>,
    pub succ: Vec<Vec<usize>>,
}

impl DepGraph {
    /// A graph on `n` anonymous nodes.
    pub fn with_nodes(n: usize) -> Self {
        DepGraph {
            keys: (0..n).map(Key::Pred).collect(),
            labels: (0..n).map(|i| i.to_string()).collect(),
            succ: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if !self.succ[u].contains(&v) {
            self.succ[u].push(v);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].contains(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn node(&self, k: Key) -> Option<usize> {
        self.keys.iter().position(|&x| x == k)
    }

    /// Nodes reading `v`.
    pub fn readers(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (u, v) in self.edges() {
            pred[v].push(u);
        }
        pred
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph deps {\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  n{u} -> n{v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Edge `p -> q` when `q` occurs in the body of a clause for `p`.
pub fn call_graph(ap: &AbstractProgram) -> DepGraph {
    let mut g = DepGraph {
        keys: (0..ap.preds.len()).map(Key::Pred).collect(),
        labels: ap.preds.iter().map(|p| p.key()).collect(),
        succ: vec![Vec::new(); ap.preds.len()],
    };
    for c in &ap.clauses {
        for it in &c.body {
            if let Item::Call { pred, .. } | Item::Probe { pred, .. } = it {
                g.add_edge(c.pred, *pred);
            }
        }
    }
    g
}

pub fn call_node(p: PredId) -> usize {
    2 * p
}

pub fn answ_node(p: PredId) -> usize {
    2 * p + 1
}

/// Call and answer tables of the magic program. For `h :- b1, ..., bn`,
/// `call bi` reads `call h` and the answers of `b1 .. b(i-1)`, and
/// `answ h` reads `call h` and every `answ bi`. Probed atoms contribute
/// calls only.
pub fn magic_graph(ap: &AbstractProgram) -> DepGraph {
    let n = ap.preds.len();
    let mut g = DepGraph {
        keys: Vec::with_capacity(2 * n),
        labels: Vec::with_capacity(2 * n),
        succ: vec![Vec::new(); 2 * n],
    };
    for (p, info) in ap.preds.iter().enumerate() {
        g.keys.push(Key::Call(p));
        g.labels.push(format!("call {}", info.key()));
        g.keys.push(Key::Answ(p));
        g.labels.push(format!("answ {}", info.key()));
    }
    for c in &ap.clauses {
        let h = c.pred;
        g.add_edge(answ_node(h), call_node(h));
        let mut seen = Vec::new();
        for it in &c.body {
            match it {
                Item::Call { pred, .. } => {
                    g.add_edge(call_node(*pred), call_node(h));
                    for &b in &seen {
                        g.add_edge(call_node(*pred), answ_node(b));
                    }
                    g.add_edge(answ_node(h), answ_node(*pred));
                    seen.push(*pred);
                }
                Item::Probe { pred, .. } => {
                    g.add_edge(call_node(*pred), call_node(h));
                    for &b in &seen {
                        g.add_edge(call_node(*pred), answ_node(b));
                    }
                }
                _ => {}
            }
        }
    }
    g
}

/// Strongly connected components, each node listed once, such that every
/// edge stays inside a component or points to an earlier one.
pub fn tarjan(g: &DepGraph) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..g.len()).collect();
    tarjan_within(g, &all, &vec![true; g.len()]).0
}

/// Tarjan restricted to `nodes` (edges leaving `inside` ignored). Also
/// returns the discovery numbers.
fn tarjan_within(g: &DepGraph, nodes: &[usize], inside: &[bool]) -> (Vec<Vec<usize>>, Vec<usize>) {
    const NONE: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // Explicit DFS stack of (node, next successor position).
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &root in nodes {
        if index[root] != NONE {
            continue;
        }
        work.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if let Some(&w) = g.succ[v].get(*i) {
                *i += 1;
                if !inside[w] {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_by_key(|&w| index[w]);
                out.push(comp);
            }
        }
    }
    (out, index)
}

/// True when the component has an internal edge.
pub fn is_recursive(g: &DepGraph, comp: &[usize]) -> bool {
    comp.len() > 1 || g.has_edge(comp[0], comp[0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WtoElem {
    Vertex(usize),
    Component { head: usize, body: Vec<WtoElem> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Wto {
    pub elems: Vec<WtoElem>,
}

impl Wto {
    /// Nodes in order, heads before their bodies.
    pub fn linear(&self) -> Vec<usize> {
        fn walk(es: &[WtoElem], out: &mut Vec<usize>) {
            for e in es {
                match e {
                    WtoElem::Vertex(v) => out.push(*v),
                    WtoElem::Component { head, body } => {
                        out.push(*head);
                        walk(body, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.elems, &mut out);
        out
    }

    /// For each node, the heads of the components containing it, outermost
    /// first. A head is not counted as inside its own component.
    pub fn nesting(&self, n: usize) -> Vec<Vec<usize>> {
        fn walk(es: &[WtoElem], heads: &mut Vec<usize>, out: &mut [Vec<usize>]) {
            for e in es {
                match e {
                    WtoElem::Vertex(v) => out[*v] = heads.clone(),
                    WtoElem::Component { head, body } => {
                        out[*head] = heads.clone();
                        heads.push(*head);
                        walk(body, heads, out);
                        heads.pop();
                    }
                }
            }
        }
        let mut out = vec![Vec::new(); n];
        walk(&self.elems, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Wto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(es: &[WtoElem], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                match e {
                    WtoElem::Vertex(v) => write!(f, "{v}")?,
                    WtoElem::Component { head, body } => {
                        write!(f, "({head}")?;
                        if !body.is_empty() {
                            f.write_str(" ")?;
                            walk(body, f)?;
                        }
                        f.write_str(")")?;
                    }
                }
            }
            Ok(())
        }
        walk(&self.elems, f)
    }
}

/// Bourdoncle's recursive strategy: Tarjan, then for every recursive
/// component take the node discovered first as head, drop it, and order
/// the rest recursively.
pub fn bourdoncle_wto(g: &DepGraph) -> Wto {
    let all: Vec<usize> = (0..g.len()).collect();
    Wto { elems: wto_of(g, &all) }
}

fn wto_of(g: &DepGraph, nodes: &[usize]) -> Vec<WtoElem> {
    let mut inside = vec![false; g.len()];
    for &v in nodes {
        inside[v] = true;
    }
    let (comps, index) = tarjan_within(g, nodes, &inside);
    let mut out = Vec::with_capacity(comps.len());
    for comp in comps {
        let recursive = is_recursive(g, &comp);
        if !recursive {
            out.push(WtoElem::Vertex(comp[0]));
            continue;
        }
        let head = *comp.iter().min_by_key(|&&v| index[v]).unwrap();
        let mut rest: Vec<usize> = comp.iter().copied().filter(|&v| v != head).collect();
        rest.sort_unstable();
        out.push(WtoElem::Component { head, body: wto_of(g, &rest) });
    }
    out
}
