use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::store::{Var, VarSet, VarStore};

/// A definite clause `head ← ∧body` with a non-empty body.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    head: Var,
    body: Vec<Var>,
}

impl Clause {
    /// Builds a clause from raw ids. The body is sorted and deduplicated.
    ///
    /// Panics if the body is empty or contains the head; use
    /// [`FormulaBuilder`] to build clauses that may be degenerate.
    pub fn new(head: Var, body: impl IntoIterator<Item = Var>) -> Clause {
        let mut body: Vec<Var> = body.into_iter().collect();
        body.sort_unstable();
        body.dedup();
        assert!(!body.is_empty(), "clause {head:?} has an empty body");
        assert!(!body.contains(&head), "clause head {head:?} occurs in its body");
        Clause { head, body }
    }

    pub fn head(&self) -> Var {
        self.head
    }

    pub fn body(&self) -> &[Var] {
        &self.body
    }

    /// Resolves the clause against the store's current classes and marks.
    pub fn resolve(&self, store: &VarStore) -> Resolved {
        resolve_parts(store, self.head, self.body.iter().copied())
    }

    pub(crate) fn from_sorted(head: Var, body: Vec<Var>) -> Clause {
        debug_assert!(!body.is_empty() && !body.contains(&head));
        debug_assert!(body.windows(2).all(|w| w[0] < w[1]));
        Clause { head, body }
    }
}

/// Outcome of resolving a clause through the store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolved {
    /// Satisfied outright: the head is ground or occurs in the body.
    Trivial,
    /// Every body variable is ground, so the head must be.
    Unit(Var),
    Clause(Clause),
}

pub(crate) fn resolve_parts(
    store: &VarStore,
    head: Var,
    body: impl IntoIterator<Item = Var>,
) -> Resolved {
    let h = store.find(head);
    if store.is_ground(h) {
        return Resolved::Trivial;
    }
    let mut out = Vec::new();
    for b in body {
        let r = store.find(b);
        if r == h {
            return Resolved::Trivial;
        }
        if !store.is_ground(r) {
            out.push(r);
        }
    }
    if out.is_empty() {
        return Resolved::Unit(h);
    }
    out.sort_unstable();
    out.dedup();
    Resolved::Clause(Clause::from_sorted(h, out))
}

enum Node {
    Leaf(Vec<Clause>),
    Cat(Formula, Formula),
}

/// A conjunction (bag) of definite clauses over a [`VarStore`].
///
/// Ground marks and class equivalences recorded in the store are part of the
/// denotation. Concatenation shares structure, so [`Formula::meet`] is O(1).
#[derive(Clone, Default)]
pub struct Formula {
    node: Option<Arc<Node>>,
    len: usize,
}

impl Formula {
    pub fn top() -> Formula {
        Formula::default()
    }

    pub fn from_clauses(clauses: Vec<Clause>) -> Formula {
        if clauses.is_empty() {
            return Formula::top();
        }
        let len = clauses.len();
        Formula { node: Some(Arc::new(Node::Leaf(clauses))), len }
    }

    /// Number of clauses, counting repeats.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Conjunction by concatenation. No normalization takes place.
    pub fn meet(&self, other: &Formula) -> Formula {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        Formula {
            node: Some(Arc::new(Node::Cat(self.clone(), other.clone()))),
            len: self.len + other.len,
        }
    }

    pub fn iter(&self) -> Iter<'_> {
        let mut stack = Vec::new();
        if let Some(n) = &self.node {
            stack.push(n.as_ref());
        }
        Iter { stack, leaf: [].iter() }
    }

    pub fn to_vec(&self) -> Vec<Clause> {
        self.iter().cloned().collect()
    }

    /// Variables occurring in clauses, resolved, ground classes dropped.
    pub fn vars(&self, store: &VarStore) -> VarSet {
        let mut out = VarSet::new();
        for c in self.iter() {
            out.extend(store.resolve_set(std::iter::once(c.head)));
            out.extend(store.resolve_set(c.body.iter().copied()));
        }
        out
    }

    /// Re-resolves every clause, grounding heads whose bodies became ground
    /// until no further unit arises. Trivial clauses and exact duplicates
    /// are dropped.
    pub fn normalized(&self, store: &mut VarStore) -> Formula {
        let mut clauses: Vec<Clause> = self.to_vec();
        loop {
            let mut grounded = false;
            let mut next = Vec::with_capacity(clauses.len());
            for c in &clauses {
                match c.resolve(store) {
                    Resolved::Trivial => {}
                    Resolved::Unit(h) => {
                        store.ground_var(h);
                        grounded = true;
                    }
                    Resolved::Clause(c) => next.push(c),
                }
            }
            clauses = next;
            if !grounded {
                break;
            }
        }
        clauses.sort_unstable();
        clauses.dedup();
        Formula::from_clauses(clauses)
    }

    /// True if every clause is resolved and free of duplicates in its body.
    pub fn check_invariants(&self, store: &VarStore) -> bool {
        self.iter().all(|c| {
            !c.body.is_empty()
                && !c.body.contains(&c.head)
                && c.body.windows(2).all(|w| w[0] < w[1])
                && matches!(c.resolve(store), Resolved::Clause(_))
        })
    }

    /// Debug rendering: `x3 ← x1∧x2` clauses joined by ` ∧ `.
    pub fn render(&self, store: &VarStore) -> String {
        let mut parts = Vec::new();
        for c in self.iter() {
            match c.resolve(store) {
                Resolved::Trivial => {}
                Resolved::Unit(h) => parts.push(format!("{h}")),
                Resolved::Clause(c) => parts.push(render_clause(&c)),
            }
        }
        if parts.is_empty() {
            "true".to_string()
        } else {
            parts.join(" ∧ ")
        }
    }

    /// Like [`Formula::render`] but also lists ground variables (`x5`) and
    /// aliases (`x1=x2`) among `vars`.
    pub fn render_with_facts(&self, store: &VarStore, vars: &[Var]) -> String {
        let mut facts = Vec::new();
        let mut seen: Vec<Var> = Vec::new();
        for &v in vars {
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            if store.is_ground(v) {
                facts.push(format!("{v}"));
            }
        }
        for (i, &a) in seen.iter().enumerate() {
            for &b in &seen[i + 1..] {
                if store.same(a, b) && !store.is_ground(a) {
                    facts.push(format!("{a}={b}"));
                }
            }
        }
        let body = self.render(store);
        if body != "true" || facts.is_empty() {
            facts.push(body);
        }
        facts.join(" ∧ ")
    }
}

impl std::fmt::Debug for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

pub(crate) fn render_clause(c: &Clause) -> String {
    let mut s = format!("{} ← ", c.head);
    for (i, b) in c.body.iter().enumerate() {
        if i > 0 {
            s.push('∧');
        }
        let _ = write!(s, "{b}");
    }
    s
}

pub struct Iter<'a> {
    stack: Vec<&'a Node>,
    leaf: std::slice::Iter<'a, Clause>,
}

impl<'a> Iterator for Iter<'a> {
    type Item = &'a Clause;

    fn next(&mut self) -> Option<&'a Clause> {
        loop {
            if let Some(c) = self.leaf.next() {
                return Some(c);
            }
            let node = self.stack.pop()?;
            match node {
                Node::Leaf(cs) => self.leaf = cs.iter(),
                Node::Cat(a, b) => {
                    if let Some(n) = &b.node {
                        self.stack.push(n);
                    }
                    if let Some(n) = &a.node {
                        self.stack.push(n);
                    }
                }
            }
        }
    }
}

/// Accumulates clauses, normalizing degenerate ones on the way in:
/// trivial clauses vanish and `y ← true` grounds `y`.
#[derive(Default)]
pub struct FormulaBuilder {
    clauses: Vec<Clause>,
}

impl FormulaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, store: &mut VarStore, head: Var, body: &[Var]) {
        match resolve_parts(store, head, body.iter().copied()) {
            Resolved::Trivial => {}
            Resolved::Unit(h) => store.ground_var(h),
            Resolved::Clause(c) => self.clauses.push(c),
        }
    }

    /// Adds `a ↔ b` as the clause pair `a ← b`, `b ← a`.
    pub fn add_equiv(&mut self, store: &mut VarStore, a: Var, b: Var) {
        self.add(store, a, &[b]);
        self.add(store, b, &[a]);
    }

    pub fn finish(self) -> Formula {
        Formula::from_clauses(self.clauses)
    }
}

/// Correspondence from original class representatives to their copies.
#[derive(Debug, Clone, Default)]
pub struct Renaming {
    map: HashMap<Var, Var>,
}

impl Renaming {
    /// Image of `v`'s class, if the class was renamed.
    pub fn get(&self, store: &VarStore, v: Var) -> Option<Var> {
        self.map.get(&store.find(v)).copied()
    }

    pub fn apply(&self, store: &VarStore, v: Var) -> Var {
        self.get(store, v).unwrap_or_else(|| panic!("{v:?} was not renamed"))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    fn image(&mut self, store: &mut VarStore, v: Var) -> Var {
        let r = store.find(v);
        if let Some(&n) = self.map.get(&r) {
            return n;
        }
        let n = if store.is_ground(r) {
            store.ground_marker()
        } else {
            store.fresh()
        };
        self.map.insert(r, n);
        n
    }
}

/// Copies `f` over fresh variables, together with the store facts of its
/// variables and of `extra`. Classes map to single fresh variables, so
/// aliased variables stay aliased in the copy. Linear in the formula size.
pub fn rename_apart(store: &mut VarStore, f: &Formula, extra: &[Var]) -> (Formula, Renaming) {
    store.counters.rename += 1;
    let mut ren = Renaming::default();
    for &v in extra {
        ren.image(store, v);
    }
    let mut out = Vec::with_capacity(f.len());
    for c in f.iter() {
        let h = ren.image(store, c.head);
        let mut body: Vec<Var> = c.body.iter().map(|&b| ren.image(store, b)).collect();
        body.sort_unstable();
        body.dedup();
        if body.contains(&h) || body.is_empty() {
            // Only reachable for clauses already trivial in the source.
            continue;
        }
        out.push(Clause::from_sorted(h, body));
    }
    (Formula::from_clauses(out), ren)
}
