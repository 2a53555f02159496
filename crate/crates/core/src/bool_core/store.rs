//! Union-find store of Boolean variables.
//!
//! This is the non-ground representation that stands in for Prolog logic
//! variables: binding a variable to `true` sets the ground mark of its class,
//! and unifying two variables merges their classes.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::fmt;

use crate::stats::Counters;

/// An interned Boolean variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A set of variables, normally resolved to class representatives.
pub type VarSet = BTreeSet<Var>;

#[derive(Debug, Clone)]
pub struct VarStore {
    parent: Vec<Cell<u32>>,
    rank: Vec<u8>,
    ground: Vec<bool>,
    scratch: Vec<u32>,
    generation: u32,
    filtered_projection: bool,
    pub counters: Counters,
}

impl Default for VarStore {
    fn default() -> Self {
        Self::new()
    }
}

impl VarStore {
    pub fn new() -> Self {
        VarStore {
            parent: Vec::new(),
            rank: Vec::new(),
            ground: Vec::new(),
            scratch: Vec::new(),
            generation: 0,
            filtered_projection: true,
            counters: Counters::default(),
        }
    }

    /// Store whose projections always compact (switch `p` off).
    pub fn with_filtered_projection(filtered: bool) -> Self {
        let mut store = Self::new();
        store.filtered_projection = filtered;
        store
    }

    pub fn filtered_projection(&self) -> bool {
        self.filtered_projection
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn fresh(&mut self) -> Var {
        let id = self.parent.len() as u32;
        self.parent.push(Cell::new(id));
        self.rank.push(0);
        self.ground.push(false);
        self.scratch.push(0);
        Var(id)
    }

    pub fn fresh_vars(&mut self, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.fresh()).collect()
    }

    /// A fresh variable already bound to `true`.
    pub fn ground_marker(&mut self) -> Var {
        let v = self.fresh();
        self.ground[v.index()] = true;
        v
    }

    pub fn contains(&self, x: Var) -> bool {
        x.index() < self.parent.len()
    }

    pub fn find(&self, x: Var) -> Var {
        let mut root = x.0;
        while self.parent[root as usize].get() != root {
            root = self.parent[root as usize].get();
        }
        let mut cur = x.0;
        while cur != root {
            let next = self.parent[cur as usize].get();
            self.parent[cur as usize].set(root);
            cur = next;
        }
        Var(root)
    }

    pub fn same(&self, x: Var, y: Var) -> bool {
        self.find(x) == self.find(y)
    }

    pub fn is_ground(&self, x: Var) -> bool {
        self.ground[self.find(x).index()]
    }

    pub fn ground_var(&mut self, x: Var) {
        let r = self.find(x);
        self.ground[r.index()] = true;
    }

    pub fn alias_vars(&mut self, x: Var, y: Var) {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return;
        }
        let g = self.ground[rx.index()] || self.ground[ry.index()];
        let (parent, child) = if self.rank[rx.index()] < self.rank[ry.index()] {
            (ry, rx)
        } else {
            (rx, ry)
        };
        self.parent[child.index()].set(parent.0);
        if self.rank[parent.index()] == self.rank[child.index()] {
            self.rank[parent.index()] += 1;
        }
        self.ground[parent.index()] = g;
    }

    /// Resolves every variable and drops ground classes.
    pub fn resolve_set<I: IntoIterator<Item = Var>>(&self, vars: I) -> VarSet {
        vars.into_iter()
            .map(|v| self.find(v))
            .filter(|v| !self.ground[v.index()])
            .collect()
    }

    // Scratch marks: a generation counter makes clearing O(1).

    pub(crate) fn begin_scratch(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.scratch.iter_mut().for_each(|m| *m = 0);
            self.generation = 1;
        }
    }

    /// Marks the class of `root`; returns false if it was already marked.
    pub(crate) fn mark(&mut self, root: Var) -> bool {
        let slot = &mut self.scratch[root.index()];
        if *slot == self.generation {
            false
        } else {
            *slot = self.generation;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_vars_are_distinct() {
        let mut s = VarStore::new();
        assert!(s.fresh_vars(0).is_empty());
        let a = s.fresh_vars(3);
        let b = s.fresh_vars(2);
        let all: VarSet = a.iter().chain(b.iter()).copied().collect();
        assert_eq!(all.len(), 5);
        for &x in &a {
            for &y in &a {
                assert_eq!(x == y, s.same(x, y));
            }
        }
    }

    #[test]
    fn grounding_is_class_wide_and_idempotent() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(3);
        s.alias_vars(v[0], v[1]);
        s.ground_var(v[0]);
        assert!(s.is_ground(v[1]));
        s.ground_var(v[0]);
        assert!(s.is_ground(v[0]));
        assert!(!s.is_ground(v[2]));
    }

    #[test]
    fn alias_merges_ground_marks() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(3);
        s.ground_var(v[1]);
        s.alias_vars(v[0], v[1]);
        assert!(s.is_ground(v[0]));
        s.alias_vars(v[2], v[2]);
        assert!(!s.is_ground(v[2]));
    }

    #[test]
    fn alias_is_transitive() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(4);
        s.alias_vars(v[0], v[1]);
        s.alias_vars(v[1], v[2]);
        assert_eq!(s.find(v[0]), s.find(v[2]));
        assert_ne!(s.find(v[0]), s.find(v[3]));
    }

    #[test]
    fn scratch_generations_do_not_leak() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(2);
        s.begin_scratch();
        assert!(s.mark(v[0]));
        assert!(!s.mark(v[0]));
        s.begin_scratch();
        assert!(s.mark(v[0]));
    }
}
