//! Entailment by forward chaining.
//!
//! To decide `f ⊨ z ← Z` the classes of `Z` are marked, then every clause
//! whose body is fully marked marks its head, until nothing changes. Each
//! clause keeps a counter of unmarked body classes, so one query is linear
//! in the number of variable occurrences. Marks live in the store's scratch
//! generation and never touch the ground marks.

use std::collections::HashMap;

use super::formula::{Clause, Formula, Resolved};
use super::store::{Var, VarStore};

/// A formula prepared for repeated entailment queries.
///
/// The resolution of the clauses is taken at construction time; rebuild the
/// entailer after aliasing or grounding variables in the store.
pub struct Entailer {
    heads: Vec<Var>,
    bodies: Vec<Vec<Var>>,
    watch: HashMap<Var, Vec<usize>>,
}

impl Entailer {
    pub fn new(store: &VarStore, f: &Formula) -> Entailer {
        Self::from_clauses(store, f.iter())
    }

    pub fn from_clauses<'a>(store: &VarStore, clauses: impl IntoIterator<Item = &'a Clause>) -> Entailer {
        let mut heads = Vec::new();
        let mut bodies = Vec::new();
        let mut watch: HashMap<Var, Vec<usize>> = HashMap::new();
        for c in clauses {
            let (h, body) = match c.resolve(store) {
                Resolved::Trivial => continue,
                Resolved::Unit(h) => (h, Vec::new()),
                Resolved::Clause(c) => (c.head(), c.body().to_vec()),
            };
            let idx = heads.len();
            for &b in &body {
                watch.entry(b).or_default().push(idx);
            }
            heads.push(h);
            bodies.push(body);
        }
        Entailer { heads, bodies, watch }
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// `f ⊨ head ← ∧body`.
    pub fn entails(&self, store: &mut VarStore, head: Var, body: &[Var]) -> bool {
        self.entails_masked(store, head, body, None)
    }

    /// As [`Entailer::entails`], ignoring the clauses whose index is
    /// flagged in `disabled`.
    pub fn entails_masked(
        &self,
        store: &mut VarStore,
        head: Var,
        body: &[Var],
        disabled: Option<&[bool]>,
    ) -> bool {
        let goal = store.find(head);
        if store.is_ground(goal) {
            return true;
        }
        store.begin_scratch();
        let mut agenda = Vec::new();
        for &b in body {
            let r = store.find(b);
            if r == goal {
                return true;
            }
            if !store.is_ground(r) && store.mark(r) {
                agenda.push(r);
            }
        }
        let live = |i: usize| disabled.is_none_or(|d| !d[i]);
        let mut pending: Vec<usize> = self
            .bodies
            .iter()
            .map(|b| b.iter().filter(|&&v| !store.is_ground(v)).count())
            .collect();
        for i in 0..self.heads.len() {
            if pending[i] == 0 && live(i) {
                let h = self.heads[i];
                if h == goal {
                    return true;
                }
                if !store.is_ground(h) && store.mark(h) {
                    agenda.push(h);
                }
            }
        }
        while let Some(v) = agenda.pop() {
            let Some(ws) = self.watch.get(&v) else { continue };
            for &i in ws {
                pending[i] -= 1;
                if pending[i] == 0 && live(i) {
                    let h = self.heads[i];
                    if h == goal {
                        return true;
                    }
                    if !store.is_ground(h) && store.mark(h) {
                        agenda.push(h);
                    }
                }
            }
        }
        false
    }
}

/// `f ⊨ head ← ∧body`.
pub fn entails_clause(store: &mut VarStore, f: &Formula, head: Var, body: &[Var]) -> bool {
    Entailer::new(store, f).entails(store, head, body)
}

/// `f1 ⊨ f2` for formulas over one store. Ground marks and class
/// equivalences are shared, so only the clauses of `f2` need checking.
pub fn entails(store: &mut VarStore, f1: &Formula, f2: &Formula) -> bool {
    let e = Entailer::new(store, f1);
    for c in f2.iter() {
        let ok = match c.resolve(store) {
            Resolved::Trivial => true,
            Resolved::Unit(h) => e.entails(store, h, &[]),
            Resolved::Clause(c) => e.entails(store, c.head(), c.body()),
        };
        if !ok {
            return false;
        }
    }
    true
}

pub fn equiv(store: &mut VarStore, f1: &Formula, f2: &Formula) -> bool {
    entails(store, f1, f2) && entails(store, f2, f1)
}

/// Drops every clause entailed by the clauses that remain. Quadratic in the
/// clause count times the cost of one entailment query.
pub fn remove_redundant(store: &mut VarStore, f: &Formula) -> Formula {
    let normal = f.normalized(store);
    let clauses = normal.to_vec();
    let e = Entailer::from_clauses(store, clauses.iter());
    let mut disabled = vec![false; clauses.len()];
    for (i, c) in clauses.iter().enumerate() {
        disabled[i] = true;
        if !e.entails_masked(store, c.head(), c.body(), Some(&disabled)) {
            disabled[i] = false;
        }
    }
    Formula::from_clauses(
        clauses
            .into_iter()
            .zip(disabled)
            .filter_map(|(c, off)| (!off).then_some(c))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: usize) -> (VarStore, Vec<Var>) {
        let mut s = VarStore::new();
        let v = s.fresh_vars(n);
        (s, v)
    }

    #[test]
    fn transitive_dependency_is_entailed() {
        // (x←u)∧(u←y) ⊨ x←y
        let (mut s, v) = setup(3);
        let (x, u, y) = (v[0], v[1], v[2]);
        let f = Formula::from_clauses(vec![Clause::new(x, [u]), Clause::new(u, [y])]);
        assert!(entails_clause(&mut s, &f, x, &[y]));
        assert!(!entails_clause(&mut s, &f, y, &[x]));
    }

    #[test]
    fn reflexive_clause_is_entailed() {
        let (mut s, v) = setup(1);
        assert!(entails_clause(&mut s, &Formula::top(), v[0], &[v[0]]));
    }

    #[test]
    fn converse_is_not_entailed() {
        let (mut s, v) = setup(2);
        let f = Formula::from_clauses(vec![Clause::new(v[0], [v[1]])]);
        assert!(!entails_clause(&mut s, &f, v[1], &[v[0]]));
    }

    #[test]
    fn ground_marks_seed_the_chaining() {
        let (mut s, v) = setup(3);
        let f = Formula::from_clauses(vec![Clause::new(v[0], [v[1], v[2]])]);
        assert!(!entails_clause(&mut s, &f, v[0], &[v[1]]));
        s.ground_var(v[2]);
        assert!(entails_clause(&mut s, &f, v[0], &[v[1]]));
    }

    #[test]
    fn queries_leave_no_marks() {
        let (mut s, v) = setup(3);
        let f = Formula::from_clauses(vec![Clause::new(v[0], [v[1]])]);
        assert!(entails_clause(&mut s, &f, v[0], &[v[1]]));
        assert!(!entails_clause(&mut s, &f, v[0], &[v[2]]));
        assert!(!s.is_ground(v[0]) && !s.is_ground(v[1]));
    }

    #[test]
    fn formula_entailment() {
        let (mut s, v) = setup(2);
        let both = Formula::from_clauses(vec![Clause::new(v[0], [v[1]]), Clause::new(v[1], [v[0]])]);
        let one = Formula::from_clauses(vec![Clause::new(v[0], [v[1]])]);
        assert!(entails(&mut s, &both, &both));
        assert!(entails(&mut s, &both, &one));
        assert!(!entails(&mut s, &one, &both));
        assert!(!equiv(&mut s, &one, &both));
    }

    #[test]
    fn redundancy_removal() {
        let (mut s, v) = setup(3);
        let (x, u, y) = (v[0], v[1], v[2]);
        let dup = Formula::from_clauses(vec![Clause::new(x, [y]), Clause::new(x, [y])]);
        assert_eq!(remove_redundant(&mut s, &dup).to_vec(), vec![Clause::new(x, [y])]);

        let f = Formula::from_clauses(vec![Clause::new(x, [u]), Clause::new(u, [y]), Clause::new(x, [y])]);
        let r = remove_redundant(&mut s, &f);
        let mut got = r.to_vec();
        got.sort();
        let mut want = vec![Clause::new(x, [u]), Clause::new(u, [y])];
        want.sort();
        assert_eq!(got, want);
        assert!(equiv(&mut s, &r, &f));

        let irredundant = Formula::from_clauses(vec![Clause::new(x, [u]), Clause::new(u, [y])]);
        assert_eq!(remove_redundant(&mut s, &irredundant).len(), 2);
    }
}
