//! Self-contained patterns for the fact store.
//!
//! A frozen pattern numbers its variables locally, so it carries no ties to
//! any [`VarStore`]. Thawing allocates fresh variables, which gives the
//! rename-on-read behaviour of a dynamic database.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bool_core::{Clause, Formula, Resolved, Var, VarStore};

use super::Pattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Ground,
    Var(u32),
}

/// How groundness and aliasing are laid out when freezing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    /// Ground and aliased arguments live in the atom.
    Factorised,
    /// Arguments are distinct variables; aliasing is kept as clause pairs
    /// and groundness as unit facts on the argument variables.
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrozenPattern {
    pub args: Vec<Slot>,
    /// `(head, body)` over local numbers, bodies sorted, list sorted.
    pub clauses: Vec<(u32, Vec<u32>)>,
    /// Locals known to be true. Only used by flat storage.
    pub facts: Vec<u32>,
    pub locals: u32,
}

impl FrozenPattern {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Ground argument positions, whichever storage was used.
    pub fn ground_args(&self) -> usize {
        self.args
            .iter()
            .filter(|s| match s {
                Slot::Ground => true,
                Slot::Var(v) => self.facts.contains(v),
            })
            .count()
    }

    /// `p(g, X1, X1) :- X2 <- X1.`
    pub fn render(&self, pred: &str) -> String {
        let name = |v: u32| format!("X{}", v + 1);
        let mut s = String::from(pred);
        if !self.args.is_empty() {
            s.push('(');
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                match a {
                    Slot::Ground => s.push('g'),
                    Slot::Var(v) => s.push_str(&name(*v)),
                }
            }
            s.push(')');
        }
        let mut parts: Vec<String> = self.facts.iter().map(|&v| name(v)).collect();
        for (h, body) in &self.clauses {
            let mut c = format!("{} <- ", name(*h));
            for (i, &b) in body.iter().enumerate() {
                if i > 0 {
                    c.push_str(" & ");
                }
                let _ = write!(c, "{}", name(b));
            }
            parts.push(c);
        }
        if !parts.is_empty() {
            s.push_str(" :- ");
            s.push_str(&parts.join(", "));
        }
        s.push('.');
        s
    }
}

struct Numbering {
    map: HashMap<Var, u32>,
}

impl Numbering {
    fn local(&mut self, r: Var) -> u32 {
        let n = self.map.len() as u32;
        *self.map.entry(r).or_insert(n)
    }
}

/// Normalizes the formula and copies the pattern out of the store.
pub fn freeze(store: &mut VarStore, p: &Pattern, storage: Storage) -> FrozenPattern {
    let f = p.formula.normalized(store);
    let mut num = Numbering { map: HashMap::new() };
    let mut args = Vec::with_capacity(p.args.len());
    let mut facts = Vec::new();
    let mut clauses = Vec::new();
    match storage {
        Storage::Factorised => {
            for &a in &p.args {
                let r = store.find(a);
                args.push(if store.is_ground(r) { Slot::Ground } else { Slot::Var(num.local(r)) });
            }
        }
        Storage::Flat => {
            let mut first: HashMap<Var, u32> = HashMap::new();
            for (i, &a) in p.args.iter().enumerate() {
                let i = i as u32;
                let r = store.find(a);
                args.push(Slot::Var(i));
                if store.is_ground(r) {
                    facts.push(i);
                } else if let Some(&j) = first.get(&r) {
                    clauses.push((i, vec![j]));
                    clauses.push((j, vec![i]));
                } else {
                    first.insert(r, i);
                }
            }
            num.map = first;
            // clause variables outside the arguments continue the numbering
            let mut next = p.args.len() as u32;
            for c in f.iter() {
                for v in std::iter::once(c.head()).chain(c.body().iter().copied()) {
                    let r = store.find(v);
                    num.map.entry(r).or_insert_with(|| {
                        next += 1;
                        next - 1
                    });
                }
            }
        }
    }
    for c in f.iter() {
        let Resolved::Clause(c) = c.resolve(store) else {
            unreachable!("normalized formula has only proper clauses");
        };
        let h = num.local(c.head());
        let mut body: Vec<u32> = c.body().iter().map(|&b| num.local(b)).collect();
        body.sort_unstable();
        clauses.push((h, body));
    }
    clauses.sort();
    clauses.dedup();
    let locals = match storage {
        Storage::Factorised => num.map.len() as u32,
        Storage::Flat => num.map.values().copied().max().map_or(p.args.len() as u32, |m| (m + 1).max(p.args.len() as u32)),
    };
    FrozenPattern { args, clauses, facts, locals }
}

/// A fresh copy of the pattern in `store`.
pub fn thaw(store: &mut VarStore, fp: &FrozenPattern) -> Pattern {
    let vars = store.fresh_vars(fp.locals as usize);
    let mut marker = None;
    let args = fp
        .args
        .iter()
        .map(|s| match s {
            Slot::Var(v) => vars[*v as usize],
            Slot::Ground => *marker.get_or_insert_with(|| store.ground_marker()),
        })
        .collect();
    for &v in &fp.facts {
        store.ground_var(vars[v as usize]);
    }
    let clauses = fp
        .clauses
        .iter()
        .map(|(h, body)| Clause::new(vars[*h as usize], body.iter().map(|&b| vars[b as usize])))
        .collect();
    Pattern { args, formula: Formula::from_clauses(clauses) }
}
