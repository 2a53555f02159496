//! Fourier-Motzkin style variable elimination.

use std::collections::HashMap;

use super::entail::remove_redundant;
use super::formula::{Clause, Formula};
use super::store::{Var, VarStore};

/// `∃x.f`, by syllogising every clause with head `x` against every clause
/// with `x` in its body.
///
/// Compaction (dropping clauses entailed by the rest) runs only when the
/// result has strictly more clauses than the input, unless the store has
/// filtered projection switched off, in which case it always runs.
pub fn project_out(store: &mut VarStore, f: &Formula, x: Var) -> Formula {
    let normal = f.normalized(store);
    let x = store.find(x);
    if store.is_ground(x) {
        return normal;
    }
    let before = normal.len();
    let mut heads: Vec<&Clause> = Vec::new();
    let mut bodies: Vec<&Clause> = Vec::new();
    let mut rest: Vec<Clause> = Vec::with_capacity(before);
    for c in normal.iter() {
        if c.head() == x {
            heads.push(c);
        } else if c.body().binary_search(&x).is_ok() {
            bodies.push(c);
        } else {
            rest.push(c.clone());
        }
    }
    for h in &heads {
        for b in &bodies {
            let y = b.head();
            let mut z: Vec<Var> = h.body().iter().chain(b.body().iter()).copied().filter(|&v| v != x).collect();
            z.sort_unstable();
            z.dedup();
            if z.binary_search(&y).is_err() {
                rest.push(Clause::from_sorted(y, z));
            }
        }
    }
    let grown = rest.len() > before;
    let out = Formula::from_clauses(rest);
    if grown || !store.filtered_projection() {
        store.counters.proj_elim += 1;
        remove_redundant(store, &out)
    } else {
        store.counters.proj_filt += 1;
        out
    }
}

/// `∃̄keep.f`: eliminates every other variable, cheapest first, then runs a
/// final pass that grounds unit clauses and unifies mutual implications
/// `y ← z`, `z ← y`.
pub fn project_onto(store: &mut VarStore, f: &Formula, keep: &[Var]) -> Formula {
    store.counters.project += 1;
    let mut cur = f.normalized(store);
    loop {
        let kept = store.resolve_set(keep.iter().copied());
        let mut occurrences: HashMap<Var, usize> = HashMap::new();
        for c in cur.iter() {
            for v in std::iter::once(c.head()).chain(c.body().iter().copied()) {
                if !kept.contains(&v) {
                    *occurrences.entry(v).or_default() += 1;
                }
            }
        }
        let Some((&x, _)) = occurrences.iter().min_by_key(|(v, n)| (**n, **v)) else {
            break;
        };
        cur = project_out(store, &cur, x);
    }
    simplify_final(store, &cur)
}

fn simplify_final(store: &mut VarStore, f: &Formula) -> Formula {
    let mut cur = f.normalized(store);
    loop {
        let singles: Vec<(Var, Var)> = cur
            .iter()
            .filter(|c| c.body().len() == 1)
            .map(|c| (c.head(), c.body()[0]))
            .collect();
        let mut merged = false;
        for &(h, b) in &singles {
            if !store.same(h, b) && singles.contains(&(b, h)) {
                store.alias_vars(h, b);
                merged = true;
            }
        }
        if !merged {
            return cur;
        }
        cur = cur.normalized(store);
    }
}
