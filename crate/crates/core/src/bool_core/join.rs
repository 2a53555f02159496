//! Join by renaming, meet and projection.
//!
//! For formulas over `Y`, the join is `∃̄Y. ρ1(f1) ∧ ρ2(f2) ∧ ⋀ y ↔ (ρ1(y) ∧ ρ2(y))`.
//! Each biimplication is encoded as the three clauses `y ← ρ1(y)∧ρ2(y)`,
//! `ρ1(y) ← y` and `ρ2(y) ← y`. The models of the result are exactly the
//! pairwise intersections of models of the operands, which on definite
//! functions is their least upper bound.

use super::formula::{rename_apart, Formula, FormulaBuilder};
use super::project::project_onto;
use super::store::{Var, VarStore};

/// Join of `f1` viewed through the tuple `v1` and `f2` viewed through `v2`,
/// expressed over `ys`.
///
/// The variables of `f1`/`v1`, of `f2`/`v2` and of `ys` must be pairwise
/// disjoint (renamed apart); `v1`, `v2` and `ys` have equal length. Entries
/// of `v1`/`v2` may be ground, standing for the constant `true`.
pub fn join_positional(
    store: &mut VarStore,
    f1: &Formula,
    v1: &[Var],
    f2: &Formula,
    v2: &[Var],
    ys: &[Var],
) -> Formula {
    assert!(v1.len() == ys.len() && v2.len() == ys.len(), "tuple length mismatch");
    let mut links = FormulaBuilder::new();
    for k in 0..ys.len() {
        let (y, a, b) = (ys[k], v1[k], v2[k]);
        links.add(store, y, &[a, b]);
        links.add(store, a, &[y]);
        links.add(store, b, &[y]);
    }
    store.counters.meet += 2;
    let combined = f1.meet(f2).meet(&links.finish());
    project_onto(store, &combined, ys)
}

/// Join of two formulas over the same store, projected onto `onto`.
///
/// Ground marks and aliases already recorded for `onto` are shared by both
/// operands and therefore survive in the result.
pub fn join_formula(store: &mut VarStore, f1: &Formula, f2: &Formula, onto: &[Var]) -> Formula {
    if f1.vars(store).is_empty() && f2.vars(store).is_empty() {
        return Formula::top();
    }
    let (g1, r1) = rename_apart(store, f1, onto);
    let (g2, r2) = rename_apart(store, f2, onto);
    let v1: Vec<Var> = onto.iter().map(|&v| r1.apply(store, v)).collect();
    let v2: Vec<Var> = onto.iter().map(|&v| r2.apply(store, v)).collect();
    join_positional(store, &g1, &v1, &g2, &v2, onto)
}
