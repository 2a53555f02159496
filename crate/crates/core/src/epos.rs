//! Patterns restricted to groundness and equivalences.
//!
//! An EPos pattern is a [`Pattern`] whose formula is empty; all of its
//! content is the ground and aliased structure of the arguments.

use crate::bool_core::{Entailer, Formula, Var, VarStore};
use crate::error::Result;
use crate::gep::{mgu_flat, msg_atoms, Pattern};

pub fn epos_meet(store: &mut VarStore, a: &Pattern, b: &Pattern) -> Result<Pattern> {
    mgu_flat(store, &a.args, &b.args)?;
    Ok(Pattern::new(a.args.clone(), Formula::top()))
}

pub fn epos_join(store: &mut VarStore, a: &Pattern, b: &Pattern) -> Result<Pattern> {
    let m = msg_atoms(store, &a.args, &b.args)?;
    Ok(Pattern::new(m.args, Formula::top()))
}

/// `a ⊨ b`: `a`'s atom is an instance of `b`'s.
pub fn epos_entails(store: &VarStore, a: &Pattern, b: &Pattern) -> bool {
    if a.arity() != b.arity() {
        return false;
    }
    let mut theta: std::collections::HashMap<Var, Var> = std::collections::HashMap::new();
    for (&x, &y) in a.args.iter().zip(&b.args) {
        let (rx, ry) = (store.find(x), store.find(y));
        if store.is_ground(ry) {
            if !store.is_ground(rx) {
                return false;
            }
            continue;
        }
        match theta.get(&ry) {
            Some(&prev) if prev != rx && !(store.is_ground(prev) && store.is_ground(rx)) => return false,
            Some(_) => {}
            None => {
                theta.insert(ry, rx);
            }
        }
    }
    true
}

/// Strongest EPos consequence of `⟨p(args), f⟩`: arguments whose
/// groundness is entailed become ground and arguments entailed to be
/// equivalent are aliased. The formula is dropped.
pub fn alpha_epos(store: &mut VarStore, f: &Formula, args: &[Var]) -> Pattern {
    let f = f.normalized(store);
    let e = Entailer::new(store, &f);
    let roots: Vec<Var> = args.iter().map(|&a| store.find(a)).collect();
    let mut ground = Vec::new();
    for &r in &roots {
        if !store.is_ground(r) && e.entails(store, r, &[]) {
            ground.push(r);
        }
    }
    let mut alias = Vec::new();
    for (i, &a) in roots.iter().enumerate() {
        for &b in &roots[i + 1..] {
            if a != b && !store.is_ground(a) && !store.is_ground(b) && e.entails(store, a, &[b]) && e.entails(store, b, &[a]) {
                alias.push((a, b));
            }
        }
    }
    for r in ground {
        store.ground_var(r);
    }
    for (a, b) in alias {
        store.alias_vars(a, b);
    }
    Pattern::new(args.to_vec(), Formula::top())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bool_core::Clause;

    #[test]
    fn meet_grounds_through_aliasing() {
        let mut s = VarStore::new();
        let x = s.fresh();
        let (u, g) = (s.fresh(), s.ground_marker());
        let a = Pattern::new(vec![x, x], Formula::top());
        let b = Pattern::new(vec![u, g], Formula::top());
        epos_meet(&mut s, &a, &b).unwrap();
        assert!(s.is_ground(x) && s.is_ground(u));
    }

    #[test]
    fn join_by_msg() {
        let mut s = VarStore::new();
        let g = s.ground_marker();
        let (u, v) = (s.fresh(), s.fresh());
        let a = Pattern::new(vec![g, u, u], Formula::top());
        let b = Pattern::new(vec![v, v, g], Formula::top());
        let j = epos_join(&mut s, &a, &b).unwrap();
        assert!(j.args.iter().all(|&t| !s.is_ground(t)));
        assert!(!s.same(j.args[0], j.args[1]) && !s.same(j.args[1], j.args[2]) && !s.same(j.args[0], j.args[2]));
    }

    #[test]
    fn entailment_is_instantiation() {
        let mut s = VarStore::new();
        let g = s.ground_marker();
        let (x, y) = (s.fresh(), s.fresh());
        let gg = Pattern::new(vec![g, g], Formula::top());
        let xy = Pattern::new(vec![x, y], Formula::top());
        let gy = Pattern::new(vec![g, y], Formula::top());
        assert!(epos_entails(&s, &xy, &xy));
        assert!(epos_entails(&s, &gg, &xy));
        assert!(!epos_entails(&s, &xy, &gy));
    }

    #[test]
    fn alpha_keeps_only_ge_content() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(2);
        let iff = Formula::from_clauses(vec![Clause::new(v[0], [v[1]]), Clause::new(v[1], [v[0]])]);
        alpha_epos(&mut s, &iff, &v);
        assert!(s.same(v[0], v[1]));

        let w = s.fresh_vars(2);
        let imp = Formula::from_clauses(vec![Clause::new(w[0], [w[1]])]);
        let p = alpha_epos(&mut s, &imp, &w);
        assert!(!s.same(w[0], w[1]) && !s.is_ground(w[0]) && p.formula.is_empty());
    }
}
