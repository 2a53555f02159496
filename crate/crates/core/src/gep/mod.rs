//! Call and answer patterns: an atom whose flat arguments carry groundness
//! and aliasing, paired with a formula for the remaining dependencies.

mod frozen;

pub use frozen::{freeze, thaw, FrozenPattern, Slot, Storage};

use std::collections::HashMap;

use crate::bool_core::{
    join_positional, project_onto, remove_redundant, Entailer, Formula, Resolved, Var, VarStore,
};
use crate::error::{Error, Result};

/// `⟨p(args), formula⟩`. The predicate is kept by the caller; a ground
/// argument is any variable whose class is ground.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub args: Vec<Var>,
    pub formula: Formula,
}

impl Pattern {
    pub fn new(args: Vec<Var>, formula: Formula) -> Pattern {
        Pattern { args, formula }
    }

    /// `⟨p(x1..xn), true⟩` over fresh variables.
    pub fn top(store: &mut VarStore, arity: usize) -> Pattern {
        Pattern { args: store.fresh_vars(arity), formula: Formula::top() }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn ground_args(&self, store: &VarStore) -> usize {
        self.args.iter().filter(|&&a| store.is_ground(a)).count()
    }

    pub fn render(&self, store: &VarStore, pred: &str) -> String {
        let args: Vec<String> = self
            .args
            .iter()
            .map(|&a| if store.is_ground(a) { "g".to_string() } else { format!("{}", store.find(a)) })
            .collect();
        format!("{pred}({}) :- {}", args.join(", "), self.formula.render(store))
    }
}

/// Unifies two flat argument vectors in place.
pub fn mgu_flat(store: &mut VarStore, a1: &[Var], a2: &[Var]) -> Result<()> {
    if a1.len() != a2.len() {
        return Err(Error::ArityMismatch { pred: String::new(), left: a1.len(), right: a2.len() });
    }
    for (&x, &y) in a1.iter().zip(a2) {
        store.alias_vars(x, y);
    }
    Ok(())
}

pub fn gep_meet(store: &mut VarStore, c1: &Pattern, c2: &Pattern) -> Result<Pattern> {
    mgu_flat(store, &c1.args, &c2.args)?;
    store.counters.meet += 1;
    Ok(Pattern { args: c1.args.clone(), formula: c1.formula.meet(&c2.formula) })
}

/// A most specific generalisation with the substitutions back to each side.
#[derive(Debug, Clone)]
pub struct Msg {
    pub args: Vec<Var>,
    /// `σ1(args[k])` and `σ2(args[k])`, as class representatives.
    pub left: Vec<Var>,
    pub right: Vec<Var>,
}

/// Argwise anti-unification. Two ground arguments generalise to a ground
/// argument; any other pair of classes maps to one fresh variable per
/// distinct pair, numbered left to right.
pub fn msg_atoms(store: &mut VarStore, t1: &[Var], t2: &[Var]) -> Result<Msg> {
    if t1.len() != t2.len() {
        return Err(Error::ArityMismatch { pred: String::new(), left: t1.len(), right: t2.len() });
    }
    let mut cache: HashMap<(Var, Var), Var> = HashMap::new();
    let mut ground: Option<Var> = None;
    let mut out = Msg { args: Vec::new(), left: Vec::new(), right: Vec::new() };
    for (&a, &b) in t1.iter().zip(t2) {
        let (ra, rb) = (store.find(a), store.find(b));
        let t = if store.is_ground(ra) && store.is_ground(rb) {
            *ground.get_or_insert_with(|| store.ground_marker())
        } else {
            *cache.entry((ra, rb)).or_insert_with(|| store.fresh())
        };
        out.args.push(t);
        out.left.push(ra);
        out.right.push(rb);
    }
    Ok(out)
}

fn clause_holds(store: &mut VarStore, e: &Entailer, head: Var, body: &[Var]) -> bool {
    e.entails(store, head, body)
}

/// Case 1: a one-way match `θ` with `t1 = θ(t2)`, then `f1 ⊨ θ(f2)` checked
/// clause by clause. `None` when no such match exists.
pub fn entails_by_match(store: &mut VarStore, c1: &Pattern, c2: &Pattern) -> Option<bool> {
    let theta = match_onto(store, &c2.args, &c1.args)?;
    let e = Entailer::new(store, &c1.formula);
    let image = |v: Var, store: &VarStore| -> Var {
        let r = store.find(v);
        theta.get(&r).copied().unwrap_or(r)
    };
    for c in c2.formula.iter() {
        let h = image(c.head(), store);
        let body: Vec<Var> = c.body().iter().map(|&b| image(b, store)).collect();
        if !clause_holds(store, &e, h, &body) {
            return Some(false);
        }
    }
    Some(true)
}

/// `θ` mapping classes of `general` so that `θ(general) = specific`.
fn match_onto(store: &VarStore, general: &[Var], specific: &[Var]) -> Option<HashMap<Var, Var>> {
    if general.len() != specific.len() {
        return None;
    }
    let mut theta: HashMap<Var, Var> = HashMap::new();
    for (&g, &s) in general.iter().zip(specific) {
        let (rg, rs) = (store.find(g), store.find(s));
        if store.is_ground(rg) {
            if !store.is_ground(rs) {
                return None;
            }
            continue;
        }
        match theta.get(&rg) {
            Some(&prev) => {
                if !(prev == rs || store.is_ground(prev) && store.is_ground(rs)) {
                    return None;
                }
            }
            None => {
                theta.insert(rg, rs);
            }
        }
    }
    Some(theta)
}

/// Case 2: with `t = msg(t1, t2)`, decides
/// `f1 ∧ (t1↔t) ⊨ f2 ∧ (t2↔t)` with `t` the only shared vocabulary.
///
/// Every conjunct of the right side is a statement about `t`; substituting
/// `σ1(t)` for `t` turns it into a query against `f1` alone.
pub fn entails_by_msg(store: &mut VarStore, c1: &Pattern, c2: &Pattern) -> bool {
    let mut f2 = c2.formula.clone();
    let t2_vars = store.resolve_set(c2.args.iter().copied());
    if !f2.vars(store).is_subset(&t2_vars) {
        let keep: Vec<Var> = t2_vars.iter().copied().collect();
        f2 = project_onto(store, &f2, &keep);
    }
    let m = match msg_atoms(store, &c1.args, &c2.args) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let e = Entailer::new(store, &c1.formula);
    // first position of each right-hand class
    let mut first: HashMap<Var, usize> = HashMap::new();
    for (k, &r) in m.right.iter().enumerate() {
        if store.is_ground(r) {
            if !clause_holds(store, &e, m.left[k], &[]) {
                return false;
            }
            continue;
        }
        match first.get(&r) {
            Some(&j) => {
                let (a, b) = (m.left[j], m.left[k]);
                if !(clause_holds(store, &e, a, &[b]) && clause_holds(store, &e, b, &[a])) {
                    return false;
                }
            }
            None => {
                first.insert(r, k);
            }
        }
    }
    for c in f2.iter() {
        let (h, body) = match c.resolve(store) {
            Resolved::Trivial => continue,
            Resolved::Unit(h) => (h, Vec::new()),
            Resolved::Clause(c) => (c.head(), c.body().to_vec()),
        };
        let through = |v: Var| first.get(&v).map(|&k| m.left[k]);
        let Some(h1) = through(h) else { return false };
        let mut b1 = Vec::with_capacity(body.len());
        for b in body {
            match through(b) {
                Some(v) => b1.push(v),
                None => return false,
            }
        }
        if !clause_holds(store, &e, h1, &b1) {
            return false;
        }
    }
    true
}

/// `c1 ⊨ c2` for variable-disjoint patterns. With `try_match` the cheap
/// matching test runs first.
pub fn gep_entails(store: &mut VarStore, c1: &Pattern, c2: &Pattern, try_match: bool) -> bool {
    if c1.arity() != c2.arity() {
        return false;
    }
    if try_match && entails_by_match(store, c1, c2) == Some(true) {
        return true;
    }
    entails_by_msg(store, c1, c2)
}

/// Least upper bound of two variable-disjoint patterns, computed over the
/// msg of their atoms.
pub fn gep_join(store: &mut VarStore, c1: &Pattern, c2: &Pattern) -> Result<Pattern> {
    let m = msg_atoms(store, &c1.args, &c2.args)?;
    let mut ys: Vec<Var> = Vec::new();
    let mut v1: Vec<Var> = Vec::new();
    let mut v2: Vec<Var> = Vec::new();
    for k in 0..m.args.len() {
        let t = m.args[k];
        if store.is_ground(t) || ys.contains(&t) {
            continue;
        }
        ys.push(t);
        v1.push(m.left[k]);
        v2.push(m.right[k]);
    }
    let f = join_positional(store, &c1.formula, &v1, &c2.formula, &v2, &ys);
    Ok(Pattern { args: m.args, formula: f })
}

/// Moves groundness and equivalences entailed by the formula into the
/// arguments, then drops redundant clauses. The denotation is unchanged.
pub fn normalize_true(store: &mut VarStore, c: &Pattern) -> Pattern {
    let mut f = c.formula.normalized(store);
    loop {
        let e = Entailer::new(store, &f);
        let mut changed = false;
        let roots: Vec<Var> = c.args.iter().map(|&a| store.find(a)).collect();
        for &a in &roots {
            if !store.is_ground(a) && e.entails(store, a, &[]) {
                store.ground_var(a);
                changed = true;
            }
        }
        if !changed {
            for (i, &a) in roots.iter().enumerate() {
                for &b in &roots[i + 1..] {
                    if store.same(a, b) || store.is_ground(a) || store.is_ground(b) {
                        continue;
                    }
                    if e.entails(store, a, &[b]) && e.entails(store, b, &[a]) {
                        store.alias_vars(a, b);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
        f = f.normalized(store);
    }
    Pattern { args: c.args.clone(), formula: remove_redundant(store, &f) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bool_core::Clause;
    use crate::oracle::models_over;

    fn same_meaning(s: &VarStore, a: &Pattern, b: &Pattern) -> bool {
        models_over(s, &a.formula, &a.args).unwrap() == models_over(s, &b.formula, &b.args).unwrap()
    }

    #[test]
    fn mgu_grounds_through_marker() {
        let mut s = VarStore::new();
        let x = s.fresh();
        let t = s.ground_marker();
        let y = s.fresh();
        mgu_flat(&mut s, &[x, t], &[y, y]).unwrap();
        assert!(s.is_ground(x) && s.is_ground(y));
    }

    #[test]
    fn mgu_aliases_and_rejects_arity() {
        let mut s = VarStore::new();
        let v = s.fresh_vars(3);
        mgu_flat(&mut s, &[v[0], v[0]], &[v[1], v[2]]).unwrap();
        assert!(s.same(v[1], v[2]));
        assert!(mgu_flat(&mut s, &[v[0]], &[v[1], v[2]]).is_err());
        let before = s.clone();
        mgu_flat(&mut s, &[v[0]], &[v[0]]).unwrap();
        assert_eq!(s.find(v[0]), before.find(v[0]));
    }

    #[test]
    fn meet_keeps_formula_and_grounds() {
        let mut s = VarStore::new();
        let x = s.fresh();
        let y = s.fresh();
        let g = s.ground_marker();
        let c1 = Pattern::new(vec![x, g], Formula::from_clauses(vec![Clause::new(x, [y])]));
        let c2 = Pattern::top(&mut s, 2);
        let m = gep_meet(&mut s, &c1, &c2).unwrap();
        assert!(s.is_ground(c2.args[1]));
        assert_eq!(m.formula.len(), 1);
    }

    #[test]
    fn msg_examples() {
        let mut s = VarStore::new();
        let (x, y) = (s.fresh(), s.fresh());
        let m = msg_atoms(&mut s, &[x, x], &[y, y]).unwrap();
        assert_eq!(m.args[0], m.args[1]);
        assert!(!s.is_ground(m.args[0]));

        let g = s.ground_marker();
        let m = msg_atoms(&mut s, &[g, x], &[g, y]).unwrap();
        assert!(s.is_ground(m.args[0]) && !s.is_ground(m.args[1]));

        let m = msg_atoms(&mut s, &[g, g, x], &[y, g, y]).unwrap();
        assert!(!s.is_ground(m.args[0]) && s.is_ground(m.args[1]) && !s.is_ground(m.args[2]));
        assert_ne!(m.args[0], m.args[2]);
    }

    #[test]
    fn entailment_by_match() {
        // ⟨p(a,b), (b←a)∧(a←b)⟩ ⊨ ⟨p(u,v), v←u⟩
        let mut s = VarStore::new();
        let (a, b, u, v) = (s.fresh(), s.fresh(), s.fresh(), s.fresh());
        let c1 = Pattern::new(vec![a, b], Formula::from_clauses(vec![Clause::new(b, [a]), Clause::new(a, [b])]));
        let c2 = Pattern::new(vec![u, v], Formula::from_clauses(vec![Clause::new(v, [u])]));
        assert_eq!(entails_by_match(&mut s, &c1, &c2), Some(true));
        assert!(gep_entails(&mut s, &c1, &c2, false));
        assert!(!gep_entails(&mut s, &c2, &c1, true));
    }

    #[test]
    fn groundness_is_not_implied_by_nothing() {
        let mut s = VarStore::new();
        let c1 = Pattern::top(&mut s, 2);
        let g = s.ground_marker();
        let v = s.fresh();
        let c2 = Pattern::new(vec![g, v], Formula::top());
        assert!(!gep_entails(&mut s, &c1, &c2, true));
        assert!(gep_entails(&mut s, &c2, &c1, true));
    }

    #[test]
    fn aliasing_needs_the_msg_case() {
        // ⟨p(x,y), x↔y⟩ ⊨ ⟨p(z,z), true⟩ has no one-way match
        let mut s = VarStore::new();
        let (x, y, z) = (s.fresh(), s.fresh(), s.fresh());
        let c1 = Pattern::new(vec![x, y], Formula::from_clauses(vec![Clause::new(x, [y]), Clause::new(y, [x])]));
        let c2 = Pattern::new(vec![z, z], Formula::top());
        assert_eq!(entails_by_match(&mut s, &c1, &c2), None);
        assert!(entails_by_msg(&mut s, &c1, &c2));
        assert!(entails_by_msg(&mut s, &c2, &c1));
    }

    #[test]
    fn join_generalises_groundness() {
        let mut s = VarStore::new();
        let g = s.ground_marker();
        let x = s.fresh();
        let j = gep_join(&mut s, &Pattern::new(vec![g], Formula::top()), &Pattern::new(vec![x], Formula::top())).unwrap();
        assert!(!s.is_ground(j.args[0]));
        assert!(j.formula.is_empty());
    }

    #[test]
    fn join_of_transitive_chains() {
        let mut s = VarStore::new();
        let a = s.fresh_vars(4);
        let b = s.fresh_vars(4);
        let f1 = Formula::from_clauses(vec![Clause::new(a[0], [a[1]]), Clause::new(a[1], [a[3]])]);
        let f2 = Formula::from_clauses(vec![Clause::new(b[0], [b[2]]), Clause::new(b[2], [b[3]])]);
        let c1 = Pattern::new(a.clone(), f1);
        let c2 = Pattern::new(b.clone(), f2);
        let j = gep_join(&mut s, &c1, &c2).unwrap();
        let t = &j.args;
        let want = Pattern::new(
            t.clone(),
            Formula::from_clauses(vec![Clause::new(t[0], [t[1], t[2]]), Clause::new(t[0], [t[3]])]),
        );
        assert!(same_meaning(&s, &j, &want), "{}", j.render(&s, "p"));
    }

    #[test]
    fn true_normalization_moves_ge_content() {
        // ⟨p(u,v,w), (u↔v) ∧ w⟩ → ⟨p(u,u,true), true⟩
        let mut s = VarStore::new();
        let v = s.fresh_vars(3);
        let z = s.fresh();
        s.ground_var(z);
        let f = Formula::from_clauses(vec![
            Clause::new(v[0], [v[1]]),
            Clause::new(v[1], [v[0]]),
            Clause::new(v[2], [z]),
        ]);
        let c = Pattern::new(v.clone(), f);
        let before = models_over(&s, &c.formula, &c.args).unwrap();
        let n = normalize_true(&mut s, &c);
        assert!(n.formula.is_empty());
        assert!(s.same(v[0], v[1]) && s.is_ground(v[2]) && !s.is_ground(v[0]));
        assert_eq!(models_over(&s, &n.formula, &n.args).unwrap(), before);
    }
}
