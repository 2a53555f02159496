//! Brute-force model enumeration.
//!
//! A [`ModelSet`] lists the satisfying assignments of a Boolean function over
//! a small ordered universe. Position `i` of the universe is bit `i` of each
//! model mask. Everything here is exponential and exists to check the
//! symbolic operations.

pub mod reference;

use std::collections::{BTreeSet, HashMap};

use crate::bool_core::{Formula, FormulaBuilder, Resolved, Var, VarStore};
use crate::error::{Error, Result};

/// Enumeration ceiling on universe size.
pub const MAX_UNIVERSE: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelSet {
    width: usize,
    models: Vec<u32>,
}

impl std::fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ModelSet/{}{{", self.width)?;
        for (i, m) in self.models.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m:0w$b}", w = self.width.max(1))?;
        }
        write!(f, "}}")
    }
}

impl ModelSet {
    pub fn new(width: usize, models: impl IntoIterator<Item = u32>) -> ModelSet {
        assert!(width <= MAX_UNIVERSE);
        let mut models: Vec<u32> = models.into_iter().collect();
        debug_assert!(models.iter().all(|&m| m < (1u32 << width)));
        models.sort_unstable();
        models.dedup();
        ModelSet { width, models }
    }

    pub fn top(width: usize) -> ModelSet {
        ModelSet::new(width, 0..(1u32 << width))
    }

    pub fn bottom(width: usize) -> ModelSet {
        ModelSet { width, models: Vec::new() }
    }

    /// Models of a function given as a predicate on masks.
    pub fn from_fn(width: usize, f: impl Fn(u32) -> bool) -> ModelSet {
        ModelSet::new(width, (0..(1u32 << width)).filter(|&m| f(m)))
    }

    /// Models of the conjunction of the given positions.
    pub fn conj(width: usize, positions: &[usize]) -> ModelSet {
        let need = mask_of(positions);
        ModelSet::from_fn(width, |m| m & need == need)
    }

    /// Models of `head ← ∧body`.
    pub fn implication(width: usize, head: usize, body: &[usize]) -> ModelSet {
        let b = mask_of(body);
        ModelSet::from_fn(width, |m| m & b != b || m & (1 << head) != 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.width) - 1
    }

    pub fn models(&self) -> &[u32] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, m: u32) -> bool {
        self.models.binary_search(&m).is_ok()
    }

    pub fn is_positive(&self) -> bool {
        self.contains(self.full_mask())
    }

    /// Positive and closed under pairwise intersection.
    pub fn is_definite(&self) -> bool {
        self.is_positive() && self.is_intersection_closed()
    }

    fn is_intersection_closed(&self) -> bool {
        for (i, &a) in self.models.iter().enumerate() {
            for &b in &self.models[i + 1..] {
                if !self.contains(a & b) {
                    return false;
                }
            }
        }
        true
    }

    /// Definite and, with `Y` the intersection of all models,
    /// `Y ∪ (M \ M')` is a model for every pair of models.
    pub fn is_ge(&self) -> bool {
        if !self.is_definite() {
            return false;
        }
        let y = self.models.iter().fold(self.full_mask(), |acc, &m| acc & m);
        self.models
            .iter()
            .all(|&m| self.models.iter().all(|&n| self.contains(y | (m & !n))))
    }

    pub fn meet(&self, other: &ModelSet) -> ModelSet {
        assert_eq!(self.width, other.width);
        ModelSet {
            width: self.width,
            models: self.models.iter().copied().filter(|&m| other.contains(m)).collect(),
        }
    }

    /// `{M1 ∩ M2 | Mi ∈ mi}`. An empty operand (false) is the unit.
    pub fn join(&self, other: &ModelSet) -> ModelSet {
        assert_eq!(self.width, other.width);
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let mut out = BTreeSet::new();
        for &a in &self.models {
            for &b in &other.models {
                out.insert(a & b);
            }
        }
        ModelSet::new(self.width, out)
    }

    pub fn entails(&self, other: &ModelSet) -> bool {
        assert_eq!(self.width, other.width);
        self.models.iter().all(|&m| other.contains(m))
    }

    /// Models with position `x` forced to `value`, with `x` then left free.
    fn cofactor(&self, x: usize, value: bool) -> ModelSet {
        let bit = 1u32 << x;
        let kept = self.models.iter().filter(|&&m| (m & bit != 0) == value);
        ModelSet::new(self.width, kept.flat_map(|&m| [m & !bit, m | bit]))
    }

    /// `∃x.f = f[x↦true] ∨̇ f[x↦false]`, over the same universe with `x`
    /// unconstrained.
    pub fn project(&self, x: usize) -> ModelSet {
        let union: Vec<u32> = self
            .cofactor(x, true)
            .models
            .into_iter()
            .chain(self.cofactor(x, false).models)
            .collect();
        def_hull(self.width, &union)
    }

    /// Boolean existential quantification (plain union of cofactors).
    pub fn exists(&self, x: usize) -> ModelSet {
        let bit = 1u32 << x;
        ModelSet::new(self.width, self.models.iter().flat_map(|&m| [m & !bit, m | bit]))
    }

    /// `∃̄keep.f` by Boolean quantification of every other position.
    pub fn project_onto(&self, keep: &[usize]) -> ModelSet {
        let mut cur = self.clone();
        for x in 0..self.width {
            if !keep.contains(&x) {
                cur = cur.exists(x);
            }
        }
        cur
    }

    /// Restricts to the listed positions, in order, discarding the rest
    /// existentially. The result has width `positions.len()`.
    pub fn restrict(&self, positions: &[usize]) -> ModelSet {
        ModelSet::new(
            positions.len(),
            self.models.iter().map(|&m| {
                positions
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &p)| acc | (((m >> p) & 1) << i))
            }),
        )
    }

    pub fn coneg(&self) -> ModelSet {
        let full = self.full_mask();
        ModelSet::new(self.width, self.models.iter().map(|&m| full & !m))
    }

    /// Intersections of all nonempty subsets of the models.
    pub fn downward_closure_direct(&self) -> Result<ModelSet> {
        if !self.is_positive() {
            return Err(Error::NotPositive);
        }
        Ok(intersection_closure(self.width, &self.models))
    }

    /// The chain `f1 = f`, `f(i+1) = fi ⋎ fi` until stable. Returns the limit
    /// and the number of join steps taken.
    pub fn downward_closure_iterated(&self) -> Result<(ModelSet, usize)> {
        if !self.is_positive() {
            return Err(Error::NotPositive);
        }
        let mut cur = self.clone();
        let mut steps = 0;
        loop {
            let next = cur.join(&cur);
            if next == cur {
                return Ok((cur, steps));
            }
            cur = next;
            steps += 1;
        }
    }

    /// `↓f`, computed both ways; the two must coincide.
    pub fn downward_closure(&self) -> Result<ModelSet> {
        let direct = self.downward_closure_direct()?;
        let (iterated, _) = self.downward_closure_iterated()?;
        assert_eq!(direct, iterated, "closure constructions disagree");
        Ok(direct)
    }

    /// Strongest EPos function entailed by this one.
    pub fn ge_hull(&self) -> ModelSet {
        let full = self.full_mask();
        let mut out = ModelSet::top(self.width);
        if self.is_empty() {
            return ModelSet::new(self.width, [full]);
        }
        for i in 0..self.width {
            if self.models.iter().all(|&m| m & (1 << i) != 0) {
                out = out.meet(&ModelSet::conj(self.width, &[i]));
            }
            for j in i + 1..self.width {
                if self.models.iter().all(|&m| ((m >> i) & 1) == ((m >> j) & 1)) {
                    out = out.meet(&ModelSet::from_fn(self.width, |m| ((m >> i) & 1) == ((m >> j) & 1)));
                }
            }
        }
        out
    }
}

fn mask_of(positions: &[usize]) -> u32 {
    positions.iter().fold(0u32, |acc, &p| acc | (1 << p))
}

fn intersection_closure(width: usize, seed: &[u32]) -> ModelSet {
    let mut set: BTreeSet<u32> = seed.iter().copied().collect();
    let mut frontier: Vec<u32> = set.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        let current: Vec<u32> = set.iter().copied().collect();
        for b in current {
            if set.insert(a & b) {
                frontier.push(a & b);
            }
        }
    }
    ModelSet::new(width, set)
}

/// Strongest definite function satisfied by every mask in `seed`.
pub fn def_hull(width: usize, seed: &[u32]) -> ModelSet {
    let mut with_top = seed.to_vec();
    with_top.push((1u32 << width) - 1);
    intersection_closure(width, &with_top)
}

/// Every definite function over `width` variables (`width ≤ 4`).
pub fn all_definite(width: usize) -> Vec<ModelSet> {
    assert!(width <= 4, "enumeration only practical up to 4 variables");
    let points = 1usize << width;
    let full = (1u32 << width) - 1;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << points) {
        if bits & (1 << full) == 0 {
            continue;
        }
        let m = ModelSet::new(width, (0..points as u32).filter(|&p| bits & (1 << p) != 0));
        if m.is_intersection_closed() {
            out.push(m);
        }
    }
    out
}

/// Every positive function over `width` variables (`width ≤ 4`).
pub fn all_positive(width: usize) -> Vec<ModelSet> {
    assert!(width <= 4);
    let points = 1usize << width;
    let full = (1u32 << width) - 1;
    (0u64..(1u64 << points))
        .filter(|bits| bits & (1 << full) != 0)
        .map(|bits| ModelSet::new(width, (0..points as u32).filter(|&p| bits & (1 << p) != 0)))
        .collect()
}

/// Models over `universe` of the formula together with the store facts of
/// its variables. Variables of `f` outside the universe are quantified away.
///
/// Aliased or ground universe positions are honoured: positions in one
/// class take equal values, ground positions are always true.
pub fn models_over(store: &VarStore, f: &Formula, universe: &[Var]) -> Result<ModelSet> {
    if universe.len() > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(universe.len()));
    }
    let mut local: HashMap<Var, usize> = HashMap::new();
    let index = |v: Var, local: &mut HashMap<Var, usize>| -> Option<usize> {
        let r = store.find(v);
        if store.is_ground(r) {
            return None;
        }
        let n = local.len();
        Some(*local.entry(r).or_insert(n))
    };
    let positions: Vec<Option<usize>> = universe.iter().map(|&v| index(v, &mut local)).collect();
    let mut units: u64 = 0;
    let mut clauses: Vec<(usize, u64)> = Vec::new();
    for c in f.iter() {
        match c.resolve(store) {
            Resolved::Trivial => {}
            Resolved::Unit(h) => {
                let h = index(h, &mut local).expect("unit head is not ground");
                units |= 1 << h;
            }
            Resolved::Clause(c) => {
                let h = index(c.head(), &mut local).expect("resolved head");
                let body = c.body().iter().fold(0u64, |acc, &b| acc | (1 << index(b, &mut local).expect("resolved body")));
                clauses.push((h, body));
            }
        }
    }
    let k = local.len();
    if k > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(k));
    }
    let mut out = BTreeSet::new();
    for a in 0u64..(1u64 << k) {
        if a & units != units {
            continue;
        }
        if clauses.iter().all(|&(h, b)| a & b != b || a & (1 << h) != 0) {
            let m = positions.iter().enumerate().fold(0u32, |acc, (i, p)| match p {
                None => acc | (1 << i),
                Some(p) => acc | ((((a >> p) & 1) as u32) << i),
            });
            out.insert(m);
        }
    }
    Ok(ModelSet::new(universe.len(), out))
}

/// `model_X(f)`; every variable of `f` must lie in the universe.
pub fn models_of(store: &VarStore, f: &Formula, universe: &[Var]) -> Result<ModelSet> {
    let within = store.resolve_set(universe.iter().copied());
    if !f.vars(store).is_subset(&within) {
        return Err(Error::OutsideUniverse);
    }
    models_over(store, f, universe)
}

/// A clausal formula over `vars` denoting the definite function `m`.
///
/// For each set `Z` of positions the closure `cl(Z)`, the intersection of the
/// models containing `Z`, yields clauses `y ← Z` for `y ∈ cl(Z) \ Z`. Units
/// ground their variable in the store instead.
pub fn formula_of(store: &mut VarStore, m: &ModelSet, vars: &[Var]) -> Formula {
    assert!(m.is_definite(), "not a definite function: {m:?}");
    assert_eq!(m.width(), vars.len());
    let width = m.width();
    let mut b = FormulaBuilder::new();
    for z in 0u32..(1u32 << width) {
        let cl = m
            .models()
            .iter()
            .filter(|&&model| model & z == z)
            .fold(m.full_mask(), |acc, &model| acc & model);
        let body: Vec<Var> = (0..width).filter(|&i| z & (1 << i) != 0).map(|i| vars[i]).collect();
        for y in 0..width {
            if cl & !z & (1 << y) != 0 {
                b.add(store, vars[y], &body);
            }
        }
    }
    b.finish()
}
