//! Call and answer tables with conditional update.

use crate::bool_core::{project_onto, remove_redundant, VarStore};
use crate::domain::Domain;
use crate::epos::{alpha_epos, epos_entails, epos_join};
use crate::gep::{freeze, gep_entails, gep_join, normalize_true, thaw, FrozenPattern, Pattern, Storage};
use crate::stats::Counters;

use super::options::Switches;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Call,
    Answ,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Call => "call",
            Kind::Answ => "answ",
        }
    }
}

/// Patterns are stored frozen, so every read is a fresh renaming.
#[derive(Clone, Debug)]
pub struct FactStore {
    pub domain: Domain,
    pub switches: Switches,
    pub calls: Vec<Option<FrozenPattern>>,
    pub answers: Vec<Option<FrozenPattern>>,
    /// Stores per predicate, `[call, answ]`.
    pub updates: Vec<[u32; 2]>,
    pub counters: Counters,
}

impl FactStore {
    pub fn new(npreds: usize, domain: Domain, switches: Switches) -> FactStore {
        FactStore {
            domain,
            switches,
            calls: vec![None; npreds],
            answers: vec![None; npreds],
            updates: vec![[0, 0]; npreds],
            counters: Counters::default(),
        }
    }

    pub fn store(&self) -> VarStore {
        VarStore::with_filtered_projection(self.switches.filtered_projection)
    }

    pub fn table(&self, kind: Kind) -> &[Option<FrozenPattern>] {
        match kind {
            Kind::Call => &self.calls,
            Kind::Answ => &self.answers,
        }
    }

    fn slot(&mut self, kind: Kind, pred: usize) -> &mut Option<FrozenPattern> {
        match kind {
            Kind::Call => &mut self.calls[pred],
            Kind::Answ => &mut self.answers[pred],
        }
    }

    /// A renamed copy of the stored pattern, if any.
    pub fn read(&mut self, kind: Kind, pred: usize, store: &mut VarStore) -> Option<Pattern> {
        let fp = self.table(kind)[pred].as_ref()?;
        store.counters.rename += 1;
        Some(thaw(store, fp))
    }

    /// Copies a pattern whose formula is already over its arguments into
    /// the table representation selected by the domain and switches.
    fn settle(&self, store: &mut VarStore, p: &Pattern) -> FrozenPattern {
        let p = match self.domain {
            Domain::EPos => alpha_epos(store, &p.formula, &p.args),
            Domain::DefGep if self.switches.true_factorisation => normalize_true(store, p),
            Domain::DefGep if self.switches.redundancy => {
                Pattern::new(p.args.clone(), remove_redundant(store, &p.formula))
            }
            Domain::DefGep => p.clone(),
        };
        // EPos content lives entirely in the atom, so `g` does not apply.
        let storage = if self.switches.factorised || self.domain == Domain::EPos {
            Storage::Factorised
        } else {
            Storage::Flat
        };
        freeze(store, &p, storage)
    }

    fn entails(&self, store: &mut VarStore, a: &Pattern, b: &Pattern) -> bool {
        store.counters.equiv += 1;
        match self.domain {
            Domain::DefGep => gep_entails(store, a, b, self.switches.entail_match),
            Domain::EPos => epos_entails(store, a, b),
        }
    }

    /// Records `pat` (whose formula may mention other variables of `store`)
    /// in the table. Returns true when the entry changed: it was absent, or
    /// `pat` does not entail it and it was replaced by the join.
    pub fn cond_assert(&mut self, kind: Kind, pred: usize, store: &mut VarStore, pat: &Pattern) -> bool {
        let pat = match self.domain {
            Domain::EPos => alpha_epos(store, &pat.formula, &pat.args),
            Domain::DefGep => pat.clone(),
        };
        let Some(old) = self.read(kind, pred, store) else {
            let formula = project_onto(store, &pat.formula, &pat.args);
            let fp = self.settle(store, &Pattern::new(pat.args.clone(), formula));
            *self.slot(kind, pred) = Some(fp);
            self.updates[pred][kind as usize] += 1;
            return true;
        };
        if self.entails(store, &pat, &old) {
            return false;
        }
        let pat = Pattern::new(pat.args.clone(), project_onto(store, &pat.formula, &pat.args));
        store.counters.join += 1;
        let joined = match self.domain {
            Domain::DefGep => gep_join(store, &pat, &old),
            Domain::EPos => epos_join(store, &pat, &old),
        }
        .expect("table arity matches predicate arity");
        if !self.entails(store, &joined, &pat) {
            store.counters.join_diff += 1;
        }
        let fp = self.settle(store, &joined);
        *self.slot(kind, pred) = Some(fp);
        self.updates[pred][kind as usize] += 1;
        true
    }
}
