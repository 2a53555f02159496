//! Goal-dependent fixpoint engine over call and answer tables.

mod facts;
mod options;
mod solve;

pub use facts::{FactStore, Kind};
pub use options::{Options, Strategy, Switches};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bool_core::VarStore;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::frontend::{AbstractProgram, EntrySpec, Mode};
use crate::gep::{gep_entails, thaw, FrozenPattern};
use crate::oracle::{models_over, ModelSet};
use crate::stats::Counters;

use solve::Solver;

/// Stack size for the solver thread; eager strategies recurse.
const SOLVER_STACK: usize = 256 << 20;

/// Fixpoint tables and tallies of one run.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub options: Options,
    pub calls: Vec<Option<FrozenPattern>>,
    pub answers: Vec<Option<FrozenPattern>>,
    /// Stores per predicate, `[call, answ]`.
    pub updates: Vec<[u32; 2]>,
    pub counters: Counters,
    /// Clause evaluations started.
    pub evaluations: u64,
}

pub fn analyze(ap: &AbstractProgram, entries: &[EntrySpec], options: Options) -> Result<Analysis> {
    let mut seeds = Vec::with_capacity(entries.len());
    for e in entries {
        let p = ap.find(&e.pred, e.modes.len()).ok_or_else(|| Error::UnknownEntry(e.to_string()))?;
        seeds.push((p, e.modes.iter().map(|m| *m == Mode::Ground).collect::<Vec<bool>>()));
    }
    let fs = FactStore::new(ap.preds.len(), options.domain, options.switches);
    let (fs, evaluations) = std::thread::scope(|scope| {
        std::thread::Builder::new()
            .name("solver".into())
            .stack_size(SOLVER_STACK)
            .spawn_scoped(scope, || {
                let mut s = Solver::new(ap, options.strategy, fs);
                s.run(seeds);
                (s.fs, s.evaluations)
            })
            .expect("spawn solver thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    });
    log::debug!("{} {}: {} clause evaluations", options.strategy, options.switches, evaluations);
    Ok(Analysis {
        options,
        calls: fs.calls,
        answers: fs.answers,
        updates: fs.updates,
        counters: fs.counters,
        evaluations,
    })
}

/// Mutual entailment of two stored patterns.
pub fn frozen_equiv(a: &FrozenPattern, b: &FrozenPattern) -> bool {
    if a.arity() != b.arity() {
        return false;
    }
    let mut s = VarStore::new();
    let (pa, pb) = (thaw(&mut s, a), thaw(&mut s, b));
    gep_entails(&mut s, &pa, &pb, true) && gep_entails(&mut s, &pb, &pa, true)
}

/// Models of a stored pattern over its argument positions.
pub fn frozen_models(fp: &FrozenPattern) -> Result<ModelSet> {
    let mut s = VarStore::new();
    let p = thaw(&mut s, fp);
    models_over(&s, &p.formula, &p.args)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Updates {
    pub total: u64,
    pub per_key: BTreeMap<String, u32>,
}

/// Summary of one run, serialised as the JSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub program: String,
    pub domain: Domain,
    pub strategy: Strategy,
    pub switches: Switches,
    pub entries: Vec<String>,
    pub updates: Updates,
    pub counters: Counters,
    /// Entry `i` counts the table keys stored exactly `i` times.
    pub chain_histogram: Vec<u64>,
    pub ground_args: usize,
    pub call_patterns: Vec<String>,
    pub answer_patterns: Vec<String>,
    pub warnings: Vec<String>,
}

impl Analysis {
    pub fn table(&self, kind: Kind) -> &[Option<FrozenPattern>] {
        match kind {
            Kind::Call => &self.calls,
            Kind::Answ => &self.answers,
        }
    }

    /// Argument positions ground in the answer patterns of source
    /// predicates.
    pub fn ground_args(&self, ap: &AbstractProgram) -> usize {
        self.answers
            .iter()
            .zip(&ap.preds)
            .filter(|(_, info)| !info.aux)
            .filter_map(|(a, _)| a.as_ref())
            .map(|a| a.ground_args())
            .sum()
    }

    pub fn total_updates(&self) -> u64 {
        self.updates.iter().map(|u| (u[0] + u[1]) as u64).sum()
    }

    pub fn max_chain(&self) -> u32 {
        self.updates.iter().flat_map(|u| u.iter().copied()).max().unwrap_or(0)
    }

    pub fn chain_histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.max_chain() as usize + 1];
        for u in self.updates.iter().flat_map(|u| u.iter()) {
            h[*u as usize] += 1;
        }
        h
    }

    /// Same reached keys with mutually entailing patterns.
    pub fn equivalent(&self, other: &Analysis) -> bool {
        self.differences(other).is_empty()
    }

    /// Keys whose entries differ, as `(kind, predicate index)`.
    pub fn differences(&self, other: &Analysis) -> Vec<(Kind, usize)> {
        let mut out = Vec::new();
        for kind in [Kind::Call, Kind::Answ] {
            for (p, (a, b)) in self.table(kind).iter().zip(other.table(kind)).enumerate() {
                let same = match (a, b) {
                    (None, None) => true,
                    (Some(a), Some(b)) => frozen_equiv(a, b),
                    _ => false,
                };
                if !same {
                    out.push((kind, p));
                }
            }
        }
        out
    }

    pub fn report(&self, program: &str, ap: &AbstractProgram, entries: &[EntrySpec]) -> Report {
        let mut per_key = BTreeMap::new();
        let mut call_patterns = Vec::new();
        let mut answer_patterns = Vec::new();
        for (p, info) in ap.preds.iter().enumerate() {
            for kind in [Kind::Call, Kind::Answ] {
                let n = self.updates[p][kind as usize];
                if n > 0 {
                    per_key.insert(format!("{} {}", kind.name(), info.key()), n);
                }
            }
            if let Some(c) = &self.calls[p] {
                call_patterns.push(c.render(&info.name));
            }
            if let Some(a) = &self.answers[p] {
                answer_patterns.push(a.render(&info.name));
            }
        }
        Report {
            program: program.to_string(),
            domain: self.options.domain,
            strategy: self.options.strategy,
            switches: self.options.switches,
            entries: entries.iter().map(|e| e.to_string()).collect(),
            updates: Updates { total: self.total_updates(), per_key },
            counters: self.counters,
            chain_histogram: self.chain_histogram(),
            ground_args: self.ground_args(ap),
            call_patterns,
            answer_patterns,
            warnings: ap.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{load, parse_entry, AbstractOptions};

    const APPEND: &str = "app([],Y,Y).\napp([X|Xs],Y,[X|Zs]) :- app(Xs,Y,Zs).";

    fn run(src: &str, entry: &str, options: Options) -> (AbstractProgram, Analysis) {
        let l = load(src, AbstractOptions::default()).unwrap();
        let a = analyze(&l.program, &[parse_entry(entry).unwrap()], options).unwrap();
        (l.program, a)
    }

    #[test]
    fn single_fact() {
        let (_, a) = run("p(a).", "p(any)", Options::default());
        assert_eq!(a.total_updates(), 2);
        assert_eq!(a.answers[0].as_ref().unwrap().render("p"), "p(g).");
    }

    #[test]
    fn append_answer() {
        for strategy in Strategy::ALL {
            let (_, a) = run(APPEND, "app(any,any,any)", Options { strategy, ..Options::default() });
            let m = frozen_models(a.answers[0].as_ref().unwrap()).unwrap();
            let want = ModelSet::implication(3, 2, &[0, 1])
                .meet(&ModelSet::implication(3, 0, &[2]))
                .meet(&ModelSet::implication(3, 1, &[2]));
            assert_eq!(m, want, "{strategy}");
        }
    }

    #[test]
    fn append_ground_inputs() {
        let (ap, a) = run(APPEND, "app(g,g,any)", Options::default());
        assert_eq!(a.answers[0].as_ref().unwrap().render("app"), "app(g, g, g).");
        assert_eq!(a.ground_args(&ap), 3);
    }

    #[test]
    fn empty_body_answer_is_the_call() {
        let (_, a) = run("p(X, Y).", "p(g, any)", Options::default());
        assert_eq!(a.answers[0].as_ref().unwrap().render("p"), "p(g, X1).");
    }

    #[test]
    fn report_shape() {
        let (ap, a) = run(APPEND, "app(any,any,any)", Options::default());
        let r = a.report("append.pl", &ap, &[parse_entry("app(any,any,any)").unwrap()]);
        let v = serde_json::to_value(&r).unwrap();
        for k in ["program", "domain", "strategy", "switches", "updates", "counters", "chainHistogram", "groundArgs", "callPatterns", "answerPatterns"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["domain"], "def-gep");
        assert_eq!(v["switches"], "egpr");
        assert!(v["counters"].get("projFilt").is_some());
        assert!(v["updates"].get("perKey").is_some());
    }
}
