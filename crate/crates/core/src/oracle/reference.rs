//! Semi-naive reference analyzer.
//!
//! Call and answer tables are explicit model sets over predicate arguments.
//! Each clause is evaluated by enumerating all assignments to its variables,
//! so nothing here shares code with the clausal engine beyond the abstract
//! program itself.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::frontend::{AbstractProgram, EntrySpec, Item, Mode};

use super::{def_hull, ModelSet, MAX_UNIVERSE};

/// Fixpoint tables; an empty model set means the table was never reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefTables {
    pub calls: Vec<ModelSet>,
    pub answers: Vec<ModelSet>,
    /// Rounds until no table changed.
    pub rounds: usize,
}

impl RefTables {
    /// Arguments ground in every answer, over non-auxiliary predicates.
    pub fn ground_args(&self, ap: &AbstractProgram) -> usize {
        let mut n = 0;
        for (p, info) in ap.preds.iter().enumerate() {
            let a = &self.answers[p];
            if info.aux || a.is_empty() {
                continue;
            }
            n += (0..info.arity).filter(|&i| a.models().iter().all(|&m| m & (1 << i) != 0)).count();
        }
        n
    }
}

/// Mask of the argument tuple `args` read off a clause assignment.
fn tuple(m: u32, args: &[u32]) -> u32 {
    args.iter().enumerate().fold(0, |acc, (i, &v)| acc | (((m >> v) & 1) << i))
}

/// Least upper bound of a table with new tuples.
fn widen_table(domain: Domain, old: &ModelSet, tuples: &[u32]) -> ModelSet {
    let mut seed: Vec<u32> = old.models().to_vec();
    seed.extend_from_slice(tuples);
    let hull = def_hull(old.width(), &seed);
    match domain {
        Domain::DefGep => hull,
        Domain::EPos => hull.ge_hull(),
    }
}

pub fn reference_analysis(ap: &AbstractProgram, entries: &[EntrySpec], domain: Domain) -> Result<RefTables> {
    for c in &ap.clauses {
        if c.nvars as usize > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(c.nvars as usize));
        }
    }
    let arity = |p: usize| ap.preds[p].arity;
    let mut calls: Vec<ModelSet> = (0..ap.preds.len()).map(|p| ModelSet::bottom(arity(p))).collect();
    let mut answers = calls.clone();
    for e in entries {
        let p = ap.find(&e.pred, e.modes.len()).ok_or_else(|| Error::UnknownEntry(e.to_string()))?;
        let ground: Vec<usize> = (0..e.modes.len()).filter(|&i| e.modes[i] == Mode::Ground).collect();
        let seed = ModelSet::conj(arity(p), &ground);
        calls[p] = widen_table(domain, &calls[p], seed.models());
    }

    // Predicates whose call or answer table changed in the previous round.
    let mut call_dirty = vec![true; ap.preds.len()];
    let mut answ_dirty = vec![true; ap.preds.len()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut next_call = vec![false; ap.preds.len()];
        let mut next_answ = vec![false; ap.preds.len()];
        for c in &ap.clauses {
            let affected = call_dirty[c.pred]
                || c.body.iter().any(|it| matches!(it, Item::Call { pred, .. } if answ_dirty[*pred]));
            if !affected || calls[c.pred].is_empty() {
                continue;
            }
            let head_call = &calls[c.pred];
            let mut cur: Vec<u32> =
                (0u32..(1u32 << c.nvars)).filter(|&m| head_call.contains(tuple(m, &c.head))).collect();
            for it in &c.body {
                if cur.is_empty() {
                    break;
                }
                match it {
                    Item::Iff { x, vars } => {
                        let b = vars.iter().fold(0u32, |acc, &v| acc | (1 << v));
                        cur.retain(|&m| ((m >> x) & 1 == 1) == (m & b == b));
                    }
                    Item::Ground(vs) => {
                        let b = vs.iter().fold(0u32, |acc, &v| acc | (1 << v));
                        cur.retain(|&m| m & b == b);
                    }
                    Item::Fail => cur.clear(),
                    Item::Call { pred, args } | Item::Probe { pred, args } => {
                        let image: Vec<u32> = cur.iter().map(|&m| tuple(m, args)).collect();
                        let widened = widen_table(domain, &calls[*pred], &image);
                        if widened != calls[*pred] {
                            calls[*pred] = widened;
                            next_call[*pred] = true;
                        }
                        if matches!(it, Item::Call { .. }) {
                            let answ = &answers[*pred];
                            cur.retain(|&m| answ.contains(tuple(m, args)));
                        }
                    }
                }
            }
            if cur.is_empty() {
                continue;
            }
            let image: Vec<u32> = cur.iter().map(|&m| tuple(m, &c.head)).collect();
            let widened = widen_table(domain, &answers[c.pred], &image);
            if widened != answers[c.pred] {
                answers[c.pred] = widened;
                next_answ[c.pred] = true;
            }
        }
        if !next_call.iter().any(|&b| b) && !next_answ.iter().any(|&b| b) {
            break;
        }
        call_dirty = next_call;
        answ_dirty = next_answ;
    }
    Ok(RefTables { calls, answers, rounds })
}
