//! Prolog-subset reader: parsing, normalization to flat definite clauses,
//! and abstraction to Boolean constraints.

pub mod abstraction;
pub mod builtins;
pub mod lexer;
pub mod normalize;
pub mod ops;
pub mod parser;
pub mod term;

pub use abstraction::{abstract_program, AbstractClause, AbstractOptions, AbstractProgram, Item, PredId, PredInfo};
pub use normalize::{normalize, Goal, NormClause, NormProgram};
pub use parser::{parse, parse_term, SourceClause, SourceProgram};
pub use term::Term;

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Ground,
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntrySpec {
    pub pred: String,
    pub modes: Vec<Mode>,
}

impl fmt::Display for EntrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.modes.is_empty() {
            let m: Vec<&str> = self
                .modes
                .iter()
                .map(|m| if *m == Mode::Ground { "g" } else { "any" })
                .collect();
            write!(f, "({})", m.join(","))?;
        }
        Ok(())
    }
}

fn entry_from_term(t: &Term) -> Result<EntrySpec> {
    let bad = || Error::MalformedEntry(t.to_string());
    let (name, _) = t.functor().ok_or_else(bad)?;
    let modes = t
        .args()
        .iter()
        .map(|a| match a {
            Term::Atom(m) if m == "g" => Ok(Mode::Ground),
            Term::Atom(m) if m == "any" => Ok(Mode::Any),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntrySpec { pred: name.to_string(), modes })
}

/// `p(g, any)` as written on a command line.
pub fn parse_entry(text: &str) -> Result<EntrySpec> {
    let t = parse_term(text).map_err(|_| Error::MalformedEntry(text.to_string()))?;
    entry_from_term(&t)
}

/// Entries declared by `:- entry(...)` directives, in file order.
pub fn read_entries(sp: &SourceProgram) -> Result<Vec<EntrySpec>> {
    let mut out = Vec::new();
    for (d, _) in &sp.directives {
        if let Term::Compound(n, args) = d {
            if n == "entry" {
                if args.len() != 1 {
                    return Err(Error::MalformedEntry(d.to_string()));
                }
                out.push(entry_from_term(&args[0])?);
            }
        }
    }
    Ok(out)
}

/// Every source predicate with unconstrained arguments.
pub fn default_entries(ap: &AbstractProgram) -> Vec<EntrySpec> {
    ap.preds
        .iter()
        .filter(|p| !p.aux)
        .map(|p| EntrySpec { pred: p.name.clone(), modes: vec![Mode::Any; p.arity] })
        .collect()
}

/// A program read and abstracted, with the entries that drive it.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub source: SourceProgram,
    pub program: AbstractProgram,
    pub entries: Vec<EntrySpec>,
}

pub fn load(text: &str, opts: AbstractOptions) -> Result<Loaded> {
    let source = parse(text)?;
    let program = abstract_program(&normalize(&source), opts);
    let mut entries = read_entries(&source)?;
    if entries.is_empty() {
        entries = default_entries(&program);
    }
    for e in &entries {
        if program.find(&e.pred, e.modes.len()).is_none() {
            return Err(Error::UnknownEntry(e.to_string()));
        }
    }
    Ok(Loaded { source, program, entries })
}
