use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::Domain;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Ordered induced magic: a redo list with calls before answers.
    #[default]
    Ord,
    /// Eager induced magic: every update is propagated at once, recursively.
    Eim,
    /// SCC magic: components of the magic graph in topological order.
    Scm,
    /// Bourdoncle magic: the recursive strategy on the magic graph.
    Bom,
    /// Ordered induced magic with answers ranked by call-graph component.
    Scc,
    /// Dynamic dependencies with a timestamp-ordered worklist.
    Dyd,
}

impl Strategy {
    pub const ALL: [Strategy; 6] =
        [Strategy::Ord, Strategy::Eim, Strategy::Scm, Strategy::Bom, Strategy::Scc, Strategy::Dyd];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ord => "ord",
            Strategy::Eim => "eim",
            Strategy::Scm => "scm",
            Strategy::Bom => "bom",
            Strategy::Scc => "scc",
            Strategy::Dyd => "dyd",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown strategy '{s}' (expected one of ord, eim, scm, bom, scc, dyd)"))
    }
}

/// Optimisation switches, written as a string of letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Switches {
    /// `e`: try the matching case of the entailment test before the msg case.
    pub entail_match: bool,
    /// `g`: keep groundness and aliasing in the atom.
    pub factorised: bool,
    /// `p`: compact only when elimination grows a formula.
    pub filtered_projection: bool,
    /// `r`: remove redundant clauses from stored patterns.
    pub redundancy: bool,
    /// `t`: move every entailed groundness and equivalence into the atom.
    pub true_factorisation: bool,
}

impl Switches {
    /// The ten combinations compared in the optimisation study.
    pub const SWEEP: [&'static str; 10] = ["egpr", "egprt", "egp", "epr", "gpr", "egr", "pr", "er", "gr", "r"];

    pub const NONE: Switches = Switches {
        entail_match: false,
        factorised: false,
        filtered_projection: false,
        redundancy: false,
        true_factorisation: false,
    };

    pub fn sweep() -> Vec<Switches> {
        Self::SWEEP.iter().map(|s| s.parse().unwrap()).collect()
    }
}

impl Default for Switches {
    fn default() -> Self {
        "egpr".parse().unwrap()
    }
}

impl fmt::Display for Switches {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags = [
            (self.entail_match, 'e'),
            (self.factorised, 'g'),
            (self.filtered_projection, 'p'),
            (self.redundancy, 'r'),
            (self.true_factorisation, 't'),
        ];
        let s: String = flags.iter().filter(|(on, _)| *on).map(|(_, c)| *c).collect();
        if s.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&s)
        }
    }
}

impl FromStr for Switches {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Switches::NONE;
        if s == "-" {
            return Ok(out);
        }
        for c in s.chars() {
            let flag = match c {
                'e' => &mut out.entail_match,
                'g' => &mut out.factorised,
                'p' => &mut out.filtered_projection,
                'r' => &mut out.redundancy,
                't' => &mut out.true_factorisation,
                _ => return Err(format!("unknown switch '{c}' in '{s}' (letters e, g, p, r, t)")),
            };
            if *flag {
                return Err(format!("switch '{c}' repeated in '{s}'"));
            }
            *flag = true;
        }
        Ok(out)
    }
}

impl Serialize for Switches {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Switches {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Options {
    pub domain: Domain,
    pub strategy: Strategy,
    pub switches: Switches,
}
