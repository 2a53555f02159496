use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which abstraction call and answer tables are held in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// Definite functions in factorised form.
    #[default]
    #[serde(rename = "def-gep")]
    DefGep,
    /// Groundness and equivalences only.
    #[serde(rename = "epos")]
    EPos,
}

impl Domain {
    pub const ALL: [Domain; 2] = [Domain::DefGep, Domain::EPos];

    pub fn name(self) -> &'static str {
        match self {
            Domain::DefGep => "def-gep",
            Domain::EPos => "epos",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "def-gep" | "def" => Ok(Domain::DefGep),
            "epos" => Ok(Domain::EPos),
            _ => Err(format!("unknown domain '{s}' (expected def-gep or epos)")),
        }
    }
}
