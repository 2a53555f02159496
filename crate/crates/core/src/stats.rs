use serde::{Deserialize, Serialize};

/// Tallies of abstract domain operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counters {
    pub meet: u64,
    pub join: u64,
    pub join_diff: u64,
    pub equiv: u64,
    pub project: u64,
    pub rename: u64,
    /// Variable eliminations that skipped compaction.
    pub proj_filt: u64,
    /// Variable eliminations that ran compaction.
    pub proj_elim: u64,
}

impl Counters {
    pub fn absorb(&mut self, other: &Counters) {
        self.meet += other.meet;
        self.join += other.join;
        self.join_diff += other.join_diff;
        self.equiv += other.equiv;
        self.project += other.project;
        self.rename += other.rename;
        self.proj_filt += other.proj_filt;
        self.proj_elim += other.proj_elim;
    }

    pub fn total(&self) -> u64 {
        self.meet + self.join + self.equiv + self.project + self.rename
    }
}
