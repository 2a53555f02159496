//! Definite Boolean functions in clausal form.

pub mod entail;
pub mod formula;
pub mod join;
pub mod project;
pub mod store;

pub use entail::{entails, entails_clause, equiv, remove_redundant, Entailer};
pub use formula::{rename_apart, Clause, Formula, FormulaBuilder, Renaming, Resolved};
pub use join::{join_formula, join_positional};
pub use project::{project_onto, project_out};
pub use store::{Var, VarSet, VarStore};
