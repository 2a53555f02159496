//! Goal-dependent groundness analysis of definite logic programs.
//!
//! Grounding dependencies are tracked with definite Boolean functions held
//! as bags of definite clauses over a union-find variable store.

pub mod bool_core;
pub mod domain;
pub mod engine;
pub mod epos;
pub mod error;
pub mod frontend;
pub mod gep;
pub mod graphs;
pub mod oracle;
pub mod stats;

pub use domain::Domain;
pub use error::{Error, Result};
