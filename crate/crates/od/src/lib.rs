//! Ordinal diagrams for Pi_N-reflection.
//!
//! The crate provides the term algebra of `Od(Pi_N)`, coefficient sets,
//! the validity predicate with its Q-part conditions, a total comparison,
//! rope-driven Q-part synthesis, bounded enumeration with an independent
//! oracle, a text notation, and a batch command-line front end.

pub mod chain;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod ksets;
pub mod order;
pub mod qpart;
pub mod suite;
pub mod term;
pub mod textio;
pub mod validity;

pub use error::{OdError, Result};
pub use term::Term;
