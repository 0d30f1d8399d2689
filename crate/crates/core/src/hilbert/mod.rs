//! Hilbert-style proof checking for normal modal logics and their
//! transitive-closure extensions.

mod check;
pub mod corpus;
mod script;
mod spot;

pub use check::{check_proof, check_proof_with, expand_rboxplus, is_tautology, LineVerdict, ProofVerdict};
pub use corpus::ProofBuilder;
pub use script::{parse_proof, Justification, ProofLine, ProofScript};
pub use spot::{mutations, soundness_spotcheck};
