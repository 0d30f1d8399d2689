//! Finite Kripke semantics and filtration workbench.
//!
//! The crate evaluates modal formulas over finite multimodal models, builds
//! and verifies filtrations (including the transfer construction for the
//! transitive closure modality and fusion filtrations), decides validity by
//! bounded search, checks first-order preservation under strong onto
//! homomorphisms, and checks Hilbert-style proofs.

pub mod decision;
pub mod error;
pub mod filtration;
pub mod hilbert;
pub mod limits;
pub mod mfp;
pub mod sample;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use limits::Limits;
