//! The MFP first-order fragment, strong onto homomorphisms and preservation
//! along minimal filtrations.

mod formula;
mod generate;
mod hom;

pub use formula::{
    fo_eval, fo_sentence_holds, mfp_member, parse_fo, resolve_symbol, Assignment, FOFormula,
};
pub use generate::{
    correspondence_fixtures, density_fo, reflexivity_fo, symmetry_fo, transitivity_fo, MfpGenerator,
};
pub use hom::{filtration_map, is_strong_onto_hom, preservation_check, HomViolation, Preservation, WorldMap};
