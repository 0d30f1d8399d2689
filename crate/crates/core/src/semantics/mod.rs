//! Finite frames and models: relation algebra, truth, frame validity,
//! ⊕/♯-expansions, fusion, exhaustive enumeration and logic descriptors.

mod eval;
mod expand;
mod frame;
mod json;
mod logic;
mod relation;
mod segerberg;

pub use eval::{frame_valid, frame_valid_all, Compiled, FrameValidity};
pub use expand::{
    enumerate_frames, expand_plus, expand_sharp, frame_code_bits, frame_from_code, fuse_frames,
    fuse_models, iterate_sharp, sharp_alphabet, sharp_alphabet_level,
};
pub use frame::{box_extension, model_valid, relation_of, truth, Frame, Model, Valuation};
pub use json::{
    frame_from_json, frame_to_json, model_from_json, model_to_json, parse_model, ModelDoc,
};
pub use logic::{BaseLogic, LogicSpec, Recipe};
pub use segerberg::{segerberg_table, Claim, SegerbergRow, SegerbergTable};
pub use relation::{check_convergence, transitive_closure, Relation, WorldSet, MAX_WORLDS};
