//! Modal formulas over an index algebra: AST, parsing and printing,
//! subformula closure, substitutions and axiom schemas.

mod axioms;
mod formula;
mod parse;
mod set;
mod subst;

pub use axioms::{
    composition_axiom, convergence_axiom, density_axiom, distribution_axiom,
    instantiate_segerberg, pdl_axioms, reflexivity_axiom, symmetry_axiom, transitivity_axiom,
    union_axiom,
};
pub use formula::{Formula, IndexTerm};
pub use parse::{parse_formula, parse_index, Signature};
pub use set::{sub_closure, subformulas, FormulaSet};
pub use subst::{apply_substitution, fresh_surrogates, Substitution, Surrogates};
