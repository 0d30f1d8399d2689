//! Filtrations: induced equivalences, filtered relations, recipes,
//! verification against the definition, the transitive-closure transfer,
//! fusion filtration and differentiation.

mod differentiate;
mod filtered;
mod induction;
mod partition;
mod relations;
mod report;
mod transfer;

pub use differentiate::{differentiate, differentiate_filtration, Differentiation};
pub use filtered::{
    build_filtration, filtrate_with, verify_filtration, verify_filtration_lemma, Construction,
    FilteredModel,
};
pub use induction::check_a3_min;
pub use partition::{equivalence_through, induced_equivalence, Partition, Provenance};
pub use relations::{max_filtered_relation, min_filtered_relation, respect_violation};
pub use report::{Check, VerificationReport};
pub use transfer::{fusion_strict_filtration, transclosure_filtration};

pub use crate::semantics::Recipe;
