use super::partition::equivalence_through;
use super::relations::min_filtered_relation;
use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semantics::{frame_valid, Frame, FrameValidity, Model};
use crate::syntax::{instantiate_segerberg, FormulaSet, IndexTerm};

/// For a model with `S = R⁺`, checks on the minimal filtration through `Φ`
/// that `S^min ⊆ (R^min)⁺` and that the minimal filtrated frame validates
/// the induction axiom.
pub fn check_a3_min(model: &Model, phi: &FormulaSet, limits: &Limits) -> Result<VerificationReport> {
    let atoms = model.frame.atoms();
    let e = match atoms.len() {
        1 => IndexTerm::atom(atoms.into_iter().next().unwrap()),
        _ => {
            return Err(Error::PreconditionFailed(
                "expected a frame over a single atomic index".into(),
            ))
        }
    };
    let plus = IndexTerm::plus(e.clone());
    let r = model.frame.relation_of(&e)?.into_owned();
    if *model.frame.relation_of(&plus)? != r.transitive_closure() {
        return Err(Error::PreconditionFailed(format!(
            "the relation of `{plus}` is not the transitive closure of `{e}`"
        )));
    }
    let partition = equivalence_through(model, phi)?;
    let r_min = min_filtered_relation(model, &partition, &e)?;
    let s_min = min_filtered_relation(model, &partition, &plus)?;

    let mut report = VerificationReport::new();
    report.record(
        "S^min ⊆ (R^min)⁺",
        if s_min.is_subset(&r_min.transitive_closure()) {
            Ok(())
        } else {
            Err(format!("S^min = {s_min:?}, R^min = {r_min:?}"))
        },
    );
    let frame = Frame::new(partition.len())?
        .with_relation(e.clone(), r_min)?
        .with_relation(plus.clone(), s_min)?;
    let [_, _, a3] = instantiate_segerberg(&e, &plus);
    report.record(
        "minimal filtrated frame validates (A3)",
        match frame_valid(&frame, &a3, limits)? {
            FrameValidity::Valid => Ok(()),
            FrameValidity::Counterexample { valuation, world } => {
                Err(format!("fails at class {world} under {valuation:?}"))
            }
        },
    );
    Ok(report)
}
