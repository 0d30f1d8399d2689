use std::collections::BTreeSet;

use rayon::prelude::*;

use super::script::{Justification, ProofScript};
use crate::error::Result;
use crate::filtration::VerificationReport;
use crate::limits::Limits;
use crate::semantics::{frame_code_bits, frame_from_code, frame_valid, Frame, FrameValidity};
use crate::syntax::IndexTerm;

/// Frames of the script's logic with at most `max_frame_size` worlds, with
/// every index of the script materialized.
fn logic_frames(script: &ProofScript, max_frame_size: usize, limits: &Limits) -> Result<Vec<Frame>> {
    let atoms = script.logic.atom_terms();
    let mut needed: BTreeSet<IndexTerm> = script.logic.alphabet();
    for l in &script.lines {
        needed.extend(l.formula.indices());
    }
    let needed: Vec<IndexTerm> = needed.into_iter().filter(|t| !t.is_atom()).collect();
    let mut out = Vec::new();
    for n in 1..=max_frame_size {
        let bits = frame_code_bits(n, atoms.len(), limits)?;
        let batch: Vec<Frame> = (0..1u64 << bits)
            .into_par_iter()
            .filter_map(|code| {
                let mut frame = frame_from_code(n, &atoms, code);
                if !script.logic.frame_condition(&frame) {
                    return None;
                }
                frame.materialize(needed.iter()).ok()?;
                Some(frame)
            })
            .collect();
        out.extend(batch);
    }
    Ok(out)
}

/// Every line is frame-valid on all frames of the logic up to the given
/// size on which the script's premises are frame-valid.
pub fn soundness_spotcheck(script: &ProofScript, max_frame_size: usize, limits: &Limits) -> Result<VerificationReport> {
    let frames = logic_frames(script, max_frame_size, limits)?;
    let premises: Vec<_> = script.premises().cloned().collect();
    let admitted: Vec<&Frame> = frames
        .par_iter()
        .map(|frame| -> Result<Option<&Frame>> {
            for p in &premises {
                if !frame_valid(frame, p, limits)?.is_valid() {
                    return Ok(None);
                }
            }
            Ok(Some(frame))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let outcomes: Vec<Result<(), String>> = script
        .lines
        .par_iter()
        .map(|line| {
            for frame in &admitted {
                match frame_valid(frame, &line.formula, limits) {
                    Ok(FrameValidity::Valid) => {}
                    Ok(FrameValidity::Counterexample { valuation, world }) => {
                        return Err(format!(
                            "fails at world {world} of a {}-world frame under {:?}",
                            frame.world_count(),
                            valuation
                        ))
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok(())
        })
        .collect();
    let mut report = VerificationReport::new();
    for (k, outcome) in outcomes.into_iter().enumerate() {
        report.record(format!("line {} valid on frames ≤{max_frame_size}", k + 1), outcome);
    }
    Ok(report)
}

/// Single-line mutations of a script: each line deleted (references to it
/// left dangling, later references renumbered), the two premises of each
/// modus ponens swapped, and each reference moved to a neighbouring line.
pub fn mutations(script: &ProofScript) -> Vec<(String, ProofScript)> {
    let mut out = Vec::new();
    for k in 0..script.lines.len() {
        let mut m = script.clone();
        m.lines.remove(k);
        for line in &mut m.lines {
            for r in line.justification.refs_mut() {
                if *r == k {
                    *r = usize::MAX;
                } else if *r > k {
                    *r -= 1;
                }
            }
        }
        out.push((format!("delete line {}", k + 1), m));
    }
    for (k, line) in script.lines.iter().enumerate() {
        if let Justification::ModusPonens(i, j) = line.justification {
            let mut m = script.clone();
            m.lines[k].justification = Justification::ModusPonens(j, i);
            out.push((format!("swap premises of line {}", k + 1), m));
        }
        for (slot, &r) in line.justification.refs().iter().enumerate() {
            let moved = if r > 0 { r - 1 } else { r + 1 };
            if moved >= k {
                continue;
            }
            let mut m = script.clone();
            *m.lines[k].justification.refs_mut()[slot] = moved;
            out.push((format!("retarget reference {} of line {}", slot + 1, k + 1), m));
        }
    }
    out
}
