//! Bounded validity and satisfiability by exhaustive search over small
//! frames, with completeness bounds from the filtration constructions.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semantics::{
    expand_plus, frame_code_bits, frame_from_code, frame_valid, model_to_json, truth, Frame,
    FrameValidity, LogicSpec, Model, Relation, Valuation, WorldSet,
};
use crate::syntax::{sub_closure, Formula, FormulaSet, IndexTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid { complete: bool, searched_up_to: usize },
    Refuted { countermodel: Model, world: usize },
    Sat { model: Model, world: usize },
    Unsat { complete: bool, searched_up_to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionResult {
    pub verdict: Verdict,
    /// Model size from which the search is complete, when one is known.
    pub bound: Option<u64>,
}

impl DecisionResult {
    pub fn is_valid(&self) -> bool {
        matches!(self.verdict, Verdict::Valid { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.verdict, Verdict::Refuted { .. })
    }

    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat { .. })
    }

    /// The witness model and world of `Refuted` or `Sat`.
    pub fn witness(&self) -> Option<(&Model, usize)> {
        match &self.verdict {
            Verdict::Refuted { countermodel, world } => Some((countermodel, *world)),
            Verdict::Sat { model, world } => Some((model, *world)),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let bound = self.bound.map_or(Value::Null, |b| json!(b));
        match &self.verdict {
            Verdict::Valid { complete, searched_up_to } => json!({
                "verdict": "valid", "complete": complete,
                "searched_up_to": searched_up_to, "bound": bound,
            }),
            Verdict::Unsat { complete, searched_up_to } => json!({
                "verdict": "unsat", "complete": complete,
                "searched_up_to": searched_up_to, "bound": bound,
            }),
            Verdict::Refuted { countermodel, world } => json!({
                "verdict": "refuted", "world": world,
                "model": model_to_json(countermodel), "bound": bound,
            }),
            Verdict::Sat { model, world } => json!({
                "verdict": "sat", "world": world,
                "model": model_to_json(model), "bound": bound,
            }),
        }
    }
}

impl fmt::Display for DecisionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let completeness = |c: bool| if c { "complete" } else { "incomplete" };
        match &self.verdict {
            Verdict::Valid { complete, searched_up_to } => {
                write!(f, "VALID (searched ≤{searched_up_to}, {})", completeness(*complete))
            }
            Verdict::Unsat { complete, searched_up_to } => {
                write!(f, "UNSAT (searched ≤{searched_up_to}, {})", completeness(*complete))
            }
            Verdict::Refuted { countermodel, world } => write!(
                f,
                "REFUTED at world {world} of a {}-world countermodel",
                countermodel.world_count()
            ),
            Verdict::Sat { model, world } => {
                write!(f, "SAT at world {world} of a {}-world model", model.world_count())
            }
        }
    }
}

fn pow2(bits: usize) -> u64 {
    1u64.checked_shl(bits as u32).filter(|_| bits < 64).unwrap_or(u64::MAX)
}

/// Members of `Sub(φ)` whose truth is not fixed by the others: `⊥` and
/// negations `ψ → ⊥` of members are left out, so `φ` and `¬φ` count alike.
pub fn independent_subformulas(phi: &Formula) -> usize {
    let sub = sub_closure(&[phi.clone()].into_iter().collect());
    sub.iter()
        .filter(|f| match f {
            Formula::Bot => false,
            Formula::Implies(a, b) => !(**b == Formula::Bot && sub.contains(a)),
            _ => true,
        })
        .count()
}

/// Size bound from the counting argument: strict filtration through
/// `Sub(φ)` for a base logic or fusion, and through the doubled surrogate
/// set `Δ` once the transitive closure modality (or one ♯-layer) is added.
pub fn completeness_bound(phi: &Formula, logic: &LogicSpec) -> Result<u64> {
    let sub = independent_subformulas(phi);
    let filtrable_base = |l: &LogicSpec| match l {
        LogicSpec::Base { logic, .. } => logic.recipe().is_some(),
        LogicSpec::Fusion(parts) => parts
            .iter()
            .all(|p| matches!(p, LogicSpec::Base { logic, .. } if logic.recipe().is_some())),
        _ => false,
    };
    match logic {
        l if filtrable_base(l) => Ok(pow2(sub)),
        LogicSpec::Plus(inner) | LogicSpec::Sharp { base: inner, .. } if filtrable_base(inner) => {
            Ok(pow2(2 * sub))
        }
        other => Err(Error::UnsupportedLogic(format!(
            "no completeness bound is known for `{other}`"
        ))),
    }
}

fn check_language(phi: &Formula, logic: &LogicSpec) -> Result<()> {
    let alphabet = logic.alphabet();
    let atoms = logic.atoms();
    for t in phi.indices() {
        if !alphabet.contains(&t) && !t.atoms().is_subset(&atoms) {
            return Err(Error::UninterpretedIndex(t.to_string()));
        }
        if !alphabet.contains(&t) && !matches!(logic, LogicSpec::Sharp { .. }) && !t.is_atom() {
            return Err(Error::UninterpretedIndex(t.to_string()));
        }
    }
    Ok(())
}

/// Searches frames of the logic in increasing size and encoding order for a
/// model and world where `target` fails.
fn search(
    target: &Formula,
    logic: &LogicSpec,
    max_size: usize,
    limits: &Limits,
) -> Result<Option<(Model, usize)>> {
    if max_size == 0 {
        return Err(Error::PreconditionFailed("max_size must be at least 1".into()));
    }
    let atoms = logic.atom_terms();
    let mut needed: Vec<IndexTerm> = logic.alphabet().into_iter().filter(|t| !t.is_atom()).collect();
    needed.extend(target.indices().into_iter().filter(|t| !t.is_atom()));
    for n in 1..=max_size {
        let bits = frame_code_bits(n, atoms.len(), limits)?;
        let probe = |code: u64| -> Result<Option<(Model, usize)>> {
            let mut frame = frame_from_code(n, &atoms, code);
            if !logic.frame_condition(&frame) {
                return Ok(None);
            }
            frame.materialize(needed.iter())?;
            Ok(match frame_valid(&frame, target, limits)? {
                FrameValidity::Valid => None,
                FrameValidity::Counterexample { valuation, world } => {
                    Some((Model::new(frame, valuation)?, world))
                }
            })
        };
        let total = 1u64 << bits;
        let hit = if total <= 256 {
            (0..total).find_map(|c| probe(c).transpose())
        } else {
            (0..total).into_par_iter().find_map_first(|c| probe(c).transpose())
        };
        if let Some(hit) = hit {
            return hit.map(Some);
        }
    }
    Ok(None)
}

fn bound_and_completeness(phi: &Formula, logic: &LogicSpec, max_size: usize) -> (Option<u64>, bool) {
    let bound = completeness_bound(phi, logic).ok();
    (bound, bound.is_some_and(|b| max_size as u64 >= b))
}

pub fn decide_validity(phi: &Formula, logic: &LogicSpec, max_size: usize, limits: &Limits) -> Result<DecisionResult> {
    check_language(phi, logic)?;
    let (bound, complete) = bound_and_completeness(phi, logic, max_size);
    let verdict = match search(phi, logic, max_size, limits)? {
        Some((countermodel, world)) => Verdict::Refuted { countermodel, world },
        None => Verdict::Valid {
            complete,
            searched_up_to: max_size,
        },
    };
    Ok(DecisionResult { verdict, bound })
}

pub fn decide_sat(phi: &Formula, logic: &LogicSpec, max_size: usize, limits: &Limits) -> Result<DecisionResult> {
    check_language(phi, logic)?;
    let (bound, complete) = bound_and_completeness(phi, logic, max_size);
    let verdict = match search(&Formula::not(phi.clone()), logic, max_size, limits)? {
        Some((model, world)) => Verdict::Sat { model, world },
        None => Verdict::Unsat {
            complete,
            searched_up_to: max_size,
        },
    };
    Ok(DecisionResult { verdict, bound })
}

/// Re-checks a witness by direct evaluation and against the frame condition.
pub fn reverify(result: &DecisionResult, phi: &Formula, logic: &LogicSpec) -> bool {
    let expected = match result.verdict {
        Verdict::Refuted { .. } => false,
        Verdict::Sat { .. } => true,
        _ => return true,
    };
    let (model, world) = result.witness().expect("witness verdict");
    logic.frame_condition(&model.frame) && truth(model, world, phi).ok() == Some(expected)
}

/// `◻p, ◻◻p, …, ◻^k p, ¬⊞p` over the index `r`.
pub fn compactness_subset(k: usize) -> FormulaSet {
    let r = IndexTerm::atom("r");
    let mut out = FormulaSet::new();
    let mut body = Formula::var("p");
    for _ in 0..k {
        body = Formula::boxed(r.clone(), body);
        out.insert(body.clone());
    }
    out.insert(Formula::not(Formula::boxed(IndexTerm::plus(r), Formula::var("p"))));
    out
}

/// For each `k ≤ n`, a ⊕-model satisfying `compactness_subset(k)` at world
/// 0: the chain `0 → 1 → … → k+1` with `p` true on `1..=k`.
pub fn compactness_demo(n: usize, max_size: usize) -> Result<Vec<(FormulaSet, Model)>> {
    if n + 2 > max_size {
        return Err(Error::CapExceeded {
            what: "compactness witness size",
            required: (n + 2) as u64,
            cap: max_size as u64,
        });
    }
    let r = IndexTerm::atom("r");
    let logic = LogicSpec::plus(LogicSpec::base(crate::semantics::BaseLogic::K, "r"));
    (0..=n)
        .map(|k| {
            let worlds = k + 2;
            let frame = Frame::new(worlds)?.with_relation(
                r.clone(),
                Relation::from_pairs(worlds, (0..=k).map(|x| (x, x + 1)))?,
            )?;
            let frame = expand_plus(&frame, &r)?;
            let valuation: Valuation = [("p".to_string(), (1..=k).collect::<WorldSet>())]
                .into_iter()
                .collect();
            let model = Model::new(frame, valuation)?;
            let subset = compactness_subset(k);
            let holds = subset.iter().all(|f| truth(&model, 0, f).unwrap_or(false));
            if !holds || !logic.frame_condition(&model.frame) {
                return Err(Error::RecipeViolation(format!("compactness witness for k={k} fails")));
            }
            Ok((subset, model))
        })
        .collect()
}
