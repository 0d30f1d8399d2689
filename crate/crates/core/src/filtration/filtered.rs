use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::partition::{induced_equivalence, Partition, Provenance};
use super::relations::{max_filtered_relation, min_filtered_relation, respect_violation};
use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::semantics::{model_from_json, model_to_json, BaseLogic, Frame, LogicSpec, Model, Recipe, Relation, Valuation, WorldSet};
use crate::syntax::{parse_formula, FormulaSet, IndexTerm, Signature};

/// Which construction produced a filtered model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// One recipe applied to every relevant index.
    Recipe(Recipe),
    /// The transitive-closure transfer over a unimodal base logic.
    Transfer(BaseLogic),
    /// Fusion filtration with one base logic per atomic index.
    Fusion(Vec<(BaseLogic, String)>),
    /// Differentiation applied to the quotient of another construction.
    Differentiated(Box<Construction>),
    /// A candidate read from outside; no recipe is assumed.
    Candidate,
}

impl Construction {
    /// The recipe used for `index`, when known.
    pub fn recipe_for(&self, index: &IndexTerm) -> Option<Recipe> {
        match self {
            Construction::Recipe(r) => Some(*r),
            Construction::Transfer(base) => match index {
                IndexTerm::Atom(_) => base.recipe(),
                _ => None,
            },
            Construction::Fusion(parts) => parts
                .iter()
                .find(|(_, a)| matches!(index, IndexTerm::Atom(s) if s == a))
                .and_then(|(b, _)| b.recipe()),
            Construction::Differentiated(inner) => inner.recipe_for(index),
            Construction::Candidate => None,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Recipe(r) => write!(f, "{r}"),
            Construction::Transfer(b) => write!(f, "transfer:{}", b.name()),
            Construction::Fusion(parts) => {
                let spec = LogicSpec::Fusion(
                    parts
                        .iter()
                        .map(|(b, a)| LogicSpec::base(*b, a.clone()))
                        .collect(),
                );
                write!(f, "{spec}")
            }
            Construction::Differentiated(inner) => write!(f, "differentiated({inner})"),
            Construction::Candidate => f.write_str("candidate"),
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(r) = s.parse::<Recipe>() {
            return Ok(Construction::Recipe(r));
        }
        if let Some(b) = s.strip_prefix("transfer:") {
            return Ok(Construction::Transfer(b.parse()?));
        }
        if let Some(inner) = s.strip_prefix("differentiated(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Construction::Differentiated(Box::new(inner.parse()?)));
        }
        if s == "candidate" {
            return Ok(Construction::Candidate);
        }
        match s.parse::<LogicSpec>()? {
            spec @ LogicSpec::Fusion(_) => Ok(Construction::Fusion(spec.components())),
            _ => Err(Error::Malformed(format!("unknown construction `{s}`"))),
        }
    }
}

/// A quotient model together with everything needed to check it against
/// the definition of a filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredModel {
    pub quotient: Model,
    pub source: Model,
    pub gamma: FormulaSet,
    pub partition: Partition,
    /// `Φ` for definable filtrations (`Φ = Γ` when strict).
    pub through: Option<FormulaSet>,
    pub construction: Construction,
}

impl FilteredModel {
    pub fn class_count(&self) -> usize {
        self.partition.len()
    }

    pub fn is_strict(&self) -> bool {
        self.through.as_ref() == Some(&self.gamma)
    }

    pub fn to_json(&self) -> Value {
        let mut v = model_to_json(&self.quotient);
        let obj = v.as_object_mut().expect("model JSON is an object");
        obj.insert("classes".into(), json!(self.partition.to_lists()));
        obj.insert("gamma".into(), json!(strings(&self.gamma)));
        obj.insert(
            "through".into(),
            self.through.as_ref().map_or(Value::Null, |t| json!(strings(t))),
        );
        obj.insert("recipe".into(), json!(self.construction.to_string()));
        v
    }

    /// Reads a filtered model emitted by [`FilteredModel::to_json`] back
    /// against its source model.
    pub fn from_json(source: &Model, value: &Value) -> Result<Self> {
        let quotient = model_from_json(value)?;
        let field = |k: &str| {
            value
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("missing field `{k}`")))
        };
        let classes: Vec<Vec<usize>> = serde_json::from_value(field("classes")?.clone())
            .map_err(|e| Error::Malformed(e.to_string()))?;
        let formulas = |v: &Value| -> Result<FormulaSet> {
            let items: Vec<String> =
                serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
            items
                .iter()
                .map(|s| parse_formula(s, &Signature::open()))
                .collect()
        };
        let gamma = formulas(field("gamma")?)?;
        let through = match value.get("through") {
            None | Some(Value::Null) => None,
            Some(t) => Some(formulas(t)?),
        };
        let construction = field("recipe")?
            .as_str()
            .ok_or_else(|| Error::Malformed("`recipe` must be a string".into()))?
            .parse()?;
        let partition = Partition::from_classes(source.world_count(), &classes)?;
        Ok(FilteredModel {
            quotient,
            source: source.clone(),
            gamma,
            partition,
            through,
            construction,
        })
    }
}

fn strings(set: &FormulaSet) -> Vec<String> {
    set.iter().map(|f| f.to_string()).collect()
}

/// Indices whose quotient relation must lie between min and max: those of
/// the source frame and those boxed in `Γ`.
pub(crate) fn relevant_indices(source: &Model, gamma: &FormulaSet) -> BTreeSet<IndexTerm> {
    let mut out = source.frame.alphabet();
    out.extend(gamma.indices());
    out
}

/// Quotient valuation: a variable of `Γ` holds at a class iff it holds at the
/// class representative; every other variable is false.
pub(crate) fn canonical_valuation(source: &Model, partition: &Partition, gamma: &FormulaSet) -> Valuation {
    gamma
        .variables()
        .into_iter()
        .map(|p| {
            let ext = source.value(&p);
            let classes: WorldSet = (0..partition.len())
                .filter(|&c| ext.contains(partition.representative(c)))
                .collect();
            (p, classes)
        })
        .collect()
}

pub(crate) fn apply_recipe(
    source: &Model,
    partition: &Partition,
    gamma: &FormulaSet,
    e: &IndexTerm,
    recipe: Recipe,
) -> Result<Relation> {
    let min = min_filtered_relation(source, partition, e)?;
    let max = max_filtered_relation(source, partition, gamma, e)?;
    let rel = match recipe {
        Recipe::Minimal => min.clone(),
        Recipe::ClosureOfMinimal => min.transitive_closure(),
        Recipe::Maximal => max.clone(),
    };
    if !min.is_subset(&rel) || !rel.is_subset(&max) {
        return Err(Error::RecipeViolation(format!(
            "{recipe} relation for `{e}` leaves the interval [min, max]"
        )));
    }
    Ok(rel)
}

/// Filtration of `source` through a given partition, applying `recipe` to
/// every relevant index.
pub fn filtrate_with(
    source: &Model,
    gamma: &FormulaSet,
    partition: Partition,
    recipe: Recipe,
) -> Result<FilteredModel> {
    let mut frame = Frame::new(partition.len())?;
    for e in relevant_indices(source, gamma) {
        let rel = apply_recipe(source, &partition, gamma, &e, recipe)?;
        frame.set_relation(e, rel)?;
    }
    let valuation = canonical_valuation(source, &partition, gamma);
    let through = match &partition.provenance {
        Provenance::InducedBy(g) | Provenance::Through(g) => Some(g.clone()),
        _ => None,
    };
    Ok(FilteredModel {
        quotient: Model::new(frame, valuation)?,
        source: source.clone(),
        gamma: gamma.clone(),
        partition,
        through,
        construction: Construction::Recipe(recipe),
    })
}

/// Strict filtration: the partition is `∼_Γ`.
pub fn build_filtration(source: &Model, gamma: &FormulaSet, recipe: Recipe) -> Result<FilteredModel> {
    if !gamma.is_sub_closed() {
        return Err(Error::PreconditionFailed("Γ is not closed under subformulas".into()));
    }
    let partition = induced_equivalence(source, gamma)?;
    filtrate_with(source, gamma, partition, recipe)
}

/// Checks the four clauses of the definition of a filtration.
pub fn verify_filtration(source: &Model, gamma: &FormulaSet, candidate: &FilteredModel) -> VerificationReport {
    let mut report = VerificationReport::new();
    let partition = &candidate.partition;

    let shape = if !partition.is_well_formed() {
        Err("partition is not a partition of the source worlds".to_string())
    } else if partition.world_count() != source.world_count() {
        Err(format!(
            "partition covers {} worlds, source has {}",
            partition.world_count(),
            source.world_count()
        ))
    } else if candidate.quotient.world_count() != partition.len() {
        Err(format!(
            "quotient has {} worlds for {} classes",
            candidate.quotient.world_count(),
            partition.len()
        ))
    } else {
        Ok(())
    };
    let shape_ok = shape.is_ok();
    report.record("quotient well-formed", shape);
    if !shape_ok {
        for name in ["partition respects Γ", "valuation canonical on Var(Γ)", "min ⊆ R̂ ⊆ max"] {
            report.record(name, Err("quotient is malformed".into()));
        }
        return report;
    }

    report.record(
        "partition respects Γ",
        match respect_violation(source, partition, gamma) {
            Ok(None) => Ok(()),
            Ok(Some((class, f))) => Err(format!("class {class} disagrees on `{f}`")),
            Err(e) => Err(e.to_string()),
        },
    );

    let mut canonical = Ok(());
    'vars: for p in gamma.variables() {
        let src = source.value(&p);
        let quo = candidate.quotient.value(&p);
        for x in 0..source.world_count() {
            if src.contains(x) != quo.contains(partition.class_of(x)) {
                canonical = Err(format!("`{p}` differs between world {x} and its class"));
                break 'vars;
            }
        }
    }
    report.record("valuation canonical on Var(Γ)", canonical);

    let mut bounds = Ok(());
    let mut indices = relevant_indices(source, gamma);
    indices.extend(candidate.quotient.frame.alphabet());
    for e in indices {
        let outcome = (|| -> Result<Option<String>> {
            let rel = candidate.quotient.frame.relation_of(&e)?;
            let min = min_filtered_relation(source, partition, &e)?;
            let max = max_filtered_relation(source, partition, gamma, &e)?;
            Ok(if !min.is_subset(&rel) {
                Some(format!("R̂ for `{e}` misses a minimal edge"))
            } else if !rel.is_subset(&max) {
                Some(format!("R̂ for `{e}` exceeds the maximal relation"))
            } else {
                None
            })
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(d)) => {
                bounds = Err(d);
                break;
            }
            Err(err) => {
                bounds = Err(format!("`{e}`: {err}"));
                break;
            }
        }
    }
    report.record("min ⊆ R̂ ⊆ max", bounds);
    report
}

/// Every member of `Γ` has the same truth value at `x` and at its class.
pub fn verify_filtration_lemma(source: &Model, gamma: &FormulaSet, candidate: &FilteredModel) -> bool {
    let partition = &candidate.partition;
    if partition.world_count() != source.world_count()
        || candidate.quotient.world_count() != partition.len()
    {
        return false;
    }
    gamma.iter().all(|f| {
        match (source.extension(f), candidate.quotient.extension(f)) {
            (Ok(src), Ok(quo)) => {
                (0..source.world_count()).all(|x| src.contains(x) == quo.contains(partition.class_of(x)))
            }
            _ => false,
        }
    })
}
