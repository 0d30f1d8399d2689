use std::collections::BTreeSet;

use super::filtered::{build_filtration, canonical_valuation, verify_filtration, Construction, FilteredModel};
use super::partition::{induced_equivalence, Provenance};
use crate::error::{Error, Result};
use crate::semantics::{BaseLogic, Frame, LogicSpec, Model, Recipe, Valuation};
use crate::syntax::{fresh_surrogates, Formula, FormulaSet, IndexTerm, Surrogates};

fn base_parts(spec: &LogicSpec) -> Result<(BaseLogic, String, Recipe)> {
    match spec {
        LogicSpec::Base { logic, index } => {
            let recipe = logic.recipe().ok_or_else(|| {
                Error::UnsupportedLogic(format!("{} has no filtration recipe", logic.name()))
            })?;
            Ok((*logic, index.clone(), recipe))
        }
        other => Err(Error::UnsupportedLogic(format!("`{other}` is not a unimodal base logic"))),
    }
}

/// `M^σ`: the source extended by `q_φ` true exactly where `φ` is.
fn surrogate_model(source: &Model, surrogates: &Surrogates) -> Result<Model> {
    let mut out = source.clone();
    for (phi, q) in &surrogates.names {
        out.set_value(q.clone(), source.extension(phi)?);
    }
    Ok(out)
}

fn require_closed(gamma: &FormulaSet) -> Result<()> {
    if gamma.is_sub_closed() {
        Ok(())
    } else {
        Err(Error::PreconditionFailed("Γ is not closed under subformulas".into()))
    }
}

/// Filtration of a model for `L^⊞` through `Γ`, built from the base logic's
/// filtration of the `◻`-reduct of the surrogate model through
/// `Δ = {q_φ, [e]q_φ | φ ∈ Γ}`, with `⊞` reinterpreted as `R̂⁺`.
pub fn transclosure_filtration(source: &Model, gamma: &FormulaSet, base: &LogicSpec) -> Result<FilteredModel> {
    let (logic, index, recipe) = base_parts(base)?;
    let e = IndexTerm::atom(index.clone());
    let plus = IndexTerm::plus(e.clone());
    require_closed(gamma)?;
    if let Some(t) = gamma.indices().into_iter().find(|t| *t != e && *t != plus) {
        return Err(Error::PreconditionFailed(format!(
            "Γ uses index `{t}` outside {{{e}, {plus}}}"
        )));
    }
    let r = source.frame.relation_of(&e)?.into_owned();
    let s = source.frame.relation_of(&plus)?.into_owned();
    if s != r.transitive_closure() {
        return Err(Error::PreconditionFailed(format!(
            "the relation of `{plus}` is not the transitive closure of `{e}`"
        )));
    }
    if !base.frame_condition(&source.frame) {
        return Err(Error::PreconditionFailed(format!(
            "the `{e}`-relation violates the {} frame condition",
            logic.name()
        )));
    }

    let surrogates = fresh_surrogates(gamma);
    let m_sigma = surrogate_model(source, &surrogates)?;
    let delta: FormulaSet = surrogates
        .names
        .iter()
        .flat_map(|(_, q)| {
            let q = Formula::var(q.clone());
            [q.clone(), Formula::boxed(e.clone(), q)]
        })
        .collect();
    let keep: BTreeSet<IndexTerm> = [e.clone()].into_iter().collect();
    let n_sigma = Model::new(m_sigma.frame.reduct(&keep), m_sigma.valuation().clone())?;
    let inner = build_filtration(&n_sigma, &delta, recipe)?;

    let r_hat = inner
        .quotient
        .frame
        .explicit(&e)
        .cloned()
        .expect("the reduct interprets its index");
    let mut frame = Frame::new(inner.partition.len())?;
    frame.set_relation(plus.clone(), r_hat.transitive_closure())?;
    frame.set_relation(e.clone(), r_hat)?;
    let valuation: Valuation = gamma
        .variables()
        .into_iter()
        .map(|p| {
            let q = surrogates
                .name_of(&Formula::var(p.clone()))
                .expect("Γ is closed, so its variables have surrogates");
            (p, inner.quotient.value(q))
        })
        .collect();
    let through: FormulaSet = gamma
        .iter()
        .flat_map(|phi| [phi.clone(), Formula::boxed(e.clone(), phi.clone())])
        .collect();
    let mut partition = inner.partition;
    partition.provenance = Provenance::Through(through.clone());

    let out = FilteredModel {
        quotient: Model::new(frame, valuation)?,
        source: source.clone(),
        gamma: gamma.clone(),
        partition,
        through: Some(through),
        construction: Construction::Transfer(logic),
    };
    let report = verify_filtration(source, gamma, &out);
    if !report.passed() {
        return Err(Error::RecipeViolation(format!("transfer output is not a filtration:\n{report}")));
    }
    if !LogicSpec::plus(base.clone()).frame_condition(&out.quotient.frame) {
        return Err(Error::RecipeViolation(format!(
            "transfer output violates the {}⁺ frame condition",
            logic.name()
        )));
    }
    Ok(out)
}

/// Strict filtration of a fusion model: each component is filtrated by its
/// own recipe through `Γ_i = {q_φ} ∪ {[a_i]q_φ | [a_i]φ ∈ Γ}` on the shared
/// quotient `W/∼_Γ`.
pub fn fusion_strict_filtration(
    source: &Model,
    gamma: &FormulaSet,
    components: &[LogicSpec],
) -> Result<FilteredModel> {
    let parts = components.iter().map(base_parts).collect::<Result<Vec<_>>>()?;
    require_closed(gamma)?;
    let atoms: BTreeSet<IndexTerm> = parts.iter().map(|(_, a, _)| IndexTerm::atom(a.clone())).collect();
    if atoms.len() != parts.len() {
        return Err(Error::AlphabetClash("components share an index".into()));
    }
    if let Some(t) = gamma.indices().into_iter().find(|t| !atoms.contains(t)) {
        return Err(Error::PreconditionFailed(format!(
            "Γ uses index `{t}` outside the component alphabets"
        )));
    }
    for (spec, (logic, a, _)) in components.iter().zip(&parts) {
        if !spec.frame_condition(&source.frame) {
            return Err(Error::PreconditionFailed(format!(
                "the `{a}`-relation violates the {} frame condition",
                logic.name()
            )));
        }
    }

    let surrogates = fresh_surrogates(gamma);
    let m_prime = surrogate_model(source, &surrogates)?;
    let sim = induced_equivalence(source, gamma)?;
    let mut frame = Frame::new(sim.len())?;
    for (i, (_, a, recipe)) in parts.iter().enumerate() {
        let e = IndexTerm::atom(a.clone());
        let gamma_i: FormulaSet = surrogates
            .names
            .iter()
            .flat_map(|(phi, q)| {
                let boxed = match phi {
                    Formula::Box(t, body) if *t == e => {
                        let q_body = surrogates.var_of(body).expect("Γ is closed");
                        Some(Formula::boxed(e.clone(), q_body))
                    }
                    _ => None,
                };
                std::iter::once(Formula::var(q.clone())).chain(boxed)
            })
            .collect();
        let sim_i = induced_equivalence(&m_prime, &gamma_i)?;
        if !sim_i.same_classes(&sim) {
            return Err(Error::EquivalenceMismatch { component: i });
        }
        let keep: BTreeSet<IndexTerm> = [e.clone()].into_iter().collect();
        let reduct = Model::new(m_prime.frame.reduct(&keep), m_prime.valuation().clone())?;
        let fm_i = build_filtration(&reduct, &gamma_i, *recipe)?;
        let rel = fm_i.quotient.frame.explicit(&e).cloned().expect("reduct index");
        frame.set_relation(e, rel)?;
    }
    let valuation = canonical_valuation(source, &sim, gamma);
    let out = FilteredModel {
        quotient: Model::new(frame, valuation)?,
        source: source.clone(),
        gamma: gamma.clone(),
        through: Some(gamma.clone()),
        partition: sim,
        construction: Construction::Fusion(parts.iter().map(|(l, a, _)| (*l, a.clone())).collect()),
    };
    let report = verify_filtration(source, gamma, &out);
    if !report.passed() {
        return Err(Error::RecipeViolation(format!("fusion output is not a filtration:\n{report}")));
    }
    if let Some((logic, a, _)) = components
        .iter()
        .zip(&parts)
        .find(|(spec, _)| !spec.frame_condition(&out.quotient.frame))
        .map(|(_, p)| p)
    {
        return Err(Error::RecipeViolation(format!(
            "fusion output violates the {} condition on `{a}`",
            logic.name()
        )));
    }
    Ok(out)
}
