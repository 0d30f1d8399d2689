use std::fmt;

use super::formula::{fo_sentence_holds, mfp_member, resolve_symbol, FOFormula};
use crate::error::{Error, Result};
use crate::filtration::{min_filtered_relation, FilteredModel, Recipe};
use crate::semantics::{Frame, Relation};
use crate::syntax::IndexTerm;

/// Total map from the worlds of a source frame into `0..target_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldMap {
    map: Vec<usize>,
    target_count: usize,
}

impl WorldMap {
    pub fn new(map: Vec<usize>, target_count: usize) -> Result<Self> {
        if let Some(&w) = map.iter().find(|&&w| w >= target_count) {
            return Err(Error::Malformed(format!(
                "map sends a world to {w}, outside a target of {target_count} worlds"
            )));
        }
        Ok(WorldMap { map, target_count })
    }

    pub fn identity(n: usize) -> Self {
        WorldMap {
            map: (0..n).collect(),
            target_count: n,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn source_count(&self) -> usize {
        self.map.len()
    }

    pub fn target_count(&self) -> usize {
        self.target_count
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `{(h(x), h(y)) | x R y}`.
    pub fn image(&self, rel: &Relation) -> Relation {
        let mut out = Relation::empty(self.target_count);
        for (x, y) in rel.pairs() {
            out.insert(self.map[x], self.map[y]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomViolation {
    /// Target world outside the image.
    NotOnto { world: usize },
    /// `x R y` but not `h(x) R′ h(y)`.
    Monotonicity { x: usize, y: usize },
    /// `x′ R′ y′` with no lifting `x R y`.
    WeakLifting { x: usize, y: usize },
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::NotOnto { world } => write!(f, "not onto: world {world} has no preimage"),
            HomViolation::Monotonicity { x, y } => {
                write!(f, "monotonicity fails on ({x},{y})")
            }
            HomViolation::WeakLifting { x, y } => {
                write!(f, "weak lifting fails on target edge ({x},{y})")
            }
        }
    }
}

fn check_counts(source: &Frame, target: &Frame, h: &WorldMap) -> Result<()> {
    if h.source_count() != source.world_count() {
        return Err(Error::WorldCountMismatch {
            expected: source.world_count(),
            found: h.source_count(),
        });
    }
    if h.target_count() != target.world_count() {
        return Err(Error::WorldCountMismatch {
            expected: target.world_count(),
            found: h.target_count(),
        });
    }
    Ok(())
}

fn hom_violation(h: &WorldMap, rel: &Relation, target: &Relation) -> Option<HomViolation> {
    let mut hit = vec![false; h.target_count()];
    for &w in h.as_slice() {
        hit[w] = true;
    }
    if let Some(world) = hit.iter().position(|&b| !b) {
        return Some(HomViolation::NotOnto { world });
    }
    if let Some((x, y)) = rel.pairs().find(|&(x, y)| !target.contains(h.apply(x), h.apply(y))) {
        return Some(HomViolation::Monotonicity { x, y });
    }
    let image = h.image(rel);
    target
        .pairs()
        .find(|&(x, y)| !image.contains(x, y))
        .map(|(x, y)| HomViolation::WeakLifting { x, y })
}

/// Checks that `h` is onto, monotone and weakly lifting for `index`; the
/// first failing condition is returned as a witness.
pub fn is_strong_onto_hom(
    source: &Frame,
    target: &Frame,
    h: &WorldMap,
    index: &IndexTerm,
) -> Result<Option<HomViolation>> {
    check_counts(source, target, h)?;
    let uninterpreted = |_| Error::UninterpretedIndex(index.to_string());
    let rel = source.relation_of(index).map_err(uninterpreted)?;
    let target_rel = target.relation_of(index).map_err(uninterpreted)?;
    Ok(hom_violation(h, &rel, &target_rel))
}

/// The map `x ↦ x̂` of a minimal filtration, with its strong onto
/// homomorphism verdict for `index`.
pub fn filtration_map(fm: &FilteredModel, index: &IndexTerm) -> Result<(WorldMap, Option<HomViolation>)> {
    if fm.construction.recipe_for(index) != Some(Recipe::Minimal) {
        return Err(Error::RecipeMismatch(format!(
            "the filtration map is a strong homomorphism only for minimal filtrations; `{}` was built by {}",
            index, fm.construction
        )));
    }
    let min = min_filtered_relation(&fm.source, &fm.partition, index)?;
    if *fm.quotient.frame.relation_of(index)? != min {
        return Err(Error::RecipeMismatch(format!(
            "the relation for `{index}` is not the minimal filtered relation"
        )));
    }
    let h = WorldMap::new(fm.partition.class_map().to_vec(), fm.class_count())?;
    let verdict = is_strong_onto_hom(&fm.source.frame, &fm.quotient.frame, &h, index)?;
    Ok((h, verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preservation {
    pub source: bool,
    pub target: bool,
}

impl Preservation {
    pub fn preserved(&self) -> bool {
        !self.source || self.target
    }
}

/// Evaluates an MFP sentence on both sides of a strong onto homomorphism.
pub fn preservation_check(source: &Frame, target: &Frame, h: &WorldMap, psi: &FOFormula) -> Result<Preservation> {
    if !mfp_member(psi) {
        return Err(Error::PreconditionFailed(format!("`{psi}` is not in the MFP fragment")));
    }
    if !psi.is_sentence() {
        return Err(Error::PreconditionFailed(format!("`{psi}` has free variables")));
    }
    for symbol in psi.symbols() {
        let index = resolve_symbol(source, &symbol)?;
        if let Some(v) = is_strong_onto_hom(source, target, h, &index)? {
            return Err(Error::PreconditionFailed(format!(
                "map is not a strong onto homomorphism for `{index}`: {v}"
            )));
        }
    }
    if psi.symbols().is_empty() {
        check_counts(source, target, h)?;
    }
    Ok(Preservation {
        source: fo_sentence_holds(source, psi)?,
        target: fo_sentence_holds(target, psi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::build_filtration;
    use crate::mfp::parse_fo;
    use crate::semantics::{Model, Valuation};
    use crate::syntax::{parse_formula, sub_closure, Signature};

    fn frame(n: usize, pairs: &[(usize, usize)]) -> Frame {
        Frame::unimodal(n, "r", pairs.iter().copied()).unwrap()
    }

    fn r() -> IndexTerm {
        IndexTerm::atom("r")
    }

    #[test]
    fn identity_is_a_strong_onto_hom() {
        let f = frame(3, &[(0, 1), (1, 2), (2, 2)]);
        assert_eq!(is_strong_onto_hom(&f, &f, &WorldMap::identity(3), &r()).unwrap(), None);
    }

    #[test]
    fn two_cycle_onto_reflexive_point() {
        let h = WorldMap::new(vec![0, 0], 1).unwrap();
        let v = is_strong_onto_hom(&frame(2, &[(0, 1), (1, 0)]), &frame(1, &[(0, 0)]), &h, &r()).unwrap();
        assert_eq!(v, None);
    }

    #[test]
    fn chain_onto_empty_point_fails_monotonicity() {
        let h = WorldMap::new(vec![0, 0], 1).unwrap();
        let v = is_strong_onto_hom(&frame(2, &[(0, 1)]), &frame(1, &[]), &h, &r()).unwrap();
        assert_eq!(v, Some(HomViolation::Monotonicity { x: 0, y: 1 }));
    }

    #[test]
    fn not_onto_and_weak_lifting() {
        let h = WorldMap::new(vec![0, 0], 2).unwrap();
        let v = is_strong_onto_hom(&frame(2, &[]), &frame(2, &[]), &h, &r()).unwrap();
        assert_eq!(v, Some(HomViolation::NotOnto { world: 1 }));
        let v = is_strong_onto_hom(&frame(1, &[]), &frame(1, &[(0, 0)]), &WorldMap::identity(1), &r()).unwrap();
        assert_eq!(v, Some(HomViolation::WeakLifting { x: 0, y: 0 }));
        let missing = is_strong_onto_hom(&frame(1, &[]), &frame(1, &[]), &WorldMap::identity(1), &IndexTerm::atom("s"));
        assert!(matches!(missing, Err(Error::UninterpretedIndex(_))));
        assert!(WorldMap::new(vec![2], 2).is_err());
    }

    fn chain_model() -> Model {
        let v: Valuation = [("p".to_string(), [2].into_iter().collect())].into_iter().collect();
        Model::new(frame(3, &[(0, 1), (1, 2)]), v).unwrap()
    }

    #[test]
    fn minimal_filtration_map() {
        let gamma = sub_closure(&[parse_formula("[r]p", &Signature::open()).unwrap()].into_iter().collect());
        let fm = build_filtration(&chain_model(), &gamma, Recipe::Minimal).unwrap();
        let (h, verdict) = filtration_map(&fm, &r()).unwrap();
        assert_eq!(verdict, None);
        assert_eq!(h.source_count(), 3);
        let closed = build_filtration(&chain_model(), &gamma, Recipe::ClosureOfMinimal).unwrap();
        assert!(matches!(filtration_map(&closed, &r()), Err(Error::RecipeMismatch(_))));
    }

    #[test]
    fn discrete_partition_gives_identity() {
        let gamma = sub_closure(&[parse_formula("[r][r]p", &Signature::open()).unwrap()].into_iter().collect());
        let fm = build_filtration(&chain_model(), &gamma, Recipe::Minimal).unwrap();
        assert_eq!(fm.class_count(), 3);
        let (h, verdict) = filtration_map(&fm, &r()).unwrap();
        assert_eq!(h, WorldMap::identity(3));
        assert_eq!(verdict, None);
    }

    #[test]
    fn preservation_instances() {
        let h = WorldMap::new(vec![0, 0], 1).unwrap();
        let src = frame(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]);
        let dst = frame(1, &[(0, 0)]);
        for s in ["forall x. R(x,x)", "forall x y. R(x,y) -> R(y,x)"] {
            let p = preservation_check(&src, &dst, &h, &parse_fo(s).unwrap()).unwrap();
            assert!(p.source && p.target);
        }
        let trans = parse_fo("forall x y z. R(x,y) & R(y,z) -> R(x,z)").unwrap();
        assert!(matches!(
            preservation_check(&src, &dst, &h, &trans),
            Err(Error::PreconditionFailed(_))
        ));
        let broken = WorldMap::new(vec![0, 0], 1).unwrap();
        assert!(preservation_check(&frame(2, &[(0, 1)]), &frame(1, &[]), &broken, &parse_fo("forall x. R(x,x)").unwrap()).is_err());
    }
}
