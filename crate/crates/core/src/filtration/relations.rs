use super::partition::Partition;
use crate::error::{Error, Result};
use crate::semantics::{Model, Relation};
use crate::syntax::{FormulaSet, IndexTerm};

/// Image of `R_e` under the quotient map.
pub fn min_filtered_relation(model: &Model, partition: &Partition, e: &IndexTerm) -> Result<Relation> {
    let rel = model.frame.relation_of(e)?;
    Ok(image(&rel, partition))
}

pub(crate) fn image(rel: &Relation, partition: &Partition) -> Relation {
    let mut out = Relation::empty(partition.len());
    for (x, y) in rel.pairs() {
        out.insert(partition.class_of(x), partition.class_of(y));
    }
    out
}

/// First class that splits some member of `gamma`, if any.
pub fn respect_violation(
    model: &Model,
    partition: &Partition,
    gamma: &FormulaSet,
) -> Result<Option<(usize, String)>> {
    for f in gamma {
        let ext = model.extension(f)?;
        for (id, class) in partition.classes().iter().enumerate() {
            let inside = class.intersection(ext);
            if !inside.is_empty() && inside != *class {
                return Ok(Some((id, f.to_string())));
            }
        }
    }
    Ok(None)
}

/// `â R^max_e b̂` iff for every `[e]φ ∈ Γ`, `[e]φ` at `a` forces `φ` at `b`.
/// Both sides are read over all members of the classes, which agrees with
/// the representative reading whenever the partition respects `Γ`.
pub fn max_filtered_relation(
    model: &Model,
    partition: &Partition,
    gamma: &FormulaSet,
    e: &IndexTerm,
) -> Result<Relation> {
    if let Some((class, formula)) = respect_violation(model, partition, gamma)? {
        return Err(Error::PartitionDoesNotRespectGamma { class, formula });
    }
    let k = partition.len();
    let mut out = Relation::total(k);
    for (t, body) in gamma.boxed() {
        if t != e {
            continue;
        }
        let boxed = model.extension(&crate::syntax::Formula::boxed(t.clone(), body.clone()))?;
        let phi = model.extension(body)?;
        for (a, ca) in partition.classes().iter().enumerate() {
            if ca.intersection(boxed).is_empty() {
                continue;
            }
            for (b, cb) in partition.classes().iter().enumerate() {
                if !cb.is_subset(phi) {
                    out.remove(a, b);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::induced_equivalence;
    use crate::semantics::{Frame, Valuation};
    use crate::syntax::{parse_formula, sub_closure, Formula, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    fn chain_model(p: &[usize]) -> Model {
        let v: Valuation = [("p".to_string(), p.iter().copied().collect())].into_iter().collect();
        Model::new(Frame::unimodal(3, "r", [(0, 1), (1, 2)]).unwrap(), v).unwrap()
    }

    fn r() -> IndexTerm {
        IndexTerm::atom("r")
    }

    #[test]
    fn min_on_folded_chain() {
        let m = chain_model(&[]);
        let part = Partition::from_classes(3, &[vec![0, 2], vec![1]]).unwrap();
        let min = min_filtered_relation(&m, &part, &r()).unwrap();
        assert_eq!(min, Relation::from_pairs(2, [(0, 1), (1, 0)]).unwrap());
    }

    #[test]
    fn min_on_discrete_partition_is_a_copy() {
        let m = chain_model(&[]);
        let min = min_filtered_relation(&m, &Partition::discrete(3), &r()).unwrap();
        assert_eq!(&min, m.frame.explicit(&r()).unwrap());
        let empty = Model::new(Frame::unimodal(3, "r", []).unwrap(), Valuation::new()).unwrap();
        assert!(min_filtered_relation(&empty, &Partition::single(3), &r()).unwrap().is_empty());
    }

    #[test]
    fn max_without_boxes_is_total() {
        let m = chain_model(&[1]);
        let gamma: FormulaSet = [f("p")].into_iter().collect();
        let part = induced_equivalence(&m, &gamma).unwrap();
        let max = max_filtered_relation(&m, &part, &gamma, &r()).unwrap();
        assert_eq!(max, Relation::total(part.len()));
    }

    #[test]
    fn max_on_chain_excludes_edge_back_to_non_p_class() {
        let m = chain_model(&[1, 2]);
        let gamma = sub_closure(&[f("[r]p")].into_iter().collect());
        let part = induced_equivalence(&m, &gamma).unwrap();
        assert_eq!(part.to_lists(), vec![vec![0], vec![1, 2]]);
        let max = max_filtered_relation(&m, &part, &gamma, &r()).unwrap();
        assert!(!max.contains(1, 0));
        assert!(max.contains(1, 1));
        assert!(max.contains(0, 1));
        assert!(min_filtered_relation(&m, &part, &r()).unwrap().is_subset(&max));
    }

    #[test]
    fn max_requires_respecting_partition() {
        let m = chain_model(&[1]);
        let gamma: FormulaSet = [f("p")].into_iter().collect();
        let err = max_filtered_relation(&m, &Partition::single(3), &gamma, &r()).unwrap_err();
        assert_eq!(
            err,
            Error::PartitionDoesNotRespectGamma {
                class: 0,
                formula: "p".into()
            }
        );
    }
}
