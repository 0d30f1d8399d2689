use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use super::relation::{Relation, WorldSet, MAX_WORLDS};
use crate::error::{Error, Result};
use crate::syntax::{Formula, FormulaSet, IndexTerm};

/// A finite Kripke frame. Relations are keyed by index term; an explicit
/// entry always shadows the compositional reading of its term, which is how
/// generic frames `(W, R, S)` with `S ≠ R⁺` are represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    world_count: usize,
    relations: BTreeMap<IndexTerm, Relation>,
}

impl Frame {
    pub fn new(world_count: usize) -> Result<Self> {
        if world_count == 0 {
            return Err(Error::InvalidFrame("frames are nonempty".into()));
        }
        if world_count > MAX_WORLDS {
            return Err(Error::InvalidFrame(format!(
                "{world_count} worlds exceeds the limit of {MAX_WORLDS}"
            )));
        }
        Ok(Frame {
            world_count,
            relations: BTreeMap::new(),
        })
    }

    /// Frame with a single relation under the atom `index`.
    pub fn unimodal(
        world_count: usize,
        index: &str,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut f = Frame::new(world_count)?;
        f.set_relation(IndexTerm::atom(index), Relation::from_pairs(world_count, pairs)?)?;
        Ok(f)
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn worlds(&self) -> WorldSet {
        WorldSet::full(self.world_count)
    }

    pub fn set_relation(&mut self, index: IndexTerm, relation: Relation) -> Result<()> {
        if relation.size() != self.world_count {
            return Err(Error::WorldCountMismatch {
                expected: self.world_count,
                found: relation.size(),
            });
        }
        self.relations.insert(index, relation);
        Ok(())
    }

    pub fn with_relation(mut self, index: IndexTerm, relation: Relation) -> Result<Self> {
        self.set_relation(index, relation)?;
        Ok(self)
    }

    pub fn explicit(&self, index: &IndexTerm) -> Option<&Relation> {
        self.relations.get(index)
    }

    pub fn relations(&self) -> &BTreeMap<IndexTerm, Relation> {
        &self.relations
    }

    /// Explicitly interpreted index terms.
    pub fn alphabet(&self) -> BTreeSet<IndexTerm> {
        self.relations.keys().cloned().collect()
    }

    /// Atomic symbols of all explicit entries.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.relations.keys().flat_map(IndexTerm::atoms).collect()
    }

    /// The relation denoted by `index`: the explicit entry when present,
    /// otherwise computed from the parts of the term.
    pub fn relation_of(&self, index: &IndexTerm) -> Result<Cow<'_, Relation>> {
        if let Some(r) = self.relations.get(index) {
            return Ok(Cow::Borrowed(r));
        }
        self.compositional(index).map(Cow::Owned)
    }

    /// The relation of `index` computed from its immediate parts, ignoring any
    /// explicit entry for `index` itself.
    pub fn compositional(&self, index: &IndexTerm) -> Result<Relation> {
        match index {
            IndexTerm::Atom(a) => Err(Error::UninterpretedIndex(a.clone())),
            IndexTerm::Comp(l, r) => Ok(self.relation_of(l)?.compose(&*self.relation_of(r)?)),
            IndexTerm::Union(l, r) => Ok(self.relation_of(l)?.union(&*self.relation_of(r)?)),
            IndexTerm::Plus(inner) => Ok(self.relation_of(inner)?.transitive_closure()),
        }
    }

    /// Adds explicit entries for the given terms (no-op for terms already
    /// present), so later evaluation avoids recomputation.
    pub fn materialize<'a>(&mut self, terms: impl IntoIterator<Item = &'a IndexTerm>) -> Result<()> {
        for t in terms {
            if !self.relations.contains_key(t) {
                let r = self.compositional(t)?;
                self.relations.insert(t.clone(), r);
            }
        }
        Ok(())
    }

    /// Frame restricted to the given explicit entries.
    pub fn reduct(&self, keep: &BTreeSet<IndexTerm>) -> Frame {
        Frame {
            world_count: self.world_count,
            relations: self
                .relations
                .iter()
                .filter(|(k, _)| keep.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

pub fn relation_of<'a>(frame: &'a Frame, index: &IndexTerm) -> Result<Cow<'a, Relation>> {
    frame.relation_of(index)
}

pub type Valuation = BTreeMap<String, WorldSet>;

/// A frame together with a valuation; variables absent from the valuation
/// are false everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    valuation: Valuation,
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Self> {
        let full = frame.worlds();
        for (v, set) in &valuation {
            if !set.is_subset(full) {
                return Err(Error::InvalidFrame(format!(
                    "valuation of `{v}` mentions worlds outside 0..{}",
                    frame.world_count()
                )));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn world_count(&self) -> usize {
        self.frame.world_count()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn value(&self, var: &str) -> WorldSet {
        self.valuation.get(var).copied().unwrap_or_default()
    }

    pub fn set_value(&mut self, var: impl Into<String>, worlds: WorldSet) {
        self.valuation
            .insert(var.into(), worlds.intersection(self.frame.worlds()));
    }

    /// Set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> Result<WorldSet> {
        let n = self.frame.world_count();
        Ok(match f {
            Formula::Bot => WorldSet::EMPTY,
            Formula::Var(v) => self.value(v),
            Formula::Implies(l, r) => self.extension(l)?.complement(n).union(self.extension(r)?),
            Formula::Box(t, body) => {
                let rel = self.frame.relation_of(t)?;
                box_extension(&rel, self.extension(body)?)
            }
        })
    }

    pub fn truth(&self, world: usize, f: &Formula) -> Result<bool> {
        if world >= self.world_count() {
            return Err(Error::InvalidFrame(format!(
                "world {world} outside 0..{}",
                self.world_count()
            )));
        }
        Ok(self.extension(f)?.contains(world))
    }

    pub fn is_valid(&self, f: &Formula) -> Result<bool> {
        Ok(self.extension(f)? == self.frame.worlds())
    }

    /// Truth vector of each world on the members of `gamma`, in order.
    pub fn signatures(&self, gamma: &FormulaSet) -> Result<Vec<Vec<bool>>> {
        let exts = gamma
            .iter()
            .map(|f| self.extension(f))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.world_count())
            .map(|x| exts.iter().map(|e| e.contains(x)).collect())
            .collect())
    }
}

/// `{x | every R-successor of x lies in body}`
pub fn box_extension(rel: &Relation, body: WorldSet) -> WorldSet {
    let mut out = WorldSet::EMPTY;
    for (x, &row) in rel.rows().iter().enumerate() {
        if row & !body.0 == 0 {
            out.insert(x);
        }
    }
    out
}

pub fn truth(model: &Model, world: usize, f: &Formula) -> Result<bool> {
    model.truth(world, f)
}

pub fn model_valid(model: &Model, f: &Formula) -> Result<bool> {
    model.is_valid(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{instantiate_segerberg, parse_formula, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    fn r() -> IndexTerm {
        IndexTerm::atom("r")
    }

    fn model(frame: Frame, val: &[(&str, &[usize])]) -> Model {
        let valuation = val
            .iter()
            .map(|(v, ws)| (v.to_string(), ws.iter().copied().collect()))
            .collect();
        Model::new(frame, valuation).unwrap()
    }

    fn chain3() -> Frame {
        Frame::unimodal(3, "r", [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn relation_of_composite_terms() {
        let frame = Frame::new(3)
            .unwrap()
            .with_relation(r(), Relation::from_pairs(3, [(0, 1)]).unwrap())
            .unwrap()
            .with_relation(IndexTerm::atom("s"), Relation::from_pairs(3, [(1, 2)]).unwrap())
            .unwrap();
        let comp = IndexTerm::comp(r(), IndexTerm::atom("s"));
        let union = IndexTerm::union(r(), IndexTerm::atom("s"));
        assert_eq!(*frame.relation_of(&comp).unwrap(), Relation::from_pairs(3, [(0, 2)]).unwrap());
        assert_eq!(
            *frame.relation_of(&union).unwrap(),
            Relation::from_pairs(3, [(0, 1), (1, 2)]).unwrap()
        );
    }

    #[test]
    fn explicit_entry_takes_priority() {
        let s = Relation::from_pairs(3, [(2, 0)]).unwrap();
        let frame = chain3().with_relation(IndexTerm::plus(r()), s.clone()).unwrap();
        assert_eq!(*frame.relation_of(&IndexTerm::plus(r())).unwrap(), s);
        let bimodal = chain3().with_relation(IndexTerm::atom("s"), s.clone()).unwrap();
        assert_eq!(*bimodal.relation_of(&IndexTerm::atom("s")).unwrap(), s);
    }

    #[test]
    fn uninterpreted_index_is_an_error() {
        let err = chain3().relation_of(&IndexTerm::atom("s")).unwrap_err();
        assert_eq!(err, Error::UninterpretedIndex("s".into()));
        let m = model(chain3(), &[]);
        assert!(m.truth(0, &f("[s]p")).is_err());
    }

    #[test]
    fn truth_of_boxes() {
        let m = model(Frame::unimodal(2, "r", [(0, 1)]).unwrap(), &[("p", &[1])]);
        assert!(m.truth(0, &f("[r]p")).unwrap());
        assert!(m.truth(1, &f("[r]p")).unwrap());
    }

    #[test]
    fn plus_box_sees_the_whole_chain() {
        let m = model(chain3(), &[("p", &[1])]);
        assert!(!m.truth(0, &f("[r+]p")).unwrap());
    }

    #[test]
    fn model_validity() {
        let m = model(Frame::unimodal(1, "r", [(0, 0)]).unwrap(), &[]);
        assert!(model_valid(&m, &f("p -> p")).unwrap());

        let frame = chain3();
        let closure = frame.relation_of(&IndexTerm::plus(r())).unwrap().into_owned();
        let oplus = frame.with_relation(IndexTerm::plus(r()), closure).unwrap();
        let m = model(oplus, &[("p", &[1])]);
        let [a1, _, _] = instantiate_segerberg(&r(), &IndexTerm::plus(r()));
        assert!(model_valid(&m, &a1).unwrap());
        let converse = f("[r]p -> [r+]p");
        assert!(!model_valid(&m, &converse).unwrap());
        assert!(!m.truth(0, &converse).unwrap());
    }

    #[test]
    fn frames_are_nonempty() {
        assert!(Frame::new(0).is_err());
        assert!(Frame::new(65).is_err());
    }

    #[test]
    fn valuation_must_stay_in_bounds() {
        let mut val = Valuation::new();
        val.insert("p".into(), WorldSet::singleton(3));
        assert!(Model::new(chain3(), val).is_err());
    }
}
