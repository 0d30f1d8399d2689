use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::semantics::{Model, WorldSet};
use crate::syntax::FormulaSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `∼_Γ` on the source model.
    InducedBy(FormulaSet),
    /// `∼_Φ` for an explicitly recorded `Φ`.
    Through(FormulaSet),
    Refinement,
    Explicit,
}

/// An equivalence on `0..world_count`. Classes are numbered by their least
/// member, so class `c` is represented by `classes[c].first()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    world_count: usize,
    class_of: Vec<usize>,
    classes: Vec<WorldSet>,
    pub provenance: Provenance,
}

impl Partition {
    /// Groups worlds by equal keys.
    pub fn from_keys<K: Eq + Hash>(keys: &[K], provenance: Provenance) -> Self {
        let mut ids: HashMap<&K, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut classes: Vec<WorldSet> = Vec::new();
        for (x, k) in keys.iter().enumerate() {
            let next = classes.len();
            let id = *ids.entry(k).or_insert(next);
            if id == next {
                classes.push(WorldSet::EMPTY);
            }
            classes[id].insert(x);
            class_of.push(id);
        }
        Partition {
            world_count: keys.len(),
            class_of,
            classes,
            provenance,
        }
    }

    /// Partition from explicit classes; they must be nonempty, disjoint and
    /// cover `0..world_count`. Classes are renumbered by least member.
    pub fn from_classes(world_count: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut keys = vec![usize::MAX; world_count];
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::Malformed(format!("class {i} is empty")));
            }
            for &x in class {
                if x >= world_count {
                    return Err(Error::Malformed(format!("world {x} outside 0..{world_count}")));
                }
                if keys[x] != usize::MAX {
                    return Err(Error::Malformed(format!("world {x} lies in two classes")));
                }
                keys[x] = i;
            }
        }
        if let Some(x) = keys.iter().position(|&k| k == usize::MAX) {
            return Err(Error::Malformed(format!("world {x} lies in no class")));
        }
        Ok(Partition::from_keys(&keys, Provenance::Explicit))
    }

    pub fn discrete(world_count: usize) -> Self {
        Partition::from_keys(&(0..world_count).collect::<Vec<_>>(), Provenance::Explicit)
    }

    pub fn single(world_count: usize) -> Self {
        Partition::from_keys(&vec![(); world_count], Provenance::Explicit)
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[WorldSet] {
        &self.classes
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class].first().expect("classes are nonempty")
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.world_count == other.world_count
            && self
                .classes
                .iter()
                .all(|c| c.is_subset(other.classes[other.class_of(c.first().unwrap())]))
    }

    pub fn same_classes(&self, other: &Partition) -> bool {
        self.classes == other.classes
    }

    /// Structural soundness: classes nonempty, disjoint, covering, and
    /// consistent with `class_of`.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = WorldSet::EMPTY;
        for (id, c) in self.classes.iter().enumerate() {
            if c.is_empty() || !c.intersection(seen).is_empty() {
                return false;
            }
            if c.iter().any(|x| x >= self.world_count || self.class_of[x] != id) {
                return false;
            }
            seen = seen.union(*c);
        }
        seen == WorldSet::full(self.world_count) && self.class_of.len() == self.world_count
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(|c| c.iter().collect()).collect()
    }
}

/// `x ∼_Γ y` iff `x` and `y` agree on every member of `Γ`.
pub fn induced_equivalence(model: &Model, gamma: &FormulaSet) -> Result<Partition> {
    let keys = model.signatures(gamma)?;
    Ok(Partition::from_keys(&keys, Provenance::InducedBy(gamma.clone())))
}

/// `∼_Φ`, recorded as a definable partition through `Φ`.
pub fn equivalence_through(model: &Model, phi: &FormulaSet) -> Result<Partition> {
    let keys = model.signatures(phi)?;
    Ok(Partition::from_keys(&keys, Provenance::Through(phi.clone())))
}
