use std::collections::BTreeSet;

use super::formula::{Formula, IndexTerm};

/// A finite set of formulas kept in canonical order (lexicographic on the
/// printed form), so that everything derived from it is deterministic.
#[derive(Debug, Clone, Default)]
pub struct FormulaSet {
    elements: Vec<Formula>,
    closed: bool,
}

/// Equality is on the elements only; the closure flag is a cached fact.
impl PartialEq for FormulaSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FormulaSet {}

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.elements
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.position(f).is_some()
    }

    /// Position in canonical order.
    pub fn position(&self, f: &Formula) -> Option<usize> {
        let key = f.to_string();
        self.elements
            .binary_search_by(|e| e.to_string().cmp(&key).then_with(|| e.cmp(f)))
            .ok()
    }

    /// Whether Sub-closure has been established for this set.
    pub fn closed_flag(&self) -> bool {
        self.closed
    }

    /// Recomputes Sub-closure from scratch.
    pub fn is_sub_closed(&self) -> bool {
        self.elements.iter().all(|f| {
            let mut ok = true;
            f.walk(&mut |g| ok &= self.contains(g));
            ok
        })
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        let key = f.to_string();
        match self
            .elements
            .binary_search_by(|e| e.to_string().cmp(&key).then_with(|| e.cmp(&f)))
        {
            Ok(_) => false,
            Err(at) => {
                self.elements.insert(at, f);
                self.closed = false;
                true
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.elements.iter().flat_map(Formula::variables).collect()
    }

    pub fn indices(&self) -> BTreeSet<IndexTerm> {
        self.elements.iter().flat_map(Formula::indices).collect()
    }

    /// Boxed members `[e]φ` with their index and body.
    pub fn boxed(&self) -> impl Iterator<Item = (&IndexTerm, &Formula)> {
        self.elements.iter().filter_map(|f| match f {
            Formula::Box(t, body) => Some((t, body.as_ref())),
            _ => None,
        })
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.elements
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        let mut keyed: Vec<(String, Formula)> =
            iter.into_iter().map(|f| (f.to_string(), f)).collect();
        keyed.sort();
        keyed.dedup();
        FormulaSet {
            elements: keyed.into_iter().map(|(_, f)| f).collect(),
            closed: false,
        }
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// Smallest Sub-closed superset of `gamma`.
pub fn sub_closure(gamma: &FormulaSet) -> FormulaSet {
    let mut all = Vec::new();
    for f in gamma {
        f.walk(&mut |g| all.push(g.clone()));
    }
    let mut closed: FormulaSet = all.into_iter().collect();
    closed.closed = true;
    closed
}

/// `Sub(φ)` as a closed set.
pub fn subformulas(f: &Formula) -> FormulaSet {
    sub_closure(&std::iter::once(f.clone()).collect())
}
