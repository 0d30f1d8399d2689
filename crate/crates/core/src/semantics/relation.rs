use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on the number of worlds; rows are single machine words.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds drawn from `0..64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet(pub u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        WorldSet(1u64 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 >> x & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: WorldSet) -> Self {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> Self {
        WorldSet(self.0 & other.0)
    }

    /// Complement within `0..n`.
    pub fn complement(self, n: usize) -> Self {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `0..size`, stored as one successor bitset per world.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        assert!(size <= MAX_WORLDS, "relation over more than {MAX_WORLDS} worlds");
        Relation {
            size,
            rows: vec![0; size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    pub fn total(size: usize) -> Self {
        let full = WorldSet::full(size).0;
        Relation {
            size,
            rows: vec![full; size],
        }
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if size > MAX_WORLDS {
            return Err(Error::InvalidFrame(format!(
                "{size} worlds exceeds the limit of {MAX_WORLDS}"
            )));
        }
        let mut r = Relation::empty(size);
        for (x, y) in pairs {
            if x >= size || y >= size {
                return Err(Error::InvalidFrame(format!(
                    "pair ({x},{y}) outside 0..{size}"
                )));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// Relation from row bitsets; bits at or above `size` are dropped.
    pub fn from_rows(size: usize, rows: Vec<u64>) -> Self {
        assert_eq!(rows.len(), size);
        let mask = WorldSet::full(size).0;
        Relation {
            size,
            rows: rows.into_iter().map(|r| r & mask).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.size && y < self.size && self.rows[x] >> y & 1 == 1
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1u64 << y;
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        self.rows[x] &= !(1u64 << y);
    }

    pub fn successors(&self, x: usize) -> WorldSet {
        WorldSet(self.rows[x])
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |x| WorldSet(self.rows[x]).iter().map(move |y| (x, y)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.size == other.size
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.size, other.size);
        Relation {
            size: self.size,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    /// `x (R;S) y` iff `x R z S y` for some `z`.
    pub fn compose(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.size, other.size);
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                WorldSet(row)
                    .iter()
                    .fold(0u64, |acc, z| acc | other.rows[z])
            })
            .collect();
        Relation {
            size: self.size,
            rows,
        }
    }

    /// Smallest transitive superset (Warshall over bit rows).
    pub fn transitive_closure(&self) -> Relation {
        let mut rows = self.rows.clone();
        for k in 0..self.size {
            let row_k = rows[k];
            for row in rows.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        Relation {
            size: self.size,
            rows,
        }
    }

    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (x, y) in self.pairs() {
            out.insert(y, x);
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Church–Rosser: any two successors of a world share a successor.
    pub fn is_convergent(&self) -> bool {
        (0..self.size).all(|x| {
            let succ = self.successors(x);
            succ.iter().all(|y| {
                succ.iter()
                    .all(|z| self.rows[y] & self.rows[z] != 0)
            })
        })
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

pub fn transitive_closure(r: &Relation) -> Relation {
    r.transitive_closure()
}

pub fn check_convergence(r: &Relation) -> bool {
    r.is_convergent()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn closure_of_chain() {
        let r = rel(3, &[(0, 1), (1, 2)]);
        assert_eq!(transitive_closure(&r), rel(3, &[(0, 1), (1, 2), (0, 2)]));
    }

    #[test]
    fn closure_of_empty_and_loop() {
        assert_eq!(transitive_closure(&rel(3, &[])), rel(3, &[]));
        assert_eq!(transitive_closure(&rel(1, &[(0, 0)])), rel(1, &[(0, 0)]));
    }

    #[test]
    fn composition_and_union() {
        let r = rel(3, &[(0, 1)]);
        let s = rel(3, &[(1, 2)]);
        assert_eq!(r.compose(&s), rel(3, &[(0, 2)]));
        assert_eq!(r.union(&s), rel(3, &[(0, 1), (1, 2)]));
    }

    #[test]
    fn convergence_examples() {
        assert!(check_convergence(&rel(3, &[])));
        assert!(!check_convergence(&rel(3, &[(0, 1), (0, 2)])));
        // The joins alone leave world 3 without successors, so the pair
        // (3, 3) seen from 1 has no common successor.
        assert!(!check_convergence(&rel(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])));
        assert!(check_convergence(&rel(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 3)])));
    }

    #[test]
    fn out_of_range_pair_is_rejected() {
        assert!(Relation::from_pairs(2, [(0, 2)]).is_err());
        assert!(Relation::from_pairs(65, []).is_err());
    }

    #[test]
    fn pairs_are_lexicographic() {
        let r = rel(3, &[(2, 0), (0, 2), (0, 1)]);
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 0)]);
    }

    #[test]
    fn world_set_complement_and_iteration() {
        let s: WorldSet = [0, 2].into_iter().collect();
        assert_eq!(s.complement(3), WorldSet::singleton(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(WorldSet::full(64).len(), 64);
    }
}
