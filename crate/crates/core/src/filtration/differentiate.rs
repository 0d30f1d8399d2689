use std::collections::{BTreeMap, BTreeSet};

use super::filtered::{Construction, FilteredModel};
use super::partition::{Partition, Provenance};
use super::relations::image;
use crate::error::Result;
use crate::semantics::{Frame, Model, Relation, Valuation, WorldSet};
use crate::syntax::{Formula, IndexTerm};

/// Quotient of a model by modal equivalence, with a separating formula for
/// every pair of distinct classes.
#[derive(Debug, Clone)]
pub struct Differentiation {
    pub model: Model,
    pub partition: Partition,
    /// `((a, b), δ)` for classes `a < b`: `δ` holds throughout `a` and
    /// fails throughout `b`.
    pub witnesses: Vec<((usize, usize), Formula)>,
}

impl Differentiation {
    pub fn witness(&self, a: usize, b: usize) -> Option<&Formula> {
        self.witnesses
            .iter()
            .find(|((x, y), _)| (*x, *y) == (a, b))
            .map(|(_, f)| f)
    }

    /// Every emitted witness holds at its first class and fails at its second.
    pub fn witnesses_separate(&self) -> bool {
        self.witnesses.iter().all(|((a, b), f)| {
            self.model
                .extension(f)
                .map(|ext| ext.contains(*a) && !ext.contains(*b))
                .unwrap_or(false)
        })
    }
}

struct Refinement<'a> {
    rels: Vec<(IndexTerm, &'a Relation)>,
    vars: Vec<(String, WorldSet)>,
    /// `rounds[k][x]`: block of `x` after `k` refinement steps.
    rounds: Vec<Vec<usize>>,
    memo: BTreeMap<(usize, usize), Formula>,
}

impl<'a> Refinement<'a> {
    fn new(model: &'a Model) -> Self {
        let rels: Vec<(IndexTerm, &Relation)> = model
            .frame
            .relations()
            .iter()
            .map(|(t, r)| (t.clone(), r))
            .collect();
        let vars: Vec<(String, WorldSet)> = model
            .valuation()
            .iter()
            .map(|(v, s)| (v.clone(), *s))
            .collect();
        let n = model.world_count();
        let base: Vec<Vec<bool>> = (0..n)
            .map(|x| vars.iter().map(|(_, s)| s.contains(x)).collect())
            .collect();
        let mut rounds = vec![Partition::from_keys(&base, Provenance::Refinement).class_map().to_vec()];
        loop {
            let prev = rounds.last().unwrap();
            let keys: Vec<(usize, Vec<BTreeSet<usize>>)> = (0..n)
                .map(|x| {
                    let succ = rels
                        .iter()
                        .map(|(_, r)| r.successors(x).iter().map(|y| prev[y]).collect())
                        .collect();
                    (prev[x], succ)
                })
                .collect();
            let next = Partition::from_keys(&keys, Provenance::Refinement).class_map().to_vec();
            let stable = count(&next) == count(prev);
            rounds.push(next);
            if stable {
                break;
            }
        }
        Refinement {
            rels,
            vars,
            rounds,
            memo: BTreeMap::new(),
        }
    }

    fn final_blocks(&self) -> &[usize] {
        self.rounds.last().unwrap()
    }

    fn succ_blocks(&self, x: usize, rel: &Relation, round: usize) -> BTreeMap<usize, usize> {
        // block -> least successor in that block
        let mut out = BTreeMap::new();
        for y in rel.successors(x).iter() {
            out.entry(self.rounds[round][y]).or_insert(y);
        }
        out
    }

    /// A formula true on the block of `x` and false on the block of `y` at
    /// the first round that separates them.
    fn separate(&mut self, x: usize, y: usize) -> Formula {
        if let Some(f) = self.memo.get(&(x, y)) {
            return f.clone();
        }
        let k = (0..self.rounds.len())
            .find(|&k| self.rounds[k][x] != self.rounds[k][y])
            .expect("worlds lie in different blocks");
        let f = if k == 0 {
            let (p, set) = self
                .vars
                .iter()
                .find(|(_, s)| s.contains(x) != s.contains(y))
                .expect("round 0 splits on a variable")
                .clone();
            if set.contains(x) {
                Formula::var(p)
            } else {
                Formula::not(Formula::var(p))
            }
        } else {
            self.separate_at(x, y, k - 1)
                .or_else(|| self.separate_at(y, x, k - 1).map(Formula::not))
                .expect("a successor block tells the worlds apart")
        };
        self.memo.insert((x, y), f.clone());
        f
    }

    /// `<e> ⋀ δ(x', y')` when `x` has an `e`-successor `x'` whose block at
    /// `round` is missing among the successors of `y`.
    fn separate_at(&mut self, x: usize, y: usize, round: usize) -> Option<Formula> {
        let rels = self.rels.clone();
        for (t, rel) in rels {
            let sx = self.succ_blocks(x, rel, round);
            let sy = self.succ_blocks(y, rel, round);
            if let Some((_, &x1)) = sx.iter().find(|(b, _)| !sy.contains_key(b)) {
                let parts: Vec<Formula> = sy.values().map(|&y1| self.separate(x1, y1)).collect();
                return Some(Formula::diamond(t, Formula::conjunction(parts)));
            }
        }
        None
    }
}

fn count(blocks: &[usize]) -> usize {
    blocks.iter().max().map_or(0, |m| m + 1)
}

/// Coarsest partition stable under all relations and respecting the
/// valuation, its quotient model, and separating formulas.
pub fn differentiate(model: &Model) -> Result<Differentiation> {
    let mut refinement = Refinement::new(model);
    let partition = Partition::from_keys(refinement.final_blocks(), Provenance::Refinement);
    let mut frame = Frame::new(partition.len())?;
    for (t, r) in model.frame.relations() {
        frame.set_relation(t.clone(), image(r, &partition))?;
    }
    let valuation: Valuation = model
        .valuation()
        .iter()
        .map(|(v, s)| {
            let classes = (0..partition.len())
                .filter(|&c| s.contains(partition.representative(c)))
                .collect();
            (v.clone(), classes)
        })
        .collect();
    let mut witnesses = Vec::new();
    for a in 0..partition.len() {
        for b in a + 1..partition.len() {
            let f = refinement.separate(partition.representative(a), partition.representative(b));
            witnesses.push(((a, b), f));
        }
    }
    Ok(Differentiation {
        model: Model::new(frame, valuation)?,
        partition,
        witnesses,
    })
}

/// Differentiates the quotient of a filtration and composes the two
/// quotient maps.
pub fn differentiate_filtration(fm: &FilteredModel) -> Result<(FilteredModel, Differentiation)> {
    let d = differentiate(&fm.quotient)?;
    let keys: Vec<usize> = (0..fm.source.world_count())
        .map(|x| d.partition.class_of(fm.partition.class_of(x)))
        .collect();
    let mut partition = Partition::from_keys(&keys, Provenance::Refinement);
    if let Some(t) = &fm.through {
        partition.provenance = Provenance::Through(t.clone());
    }
    let out = FilteredModel {
        quotient: d.model.clone(),
        source: fm.source.clone(),
        gamma: fm.gamma.clone(),
        partition,
        through: fm.through.clone(),
        construction: Construction::Differentiated(Box::new(fm.construction.clone())),
    };
    Ok((out, d))
}
