use std::collections::BTreeMap;

use rayon::prelude::*;

use super::frame::{box_extension, Frame, Valuation};
use super::relation::{Relation, WorldSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::syntax::{Formula, IndexTerm};

#[derive(Debug, Clone, Copy)]
enum Node {
    Bot,
    Var(usize),
    Implies(usize, usize),
    Box(usize, usize),
}

/// A set of formulas flattened against a fixed frame: relations are resolved
/// once and variables are numbered, so evaluation under many valuations is a
/// tight loop over bitsets.
#[derive(Debug, Clone)]
pub struct Compiled {
    world_count: usize,
    vars: Vec<String>,
    relations: Vec<Relation>,
    nodes: Vec<Node>,
    roots: Vec<usize>,
}

impl Compiled {
    pub fn new(frame: &Frame, formulas: &[Formula]) -> Result<Self> {
        let mut vars: Vec<String> = formulas
            .iter()
            .flat_map(Formula::variables)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        vars.dedup();
        let mut c = Compiled {
            world_count: frame.world_count(),
            vars,
            relations: Vec::new(),
            nodes: Vec::new(),
            roots: Vec::new(),
        };
        let mut rel_ids: BTreeMap<IndexTerm, usize> = BTreeMap::new();
        let mut memo: BTreeMap<Formula, usize> = BTreeMap::new();
        for f in formulas {
            let root = c.compile(frame, f, &mut rel_ids, &mut memo)?;
            c.roots.push(root);
        }
        Ok(c)
    }

    fn compile(
        &mut self,
        frame: &Frame,
        f: &Formula,
        rel_ids: &mut BTreeMap<IndexTerm, usize>,
        memo: &mut BTreeMap<Formula, usize>,
    ) -> Result<usize> {
        if let Some(&id) = memo.get(f) {
            return Ok(id);
        }
        let node = match f {
            Formula::Bot => Node::Bot,
            Formula::Var(v) => Node::Var(self.vars.binary_search(v).expect("collected variable")),
            Formula::Implies(l, r) => {
                let l = self.compile(frame, l, rel_ids, memo)?;
                let r = self.compile(frame, r, rel_ids, memo)?;
                Node::Implies(l, r)
            }
            Formula::Box(t, body) => {
                let rel = match rel_ids.get(t) {
                    Some(&id) => id,
                    None => {
                        self.relations.push(frame.relation_of(t)?.into_owned());
                        let id = self.relations.len() - 1;
                        rel_ids.insert(t.clone(), id);
                        id
                    }
                };
                let body = self.compile(frame, body, rel_ids, memo)?;
                Node::Box(rel, body)
            }
        };
        self.nodes.push(node);
        let id = self.nodes.len() - 1;
        memo.insert(f.clone(), id);
        Ok(id)
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Extensions of the root formulas, with `values[i]` the extension of
    /// the `i`-th variable.
    pub fn extensions(&self, values: &[WorldSet]) -> Vec<WorldSet> {
        let n = self.world_count;
        let mut ext = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::Bot => WorldSet::EMPTY,
                Node::Var(i) => values[i],
                Node::Implies(l, r) => {
                    let l: WorldSet = ext[l];
                    l.complement(n).union(ext[r])
                }
                Node::Box(rel, body) => box_extension(&self.relations[rel], ext[body]),
            };
            ext.push(v);
        }
        self.roots.iter().map(|&r| ext[r]).collect()
    }

    /// Variable values encoded by a valuation index: bit `i·n + x` sets
    /// variable `i` true at world `x`.
    fn decode(&self, index: u64) -> Vec<WorldSet> {
        let n = self.world_count;
        let mask = WorldSet::full(n).0;
        (0..self.vars.len())
            .map(|i| WorldSet((index >> (i * n)) & mask))
            .collect()
    }

    fn valuation_of(&self, values: &[WorldSet]) -> Valuation {
        self.vars.iter().cloned().zip(values.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameValidity {
    Valid,
    Counterexample { valuation: Valuation, world: usize },
}

impl FrameValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, FrameValidity::Valid)
    }
}

fn valuation_count(world_count: usize, var_count: usize, limits: &Limits) -> Result<u64> {
    let bits = (world_count * var_count) as u64;
    if bits > u64::from(limits.valuation_bits) {
        return Err(Error::CapExceeded {
            what: "valuation enumeration bits",
            required: bits,
            cap: u64::from(limits.valuation_bits),
        });
    }
    Ok(1u64 << bits)
}

/// Exhaustive frame validity over valuations of the variables of `f`.
/// Valuations are enumerated in increasing order of their bit encoding and
/// the first failure is reported with its least failing world.
pub fn frame_valid(frame: &Frame, f: &Formula, limits: &Limits) -> Result<FrameValidity> {
    frame_valid_all(frame, std::slice::from_ref(f), limits).map(|(_, v)| v)
}

/// Validity of every formula in `fs` at once; on failure also reports the
/// position of the first failing formula under the first failing valuation.
pub fn frame_valid_all(
    frame: &Frame,
    fs: &[Formula],
    limits: &Limits,
) -> Result<(usize, FrameValidity)> {
    let compiled = Compiled::new(frame, fs)?;
    let total = valuation_count(frame.world_count(), compiled.vars.len(), limits)?;
    let full = frame.worlds();
    let check = |index: u64| -> Option<(usize, usize)> {
        let exts = compiled.extensions(&compiled.decode(index));
        exts.iter()
            .enumerate()
            .find(|(_, e)| **e != full)
            .map(|(k, e)| (k, e.complement(frame.world_count()).first().unwrap()))
    };
    let hit = if total <= 4096 {
        (0..total).find_map(|i| check(i).map(|h| (i, h)))
    } else {
        (0..total)
            .into_par_iter()
            .find_map_first(|i| check(i).map(|h| (i, h)))
    };
    Ok(match hit {
        None => (0, FrameValidity::Valid),
        Some((index, (k, world))) => (
            k,
            FrameValidity::Counterexample {
                valuation: compiled.valuation_of(&compiled.decode(index)),
                world,
            },
        ),
    })
}
