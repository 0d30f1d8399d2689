//! Seeded random frames, models and formulas for property suites and demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semantics::{BaseLogic, Frame, Model, Relation, Valuation, WorldSet};
use crate::syntax::{sub_closure, Formula, FormulaSet, IndexTerm};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `lo..=hi`.
    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn world_set(&mut self, n: usize, density: f64) -> WorldSet {
        (0..n).filter(|_| self.rng.gen_bool(density)).collect()
    }

    /// Each pair present independently with probability `density`.
    pub fn relation(&mut self, n: usize, density: f64) -> Relation {
        let rows = (0..n).map(|_| self.world_set(n, density).0).collect();
        Relation::from_rows(n, rows)
    }

    /// A relation satisfying the frame condition of `logic`. Convergent
    /// relations are rejection-sampled, falling back to the total relation.
    pub fn relation_for(&mut self, logic: BaseLogic, n: usize) -> Relation {
        let density = self.rng.gen_range(0.1..0.5);
        let r = self.relation(n, density);
        match logic {
            BaseLogic::K => r,
            BaseLogic::T => r.union(&Relation::identity(n)),
            BaseLogic::K4 => r.transitive_closure(),
            BaseLogic::S4 => r.union(&Relation::identity(n)).transitive_closure(),
            BaseLogic::S5 => r
                .union(&r.converse())
                .union(&Relation::identity(n))
                .transitive_closure(),
            BaseLogic::K2 => self.convergent(n, 64).unwrap_or_else(|| Relation::total(n)),
        }
    }

    /// Rejection sampling with up to `attempts` draws.
    pub fn convergent(&mut self, n: usize, attempts: usize) -> Option<Relation> {
        (0..attempts).find_map(|_| {
            let density = self.rng.gen_range(0.05..0.6);
            Some(self.relation(n, density)).filter(Relation::is_convergent)
        })
    }

    pub fn valuation(&mut self, n: usize, vars: &[&str]) -> Valuation {
        vars.iter()
            .map(|v| (v.to_string(), self.world_set(n, 0.5)))
            .collect()
    }

    pub fn frame(&mut self, n: usize, indices: &[IndexTerm]) -> Frame {
        let mut frame = Frame::new(n).expect("sampled sizes stay within limits");
        for t in indices {
            let density = self.rng.gen_range(0.1..0.5);
            let r = self.relation(n, density);
            frame.set_relation(t.clone(), r).expect("fresh relation fits the frame");
        }
        frame
    }

    pub fn model(&mut self, frame: Frame, vars: &[&str]) -> Model {
        let valuation = self.valuation(frame.world_count(), vars);
        Model::new(frame, valuation).expect("valuation fits the frame")
    }

    pub fn formula(&mut self, vars: &[&str], indices: &[IndexTerm], depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return match vars.choose(&mut self.rng) {
                Some(v) if self.rng.gen_bool(0.9) => Formula::var(*v),
                _ => Formula::Bot,
            };
        }
        let sub = |s: &mut Self| s.formula(vars, indices, depth - 1);
        match self.rng.gen_range(0..100) {
            0..=19 => Formula::not(sub(self)),
            20..=39 => Formula::implies(sub(self), sub(self)),
            40..=54 => Formula::and(sub(self), sub(self)),
            55..=64 => Formula::or(sub(self), sub(self)),
            _ => match indices.choose(&mut self.rng) {
                Some(t) => Formula::boxed(t.clone(), sub(self)),
                None => Formula::not(sub(self)),
            },
        }
    }

    /// A Sub-closed set with at most `max_len` members.
    pub fn gamma(
        &mut self,
        vars: &[&str],
        indices: &[IndexTerm],
        max_len: usize,
        depth: usize,
    ) -> FormulaSet {
        let mut gamma = sub_closure(&FormulaSet::new());
        for _ in 0..8 {
            let f = self.formula(vars, indices, depth);
            let candidate: FormulaSet = gamma.iter().cloned().chain(std::iter::once(f)).collect();
            let candidate = sub_closure(&candidate);
            if candidate.len() <= max_len {
                gamma = candidate;
            }
        }
        if gamma.is_empty() {
            gamma = sub_closure(&std::iter::once(Formula::var(vars.first().copied().unwrap_or("p"))).collect());
        }
        gamma
    }
}
