use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::formula::FOFormula;
use crate::syntax::{density_axiom, reflexivity_axiom, symmetry_axiom, Formula, IndexTerm};

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn var_name(i: usize) -> String {
    NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())
}

/// Seeded generator of MFP sentences. Node kinds are drawn with weights
/// 40 guarded universal, 30 `∧`/`∨`, 20 `∃`/`∀`, 10 atomic.
pub struct MfpGenerator {
    rng: ChaCha8Rng,
    symbols: Vec<String>,
    max_depth: usize,
}

impl MfpGenerator {
    pub fn new(seed: u64, symbols: &[&str], max_depth: usize) -> Self {
        assert!(!symbols.is_empty() && max_depth >= 1);
        MfpGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            max_depth,
        }
    }

    pub fn sentence(&mut self) -> FOFormula {
        let depth = self.max_depth;
        self.node(depth, &mut Vec::new())
    }

    fn symbol(&mut self) -> String {
        let i = self.rng.gen_range(0..self.symbols.len());
        self.symbols[i].clone()
    }

    fn pick(&mut self, bound: &[String]) -> String {
        bound[self.rng.gen_range(0..bound.len())].clone()
    }

    fn atomic(&mut self, bound: &[String]) -> FOFormula {
        let (x, y) = (self.pick(bound), self.pick(bound));
        if self.rng.gen_bool(0.8) {
            FOFormula::Rel(self.symbol(), x, y)
        } else {
            FOFormula::Eq(x, y)
        }
    }

    fn node(&mut self, depth: usize, bound: &mut Vec<String>) -> FOFormula {
        if depth == 0 {
            return self.atomic(bound);
        }
        // With nothing bound only binders are possible.
        let roll = if bound.is_empty() {
            self.rng.gen_range(0..60)
        } else {
            self.rng.gen_range(0..100)
        };
        match roll {
            0..=39 => {
                let (x, y) = (var_name(bound.len()), var_name(bound.len() + 1));
                let eq_guard = self.rng.gen_bool(0.25);
                bound.push(x.clone());
                bound.push(y.clone());
                let body = self.node(depth - 1, bound);
                bound.truncate(bound.len() - 2);
                if eq_guard {
                    FOFormula::guarded_eq(&x, &y, body)
                } else {
                    let s = self.symbol();
                    FOFormula::guarded(&s, &x, &y, body)
                }
            }
            40..=59 => {
                let v = var_name(bound.len());
                bound.push(v.clone());
                let body = self.node(depth - 1, bound);
                bound.pop();
                if self.rng.gen_bool(0.5) {
                    FOFormula::exists(&v, body)
                } else {
                    FOFormula::forall(&v, body)
                }
            }
            60..=89 => {
                let a = self.node(depth - 1, bound);
                let b = self.node(depth - 1, bound);
                if self.rng.gen_bool(0.5) {
                    FOFormula::and(a, b)
                } else {
                    FOFormula::or(a, b)
                }
            }
            _ => self.atomic(bound),
        }
    }
}

pub fn reflexivity_fo(symbol: &str) -> FOFormula {
    FOFormula::forall("x", FOFormula::rel(symbol, "x", "x"))
}

pub fn symmetry_fo(symbol: &str) -> FOFormula {
    FOFormula::guarded(symbol, "x", "y", FOFormula::rel(symbol, "y", "x"))
}

pub fn density_fo(symbol: &str) -> FOFormula {
    FOFormula::guarded(
        symbol,
        "x",
        "y",
        FOFormula::exists(
            "z",
            FOFormula::and(FOFormula::rel(symbol, "x", "z"), FOFormula::rel(symbol, "z", "y")),
        ),
    )
}

/// Not in the fragment: the guard body is an implication.
pub fn transitivity_fo(symbol: &str) -> FOFormula {
    FOFormula::forall(
        "x",
        FOFormula::forall(
            "y",
            FOFormula::forall(
                "z",
                FOFormula::implies(
                    FOFormula::and(FOFormula::rel(symbol, "x", "y"), FOFormula::rel(symbol, "y", "z")),
                    FOFormula::rel(symbol, "x", "z"),
                ),
            ),
        ),
    )
}

/// Modal axioms paired with their first-order frame correspondents over the
/// relation of atom `r` (symbol `R`).
pub fn correspondence_fixtures() -> Vec<(&'static str, Formula, FOFormula)> {
    let r = IndexTerm::atom("r");
    vec![
        ("reflexivity", reflexivity_axiom(&r), reflexivity_fo("R")),
        ("symmetry", symmetry_axiom(&r), symmetry_fo("R")),
        ("density", density_axiom(&r), density_fo("R")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::mfp::{fo_sentence_holds, mfp_member};
    use crate::semantics::{enumerate_frames, frame_valid};

    #[test]
    fn generated_sentences_are_mfp() {
        let mut g = MfpGenerator::new(7, &["R", "S"], 3);
        for _ in 0..500 {
            let s = g.sentence();
            assert!(mfp_member(&s), "{s}");
            assert!(s.is_sentence(), "{s}");
            assert_eq!(s.to_string().parse::<FOFormula>().unwrap(), s);
        }
    }

    #[test]
    fn generator_is_reproducible() {
        let a: Vec<_> = (0..20).map({
            let mut g = MfpGenerator::new(3, &["R"], 3);
            move |_| g.sentence()
        }).collect();
        let mut g = MfpGenerator::new(3, &["R"], 3);
        assert!(a.iter().all(|s| *s == g.sentence()));
    }

    #[test]
    fn fixtures_are_classified() {
        for (_, _, fo) in correspondence_fixtures() {
            assert!(mfp_member(&fo));
        }
        assert!(!mfp_member(&transitivity_fo("R")));
    }

    #[test]
    fn modal_and_fo_forms_agree_on_small_frames() {
        let limits = Limits::default();
        let idx = [IndexTerm::atom("r")];
        for n in 1..=3 {
            for frame in enumerate_frames(n, &idx, &limits).unwrap() {
                for (name, modal, fo) in correspondence_fixtures() {
                    let modal_ok = frame_valid(&frame, &modal, &limits).unwrap().is_valid();
                    assert_eq!(modal_ok, fo_sentence_holds(&frame, &fo).unwrap(), "{name} on {frame:?}");
                }
            }
        }
    }
}
