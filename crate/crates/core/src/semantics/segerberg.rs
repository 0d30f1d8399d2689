use std::fmt;

use rayon::prelude::*;

use super::eval::frame_valid;
use super::expand::{frame_code_bits, frame_from_code};
use super::frame::Frame;
use crate::error::Result;
use crate::limits::Limits;
use crate::syntax::{instantiate_segerberg, IndexTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Iff,
    Implies,
}

/// One statement of the correspondence table for Segerberg's axioms on
/// bimodal frames `(W, R, S)`.
#[derive(Debug, Clone)]
pub struct SegerbergRow {
    pub label: &'static str,
    pub claim: Claim,
    /// Frames where the claimed direction(s) fail.
    pub violations: u64,
    pub first_violation: Option<Frame>,
    /// For one-directional claims, a frame where the converse fails.
    pub converse_counterexample: Option<Frame>,
}

impl SegerbergRow {
    pub fn holds(&self) -> bool {
        self.violations == 0
            && (self.claim == Claim::Iff || self.converse_counterexample.is_some())
    }
}

#[derive(Debug, Clone)]
pub struct SegerbergTable {
    pub max_worlds: usize,
    pub frames: u64,
    pub rows: Vec<SegerbergRow>,
}

impl SegerbergTable {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(SegerbergRow::holds)
    }
}

fn pairs(frame: &Frame, t: &IndexTerm) -> Vec<(usize, usize)> {
    frame.explicit(t).map(|r| r.pairs().collect()).unwrap_or_default()
}

impl fmt::Display for SegerbergTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} bimodal frames with at most {} worlds", self.frames, self.max_worlds)?;
        let (r, s) = (IndexTerm::atom("r"), IndexTerm::atom("s"));
        for row in &self.rows {
            let arrow = if row.claim == Claim::Iff { "<=>" } else { "=>" };
            write!(f, "{:<40} [{arrow}] violations: {}", row.label, row.violations)?;
            if let Some(c) = &row.converse_counterexample {
                write!(
                    f,
                    "; converse fails on {} worlds, R={:?}, S={:?}",
                    c.world_count(),
                    pairs(c, &r),
                    pairs(c, &s)
                )?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.holds() { "TABLE CONFIRMED" } else { "TABLE REFUTED" })
    }
}

const A1: u8 = 1;
const A2: u8 = 2;
const A3: u8 = 4;
const S_SUP_R: u8 = 8;
const S_SUP_RS: u8 = 16;
const S_SUP_RPLUS: u8 = 32;
const S_SUB_RPLUS: u8 = 64;

fn flags(frame: &Frame, axioms: &[crate::syntax::Formula; 3], limits: &Limits) -> Result<u8> {
    let (r, s) = (IndexTerm::atom("r"), IndexTerm::atom("s"));
    let rr = frame.relation_of(&r)?;
    let ss = frame.relation_of(&s)?;
    let plus = rr.transitive_closure();
    let mut out = 0;
    for (bit, ax) in [A1, A2, A3].into_iter().zip(axioms) {
        if frame_valid(frame, ax, limits)?.is_valid() {
            out |= bit;
        }
    }
    let conditions = [
        (S_SUP_R, rr.is_subset(&ss)),
        (S_SUP_RS, rr.compose(&ss).is_subset(&ss)),
        (S_SUP_RPLUS, plus.is_subset(&ss)),
        (S_SUB_RPLUS, ss.is_subset(&plus)),
    ];
    for (bit, holds) in conditions {
        if holds {
            out |= bit;
        }
    }
    Ok(out)
}

/// Checks every statement of the table on all frames `(W, R, S)` with at
/// most `max_worlds` worlds, in enumeration order.
pub fn segerberg_table(max_worlds: usize, limits: &Limits) -> Result<SegerbergTable> {
    let (r, s) = (IndexTerm::atom("r"), IndexTerm::atom("s"));
    let axioms = instantiate_segerberg(&r, &s);
    let indices = [r, s];
    // (label, claim, left side, right side)
    type Side = fn(u8) -> bool;
    let statements: [(&'static str, Claim, Side, Side); 5] = [
        ("(1) F |= A1  vs  S ⊇ R", Claim::Iff, |f| f & A1 != 0, |f| f & S_SUP_R != 0),
        ("(2) F |= A2  vs  S ⊇ R∘S", Claim::Iff, |f| f & A2 != 0, |f| f & S_SUP_RS != 0),
        ("(3) F |= A1 ∧ A2  vs  S ⊇ R⁺", Claim::Implies, |f| f & (A1 | A2) == A1 | A2, |f| f & S_SUP_RPLUS != 0),
        ("(4) F |= A3  vs  S ⊆ R⁺", Claim::Implies, |f| f & A3 != 0, |f| f & S_SUB_RPLUS != 0),
        (
            "(5) F |= A1 ∧ A2 ∧ A3  vs  S = R⁺",
            Claim::Iff,
            |f| f & (A1 | A2 | A3) == A1 | A2 | A3,
            |f| f & (S_SUP_RPLUS | S_SUB_RPLUS) == S_SUP_RPLUS | S_SUB_RPLUS,
        ),
    ];
    let mut rows: Vec<SegerbergRow> = statements
        .iter()
        .map(|(label, claim, _, _)| SegerbergRow {
            label,
            claim: *claim,
            violations: 0,
            first_violation: None,
            converse_counterexample: None,
        })
        .collect();
    let mut frames = 0;
    for n in 1..=max_worlds {
        let bits = frame_code_bits(n, 2, limits)?;
        let table: Vec<u8> = (0..1u64 << bits)
            .into_par_iter()
            .map(|code| flags(&frame_from_code(n, &indices, code), &axioms, limits))
            .collect::<Result<_>>()?;
        frames += table.len() as u64;
        for (code, f) in table.into_iter().enumerate() {
            for (row, (_, claim, left, right)) in rows.iter_mut().zip(&statements) {
                let (l, r) = (left(f), right(f));
                let violated = match claim {
                    Claim::Iff => l != r,
                    Claim::Implies => l && !r,
                };
                if violated {
                    row.violations += 1;
                    row.first_violation
                        .get_or_insert_with(|| frame_from_code(n, &indices, code as u64));
                }
                if *claim == Claim::Implies && r && !l {
                    row.converse_counterexample
                        .get_or_insert_with(|| frame_from_code(n, &indices, code as u64));
                }
            }
        }
    }
    Ok(SegerbergTable {
        max_worlds,
        frames,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_on_two_worlds() {
        let t = segerberg_table(2, &Limits::default()).unwrap();
        assert_eq!(t.frames, 4 + 256);
        assert!(t.rows.iter().all(|r| r.violations == 0));
        assert!(t.rows[3].converse_counterexample.is_some());
    }

    #[test]
    fn closure_inclusion_does_not_give_a3() {
        let (r, s) = (IndexTerm::atom("r"), IndexTerm::atom("s"));
        let frame = Frame::unimodal(3, "r", [(0, 1), (1, 2)])
            .unwrap()
            .with_relation(s, crate::semantics::Relation::from_pairs(3, [(0, 2)]).unwrap())
            .unwrap();
        let f = flags(&frame, &instantiate_segerberg(&r, &IndexTerm::atom("s")), &Limits::default()).unwrap();
        assert_eq!(f & A3, 0);
        assert_eq!(f & S_SUB_RPLUS, S_SUB_RPLUS);
        assert_eq!(f & A1, 0);
    }
}
