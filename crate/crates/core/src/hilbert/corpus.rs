use super::check::expand_rboxplus;
use super::script::{Justification, ProofLine, ProofScript};
use crate::semantics::{BaseLogic, LogicSpec};
use crate::syntax::{Formula, IndexTerm, Substitution};

/// Incremental construction of proof scripts. Each step computes its own
/// conclusion; misuse (citing a line of the wrong shape) panics.
#[derive(Debug, Clone)]
pub struct ProofBuilder {
    logic: LogicSpec,
    lines: Vec<ProofLine>,
    note: Option<String>,
}

impl ProofBuilder {
    pub fn new(logic: LogicSpec) -> Self {
        ProofBuilder {
            logic,
            lines: Vec::new(),
            note: None,
        }
    }

    /// Label attached to subsequent lines.
    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine {
            formula,
            justification,
            note: self.note.clone(),
        });
        self.lines.len() - 1
    }

    pub fn premise(&mut self, f: Formula) -> usize {
        self.push(f, Justification::Premise)
    }

    pub fn axiom(&mut self, schema: &str, subst: &[(&str, Formula)]) -> usize {
        let axiom = self
            .logic
            .axiom(schema)
            .unwrap_or_else(|| panic!("`{schema}` is not an axiom of {}", self.logic));
        let subst: Substitution = subst.iter().map(|(v, f)| (v.to_string(), f.clone())).collect();
        self.push(
            subst.apply(&axiom),
            Justification::Axiom {
                schema: schema.into(),
                subst,
            },
        )
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        self.push(f, Justification::Tautology)
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let (a, b) = self.formula(major).as_implication().expect("major premise is an implication");
        assert_eq!(a, self.formula(minor), "minor premise does not match");
        let b = b.clone();
        self.push(b, Justification::ModusPonens(minor, major))
    }

    pub fn nec(&mut self, i: usize, t: &IndexTerm) -> usize {
        let f = Formula::boxed(t.clone(), self.formula(i).clone());
        self.push(f, Justification::Necessitation(i, t.clone()))
    }

    pub fn rboxplus(&mut self, i: usize) -> usize {
        let expansion = expand_rboxplus(self.formula(i)).expect("premise has the form φ → [e]φ");
        let f = expansion.last().unwrap().formula.clone();
        self.push(f, Justification::RBoxPlus(i))
    }

    fn implication(&self, i: usize) -> (Formula, Formula) {
        let (a, b) = self.formula(i).as_implication().expect("line is an implication");
        (a.clone(), b.clone())
    }

    /// `A → B`, `B → C` give `A → C`.
    pub fn syl(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = self.implication(i);
        let (b2, c) = self.implication(j);
        assert_eq!(b, b2, "middle formulas differ");
        let t = self.taut(Formula::implies(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(Formula::implies(b, c.clone()), Formula::implies(a, c)),
        ));
        let k = self.mp(i, t);
        self.mp(j, k)
    }

    /// `A → B` gives `¬B → ¬A`.
    pub fn contrapose(&mut self, i: usize) -> usize {
        let (a, b) = self.implication(i);
        let t = self.taut(Formula::implies(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(Formula::not(b), Formula::not(a)),
        ));
        self.mp(i, t)
    }

    /// `A → B` gives `[t]A → [t]B`.
    pub fn mono_box(&mut self, t: &IndexTerm, i: usize) -> usize {
        let (a, b) = self.implication(i);
        let n = self.nec(i, t);
        let k = self.axiom(&format!("K[{t}]"), &[("p", a), ("q", b)]);
        self.mp(n, k)
    }

    /// `A → B` gives `<t>A → <t>B`.
    pub fn mono_dia(&mut self, t: &IndexTerm, i: usize) -> usize {
        let c = self.contrapose(i);
        let m = self.mono_box(t, c);
        self.contrapose(m)
    }

    pub fn finish(self) -> ProofScript {
        let goal = self.lines.last().expect("non-empty proof").formula.clone();
        ProofScript {
            logic: self.logic,
            goal,
            lines: self.lines,
        }
    }
}

fn r() -> IndexTerm {
    IndexTerm::atom("r")
}

fn rplus() -> IndexTerm {
    IndexTerm::plus(r())
}

fn bx(f: Formula) -> Formula {
    Formula::boxed(r(), f)
}

fn bplus(f: Formula) -> Formula {
    Formula::boxed(rplus(), f)
}

pub fn k_plus() -> LogicSpec {
    LogicSpec::plus(LogicSpec::base(BaseLogic::K, "r"))
}

pub fn k2_plus() -> LogicSpec {
    LogicSpec::plus(LogicSpec::base(BaseLogic::K2, "r"))
}

/// `[r]φ ∧ [r+][r]φ → [r+]φ`, strengthening the premise of (A3).
pub fn derive_a_boxplus(b: &mut ProofBuilder, phi: &Formula) -> usize {
    let step = Formula::implies(phi.clone(), bx(phi.clone()));
    let weaken = b.taut(Formula::implies(bx(phi.clone()), step));
    let lifted = b.mono_box(&rplus(), weaken);
    let a3 = b.axiom("A3[r]", &[("p", phi.clone())]);
    let chained = b.syl(lifted, a3);
    let (pre, rest) = b.implication(chained);
    let (box_phi, concl) = rest.as_implication().map(|(x, y)| (x.clone(), y.clone())).unwrap();
    let curry = b.taut(Formula::implies(
        b.formula(chained).clone(),
        Formula::implies(Formula::and(box_phi, pre), concl),
    ));
    b.mp(chained, curry)
}

/// The rule `φ → [r]φ / φ → [r+]φ` replayed from its premise.
pub fn r_boxplus_derivation() -> ProofScript {
    let mut b = ProofBuilder::new(k_plus());
    let phi = Formula::var("p");
    let premise = b.premise(Formula::implies(phi.clone(), bx(phi.clone())));
    let lifted = b.nec(premise, &rplus());
    let a3 = b.axiom("A3[r]", &[("p", phi.clone())]);
    let step = b.mp(lifted, a3);
    let _ = b.syl(premise, step);
    b.finish()
}

pub fn a_boxplus_derivation() -> ProofScript {
    let mut b = ProofBuilder::new(k_plus());
    derive_a_boxplus(&mut b, &Formula::var("p"));
    b.finish()
}

/// `A → B`, `A → C`, `B ∧ C → D` give `A → D`.
fn combine(b: &mut ProofBuilder, ab: usize, ac: usize, bcd: usize) -> usize {
    let t = b.taut(Formula::implies(
        b.formula(ab).clone(),
        Formula::implies(
            b.formula(ac).clone(),
            Formula::implies(
                b.formula(bcd).clone(),
                Formula::implies(b.implication(ab).0, b.implication(bcd).1),
            ),
        ),
    ));
    let x = b.mp(ab, t);
    let y = b.mp(ac, x);
    b.mp(bcd, y)
}

/// The transitive closure argument with `rel` the convergence step: given
/// a way to derive `M[r]ψ → [r]Mψ` for any ψ, derive `M[r+]φ → [r+]Mφ`,
/// where `M` is the diamond of `t`.
fn lift_convergence(
    b: &mut ProofBuilder,
    t: &IndexTerm,
    phi: &Formula,
    step: &dyn Fn(&mut ProofBuilder, &Formula) -> usize,
) -> usize {
    let dia = |f: Formula| Formula::diamond(t.clone(), f);
    // (a) M[r+]φ → [r]Mφ
    let a1 = b.axiom("A1[r]", &[("p", phi.clone())]);
    let a2 = b.mono_dia(t, a1);
    let a3 = step(b, phi);
    let a = b.syl(a2, a3);
    // (b) M[r+]φ → [r+][r]Mφ
    let b1 = b.axiom("A2[r]", &[("p", phi.clone())]);
    let b2 = b.mono_dia(t, b1);
    let b3 = step(b, &bplus(phi.clone()));
    let b4 = b.syl(b2, b3);
    let b5 = b.rboxplus(b4);
    let b6 = b.mono_box(&rplus(), a);
    let bb = b.syl(b5, b6);
    // (A⊞) for Mφ
    let c = derive_a_boxplus(b, &dia(phi.clone()));
    combine(b, a, bb, c)
}

/// Stage 1: `<r>[r+]φ → [r+]<r>φ` from the .2 axiom.
fn stage_one(b: &mut ProofBuilder, phi: &Formula) -> usize {
    lift_convergence(b, &r(), phi, &|b, psi| b.axiom("dot2[r]", &[("p", psi.clone())]))
}

/// Stage 1′: `<r+>[r]φ → [r]<r+>φ`, the dual of stage 1 at `¬φ`.
fn stage_one_dual(b: &mut ProofBuilder, phi: &Formula) -> usize {
    b.note(format!("stage 1 for {}", Formula::not(phi.clone())));
    let s = stage_one(b, &Formula::not(phi.clone()));
    b.note(format!("stage 1' for {phi}"));
    let c = b.contrapose(s);
    let n1 = b.taut(Formula::implies(phi.clone(), Formula::not(Formula::not(phi.clone()))));
    let n2 = b.mono_box(&r(), n1);
    let n3 = b.contrapose(n2);
    let n4 = b.mono_box(&rplus(), n3);
    let n5 = b.contrapose(n4);
    let n6 = b.syl(n5, c);
    let target = b.implication(n6).1;
    let n7 = b.taut(Formula::implies(target.clone(), target_strip(&target)));
    b.syl(n6, n7)
}

fn target_strip(f: &Formula) -> Formula {
    // ¬¬X ↦ X
    match f {
        Formula::Implies(inner, bot) if **bot == Formula::Bot => match inner.as_ref() {
            Formula::Implies(x, bot2) if **bot2 == Formula::Bot => x.as_ref().clone(),
            _ => f.clone(),
        },
        _ => f.clone(),
    }
}

/// `<r+>[r+]p → [r+]<r+>p` in K.2 with the transitive closure modality.
pub fn convergence_derivation() -> ProofScript {
    let mut b = ProofBuilder::new(k2_plus());
    let p = Formula::var("p");
    b.note("stage 2");
    lift_convergence(&mut b, &rplus(), &p, &|b, psi| {
        let out = stage_one_dual(b, psi);
        b.note("stage 2");
        out
    });
    b.finish()
}

/// Stage 1 alone: `<r>[r+]p → [r+]<r>p`.
pub fn convergence_stage_one() -> ProofScript {
    let mut b = ProofBuilder::new(k2_plus());
    b.note("stage 1");
    stage_one(&mut b, &Formula::var("p"));
    b.finish()
}

/// The shipped corpus, keyed by fixture file stem.
pub fn corpus() -> Vec<(&'static str, ProofScript)> {
    vec![
        ("r_boxplus", r_boxplus_derivation()),
        ("a_boxplus", a_boxplus_derivation()),
        ("k2_stage_one", convergence_stage_one()),
        ("k2_convergence", convergence_derivation()),
    ]
}
