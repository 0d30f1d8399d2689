use std::collections::BTreeSet;
use std::fmt;

use super::script::{Justification, ProofLine, ProofScript};
use crate::limits::Limits;
use crate::syntax::{Formula, IndexTerm, Substitution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineVerdict {
    pub line: usize,
    pub error: Option<String>,
}

impl LineVerdict {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofVerdict {
    pub lines: Vec<LineVerdict>,
    pub goal_reached: bool,
}

impl ProofVerdict {
    pub fn passed(&self) -> bool {
        self.goal_reached && self.lines.iter().all(LineVerdict::ok)
    }

    pub fn first_failure(&self) -> Option<&LineVerdict> {
        self.lines.iter().find(|l| !l.ok())
    }
}

impl fmt::Display for ProofVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            match &l.error {
                None => writeln!(f, "line {:>3}: ok", l.line + 1)?,
                Some(e) => writeln!(f, "line {:>3}: REJECTED: {e}", l.line + 1)?,
            }
        }
        if !self.goal_reached {
            writeln!(f, "final line does not match the goal")?;
        }
        write!(f, "{}", if self.passed() { "PROOF CHECKED" } else { "PROOF REJECTED" })
    }
}

/// Variables and modal subformulas, the atoms of a propositional reading.
fn propositional_atoms(f: &Formula, out: &mut BTreeSet<Formula>) {
    match f {
        Formula::Bot => {}
        Formula::Implies(a, b) => {
            propositional_atoms(a, out);
            propositional_atoms(b, out);
        }
        atom => {
            out.insert(atom.clone());
        }
    }
}

fn prop_eval(f: &Formula, atoms: &[Formula], row: u32) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Implies(a, b) => !prop_eval(a, atoms, row) || prop_eval(b, atoms, row),
        atom => {
            let i = atoms.binary_search(atom).expect("atom collected");
            row >> i & 1 == 1
        }
    }
}

/// Truth-table check; `Err` when the formula has more atoms than the cap.
pub fn is_tautology(f: &Formula, limits: &Limits) -> Result<bool, String> {
    let mut atoms = BTreeSet::new();
    propositional_atoms(f, &mut atoms);
    if atoms.len() > limits.tautology_atoms as usize {
        return Err(format!(
            "{} propositional atoms exceed the truth-table cap of {}",
            atoms.len(),
            limits.tautology_atoms
        ));
    }
    let atoms: Vec<Formula> = atoms.into_iter().collect();
    Ok((0..1u32 << atoms.len()).all(|row| prop_eval(f, &atoms, row)))
}

/// The derivation `φ→[e]φ`, `[e+](φ→[e]φ)`, (A3), `[e]φ→[e+]φ`, `φ→[e+]φ`
/// with the propositional glue spelled out.
pub fn expand_rboxplus(premise: &Formula) -> Option<Vec<ProofLine>> {
    let (phi, boxed) = premise.as_implication()?;
    let Formula::Box(e @ IndexTerm::Atom(_), body) = boxed else {
        return None;
    };
    if body.as_ref() != phi {
        return None;
    }
    let plus = IndexTerm::plus(e.clone());
    let box_phi = boxed.clone();
    let plus_phi = Formula::boxed(plus.clone(), phi.clone());
    let line = |formula, justification| ProofLine {
        formula,
        justification,
        note: None,
    };
    let a3 = Formula::implies(
        Formula::boxed(plus.clone(), premise.clone()),
        Formula::implies(box_phi.clone(), plus_phi.clone()),
    );
    let step = Formula::implies(box_phi.clone(), plus_phi.clone());
    let glue = Formula::implies(
        premise.clone(),
        Formula::implies(step.clone(), Formula::implies(phi.clone(), plus_phi.clone())),
    );
    Some(vec![
        line(premise.clone(), Justification::Premise),
        line(Formula::boxed(plus.clone(), premise.clone()), Justification::Necessitation(0, plus)),
        line(
            a3,
            Justification::Axiom {
                schema: format!("A3[{e}]"),
                subst: Substitution::single("p", phi.clone()),
            },
        ),
        line(step.clone(), Justification::ModusPonens(1, 2)),
        line(glue.clone(), Justification::Tautology),
        line(glue.as_implication()?.1.clone(), Justification::ModusPonens(0, 4)),
        line(Formula::implies(phi.clone(), plus_phi), Justification::ModusPonens(3, 5)),
    ])
}

fn check_line(script: &ProofScript, k: usize, limits: &Limits) -> Result<(), String> {
    let lines = &script.lines;
    let line = &lines[k];
    let refs = line.justification.refs();
    if let Some(&r) = refs.iter().find(|&&r| r >= k) {
        return Err(if r >= lines.len() {
            "refers to a missing line".into()
        } else {
            format!("refers to line {}, which is not earlier", r + 1)
        });
    }
    let f = &line.formula;
    match &line.justification {
        Justification::Premise => Ok(()),
        Justification::Axiom { schema, subst } => {
            let axiom = script
                .logic
                .axiom(schema)
                .ok_or_else(|| format!("`{schema}` is not an axiom of {}", script.logic))?;
            if subst.apply(&axiom) == *f {
                Ok(())
            } else {
                Err(format!("substitution into `{schema}` does not give this line"))
            }
        }
        Justification::Tautology => match is_tautology(f, limits)? {
            true => Ok(()),
            false => Err("not a tautology".into()),
        },
        Justification::ModusPonens(i, j) => match lines[*j].formula.as_implication() {
            Some((a, b)) if *a == lines[*i].formula && b == f => Ok(()),
            Some(_) => Err(format!(
                "line {} is not `{} -> {}`",
                j + 1,
                lines[*i].formula,
                f
            )),
            None => Err(format!("line {} is not an implication", j + 1)),
        },
        Justification::Necessitation(i, t) => {
            if !script.logic.alphabet().contains(t) {
                return Err(format!("index `{t}` is not in the language of {}", script.logic));
            }
            if *f == Formula::boxed(t.clone(), lines[*i].formula.clone()) {
                Ok(())
            } else {
                Err(format!("not `[{t}]` applied to line {}", i + 1))
            }
        }
        Justification::RBoxPlus(i) => {
            let expansion = expand_rboxplus(&lines[*i].formula)
                .ok_or_else(|| format!("line {} is not of the form `φ -> [e]φ`", i + 1))?;
            if expansion.last().map(|l| &l.formula) != Some(f) {
                return Err(format!("not `φ -> [e+]φ` for line {}", i + 1));
            }
            let sub = ProofScript {
                logic: script.logic.clone(),
                goal: f.clone(),
                lines: expansion,
            };
            match check_proof_with(&sub, limits).first_failure() {
                None => Ok(()),
                Some(v) => Err(format!(
                    "expansion step {} fails: {}",
                    v.line + 1,
                    v.error.as_deref().unwrap_or("")
                )),
            }
        }
    }
}

pub fn check_proof(script: &ProofScript) -> ProofVerdict {
    check_proof_with(script, &Limits::default())
}

/// Checks every line against its justification. A line citing a rejected
/// line is rejected, and so is a line the conclusion does not depend on.
pub fn check_proof_with(script: &ProofScript, limits: &Limits) -> ProofVerdict {
    let n = script.lines.len();
    let mut errors: Vec<Option<String>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut err = check_line(script, k, limits).err();
        if err.is_none() {
            if let Some(r) = script.lines[k].justification.refs().into_iter().find(|&r| errors[r].is_some()) {
                err = Some(format!("depends on rejected line {}", r + 1));
            }
        }
        errors.push(err);
    }
    let mut used = vec![false; n];
    if n > 0 {
        used[n - 1] = true;
    }
    for k in (0..n).rev() {
        if used[k] {
            for r in script.lines[k].justification.refs() {
                if r < k {
                    used[r] = true;
                }
            }
        }
    }
    for (k, err) in errors.iter_mut().enumerate() {
        if err.is_none() && !used[k] {
            *err = Some("the conclusion does not depend on this line".into());
        }
    }
    ProofVerdict {
        lines: errors
            .into_iter()
            .enumerate()
            .map(|(line, error)| LineVerdict { line, error })
            .collect(),
        goal_reached: script.lines.last().is_some_and(|l| l.formula == script.goal),
    }
}
