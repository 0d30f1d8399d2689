use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semantics::LogicSpec;
use crate::syntax::{parse_formula, parse_index, Formula, IndexTerm, Signature, Substitution};

/// Line references are 0-based here and 1-based in proof files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom { schema: String, subst: Substitution },
    Tautology,
    /// `(minor, major)`: `A` and `A → B` give `B`.
    ModusPonens(usize, usize),
    Necessitation(usize, IndexTerm),
    /// `φ → [e]φ` gives `φ → [e+]φ`.
    RBoxPlus(usize),
    /// Hypothesis of a derived rule.
    Premise,
}

impl Justification {
    pub fn refs(&self) -> Vec<usize> {
        match self {
            Justification::ModusPonens(i, j) => vec![*i, *j],
            Justification::Necessitation(i, _) | Justification::RBoxPlus(i) => vec![*i],
            _ => Vec::new(),
        }
    }

    pub(crate) fn refs_mut(&mut self) -> Vec<&mut usize> {
        match self {
            Justification::ModusPonens(i, j) => vec![i, j],
            Justification::Necessitation(i, _) | Justification::RBoxPlus(i) => vec![i],
            _ => Vec::new(),
        }
    }

    pub fn rule_name(&self) -> String {
        match self {
            Justification::Axiom { schema, .. } => format!("axiom:{schema}"),
            Justification::Tautology => "tautology".into(),
            Justification::ModusPonens(..) => "mp".into(),
            Justification::Necessitation(_, t) => format!("nec:{t}"),
            Justification::RBoxPlus(_) => "rboxplus".into(),
            Justification::Premise => "premise".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub logic: LogicSpec,
    pub goal: Formula,
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawLine {
    formula: String,
    rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    refs: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subst: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawScript {
    logic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    goal: Option<String>,
    lines: Vec<RawLine>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawFile {
    Script(RawScript),
    Lines(Vec<RawLine>),
}

impl ProofScript {
    pub fn premises(&self) -> impl Iterator<Item = &Formula> {
        self.lines
            .iter()
            .filter(|l| l.justification == Justification::Premise)
            .map(|l| &l.formula)
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.logic.atoms())
    }

    fn raw(&self) -> RawScript {
        let lines = self
            .lines
            .iter()
            .map(|l| RawLine {
                formula: l.formula.to_string(),
                rule: l.justification.rule_name(),
                refs: l.justification.refs().iter().map(|r| r + 1).collect(),
                subst: match &l.justification {
                    Justification::Axiom { subst, .. } => {
                        subst.iter().map(|(v, f)| (v.clone(), f.to_string())).collect()
                    }
                    _ => BTreeMap::new(),
                },
                note: l.note.clone(),
            })
            .collect();
        RawScript {
            logic: self.logic.to_string(),
            goal: Some(self.goal.to_string()),
            lines,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("proof scripts serialize")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.raw()).expect("proof scripts serialize")
    }
}

fn line_error(k: usize, message: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("proof line {}: {message}", k + 1))
}

fn parse_line(k: usize, raw: &RawLine, sig: &Signature) -> Result<ProofLine> {
    let formula = parse_formula(&raw.formula, sig).map_err(|e| line_error(k, e))?;
    let refs: Vec<usize> = raw
        .refs
        .iter()
        .map(|&r| r.checked_sub(1).ok_or_else(|| line_error(k, "references are 1-based")))
        .collect::<Result<_>>()?;
    let want = |n: usize| {
        if refs.len() == n {
            Ok(())
        } else {
            Err(line_error(k, format!("rule `{}` takes {n} reference(s)", raw.rule)))
        }
    };
    let justification = match raw.rule.split_once(':') {
        Some(("axiom", schema)) => {
            want(0)?;
            let mut subst = Substitution::identity();
            for (v, text) in &raw.subst {
                subst.insert(v.clone(), parse_formula(text, sig).map_err(|e| line_error(k, e))?);
            }
            Justification::Axiom {
                schema: schema.to_string(),
                subst,
            }
        }
        Some(("nec", index)) => {
            want(1)?;
            Justification::Necessitation(refs[0], parse_index(index, sig).map_err(|e| line_error(k, e))?)
        }
        Some(_) => return Err(line_error(k, format!("unknown rule `{}`", raw.rule))),
        None => match raw.rule.as_str() {
            "tautology" => {
                want(0)?;
                Justification::Tautology
            }
            "mp" => {
                want(2)?;
                Justification::ModusPonens(refs[0], refs[1])
            }
            "rboxplus" => {
                want(1)?;
                Justification::RBoxPlus(refs[0])
            }
            "premise" => {
                want(0)?;
                Justification::Premise
            }
            other => return Err(line_error(k, format!("unknown rule `{other}`"))),
        },
    };
    Ok(ProofLine {
        formula,
        justification,
        note: raw.note.clone(),
    })
}

/// Reads a proof file: either an object with `logic`, optional `goal` and
/// `lines`, or a bare list of lines checked against `fallback_logic`. The
/// goal defaults to the last line.
pub fn parse_proof(text: &str, fallback_logic: Option<&LogicSpec>) -> Result<ProofScript> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let (logic, goal, raw_lines) = match raw {
        RawFile::Script(s) => (s.logic.parse::<LogicSpec>()?, s.goal, s.lines),
        RawFile::Lines(lines) => {
            let logic = fallback_logic.cloned().ok_or_else(|| {
                Error::Malformed("a bare list of proof lines needs a logic".into())
            })?;
            (logic, None, lines)
        }
    };
    let sig = Signature::new(logic.atoms());
    let lines = raw_lines
        .iter()
        .enumerate()
        .map(|(k, l)| parse_line(k, l, &sig))
        .collect::<Result<Vec<_>>>()?;
    let goal = match goal {
        Some(text) => parse_formula(&text, &sig)?,
        None => lines
            .last()
            .map(|l| l.formula.clone())
            .ok_or_else(|| Error::Malformed("empty proof".into()))?,
    };
    Ok(ProofScript { logic, goal, lines })
}
