use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expand::sharp_alphabet;
use super::frame::Frame;
use crate::error::{Error, Result};
use crate::syntax::{
    composition_axiom, convergence_axiom, distribution_axiom, instantiate_segerberg,
    reflexivity_axiom, symmetry_axiom, transitivity_axiom, union_axiom, Formula, IndexTerm,
};

/// How the relation of a filtration is chosen between the minimal and the
/// maximal filtered relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    Minimal,
    ClosureOfMinimal,
    Maximal,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recipe::Minimal => "minimal",
            Recipe::ClosureOfMinimal => "closure_of_minimal",
            Recipe::Maximal => "maximal",
        })
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(Recipe::Minimal),
            "closure_of_minimal" => Ok(Recipe::ClosureOfMinimal),
            "maximal" => Ok(Recipe::Maximal),
            _ => Err(Error::Malformed(format!("unknown recipe `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseLogic {
    K,
    T,
    K4,
    S4,
    S5,
    /// `K` plus the convergence axiom `.2`.
    K2,
}

impl BaseLogic {
    pub const ALL: [BaseLogic; 6] = [
        BaseLogic::K,
        BaseLogic::T,
        BaseLogic::K4,
        BaseLogic::S4,
        BaseLogic::S5,
        BaseLogic::K2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseLogic::K => "K",
            BaseLogic::T => "T",
            BaseLogic::K4 => "K4",
            BaseLogic::S4 => "S4",
            BaseLogic::S5 => "S5",
            BaseLogic::K2 => "K2",
        }
    }

    pub fn recipe(self) -> Option<Recipe> {
        match self {
            BaseLogic::K | BaseLogic::T => Some(Recipe::Minimal),
            BaseLogic::K4 | BaseLogic::S4 | BaseLogic::S5 => Some(Recipe::ClosureOfMinimal),
            BaseLogic::K2 => None,
        }
    }

    /// Characteristic axioms beyond `K`, named by schema id.
    pub fn extra_axioms(self, e: &IndexTerm) -> Vec<(String, Formula)> {
        let t = || (format!("T[{e}]"), reflexivity_axiom(e));
        let four = || (format!("4[{e}]"), transitivity_axiom(e));
        let b = || (format!("B[{e}]"), symmetry_axiom(e));
        match self {
            BaseLogic::K => vec![],
            BaseLogic::T => vec![t()],
            BaseLogic::K4 => vec![four()],
            BaseLogic::S4 => vec![t(), four()],
            BaseLogic::S5 => vec![t(), b(), four()],
            BaseLogic::K2 => vec![(format!("dot2[{e}]"), convergence_axiom(e))],
        }
    }

    pub fn holds(self, r: &super::relation::Relation) -> bool {
        match self {
            BaseLogic::K => true,
            BaseLogic::T => r.is_reflexive(),
            BaseLogic::K4 => r.is_transitive(),
            BaseLogic::S4 => r.is_preorder(),
            BaseLogic::S5 => r.is_equivalence(),
            BaseLogic::K2 => r.is_convergent(),
        }
    }
}

impl FromStr for BaseLogic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaseLogic::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnsupportedLogic(s.to_string()))
    }
}

/// A logic identifier together with its axiom schemas, frame condition and
/// filtration recipe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LogicSpec {
    Base { logic: BaseLogic, index: String },
    Fusion(Vec<LogicSpec>),
    Plus(Box<LogicSpec>),
    Sharp { base: Box<LogicSpec>, level: usize },
}

impl LogicSpec {
    pub fn base(logic: BaseLogic, index: impl Into<String>) -> Self {
        LogicSpec::Base {
            logic,
            index: index.into(),
        }
    }

    pub fn plus(inner: LogicSpec) -> Self {
        LogicSpec::Plus(Box::new(inner))
    }

    pub fn sharp(base: LogicSpec, level: usize) -> Self {
        LogicSpec::Sharp {
            base: Box::new(base),
            level,
        }
    }

    /// Atomic index symbols; these are the only relations that need to be
    /// given explicitly, every other term is derived from them.
    pub fn atoms(&self) -> BTreeSet<String> {
        match self {
            LogicSpec::Base { index, .. } => [index.clone()].into_iter().collect(),
            LogicSpec::Fusion(parts) => parts.iter().flat_map(LogicSpec::atoms).collect(),
            LogicSpec::Plus(inner) => inner.atoms(),
            LogicSpec::Sharp { base, .. } => base.atoms(),
        }
    }

    pub fn atom_terms(&self) -> Vec<IndexTerm> {
        self.atoms().into_iter().map(IndexTerm::atom).collect()
    }

    /// Every index term the logic's language interprets.
    pub fn alphabet(&self) -> BTreeSet<IndexTerm> {
        match self {
            LogicSpec::Base { index, .. } => [IndexTerm::atom(index.clone())].into_iter().collect(),
            LogicSpec::Fusion(parts) => parts.iter().flat_map(LogicSpec::alphabet).collect(),
            LogicSpec::Plus(inner) => {
                let inner = inner.alphabet();
                let plus: Vec<IndexTerm> = inner.iter().cloned().map(IndexTerm::plus).collect();
                inner.into_iter().chain(plus).collect()
            }
            LogicSpec::Sharp { base, level } => {
                let mut a = base.alphabet();
                for _ in 0..*level {
                    a = sharp_alphabet(&a);
                }
                a
            }
        }
    }

    /// Named axiom schemas in the variables `p`, `q`.
    pub fn axioms(&self) -> Vec<(String, Formula)> {
        let mut out: Vec<(String, Formula)> = self
            .alphabet()
            .iter()
            .map(|e| (format!("K[{e}]"), distribution_axiom(e)))
            .collect();
        self.extra_axioms(&mut out);
        out
    }

    fn extra_axioms(&self, out: &mut Vec<(String, Formula)>) {
        match self {
            LogicSpec::Base { logic, index } => {
                out.extend(logic.extra_axioms(&IndexTerm::atom(index.clone())))
            }
            LogicSpec::Fusion(parts) => parts.iter().for_each(|p| p.extra_axioms(out)),
            LogicSpec::Plus(inner) => {
                inner.extra_axioms(out);
                for e in inner.alphabet() {
                    push_segerberg(out, &e);
                }
            }
            LogicSpec::Sharp { base, level } => {
                base.extra_axioms(out);
                let mut a = base.alphabet();
                for _ in 0..*level {
                    for e in &a {
                        for c in &a {
                            out.push((format!("union[{e},{c}]"), union_axiom(e, c)));
                            out.push((format!("comp[{e},{c}]"), composition_axiom(e, c)));
                        }
                        push_segerberg(out, e);
                    }
                    a = sharp_alphabet(&a);
                }
            }
        }
    }

    pub fn axiom(&self, name: &str) -> Option<Formula> {
        self.axioms()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
    }

    /// Decidable frame condition: the base condition on each atomic relation,
    /// and every explicitly given composite entry equal to its compositional
    /// value (so `S = R⁺` for ⊞-extensions).
    pub fn frame_condition(&self, frame: &Frame) -> bool {
        match self {
            LogicSpec::Base { logic, index } => frame
                .relation_of(&IndexTerm::atom(index.clone()))
                .map(|r| logic.holds(&r))
                .unwrap_or(false),
            LogicSpec::Fusion(parts) => parts.iter().all(|p| p.frame_condition(frame)),
            LogicSpec::Plus(_) | LogicSpec::Sharp { .. } => {
                let inner = match self {
                    LogicSpec::Plus(inner) => inner,
                    LogicSpec::Sharp { base, .. } => base,
                    _ => unreachable!(),
                };
                inner.frame_condition(frame)
                    && self.alphabet().iter().filter(|t| !t.is_atom()).all(|t| {
                        match (frame.relation_of(t), frame.compositional(t)) {
                            (Ok(given), Ok(derived)) => *given == derived,
                            _ => false,
                        }
                    })
            }
        }
    }

    /// Filtration recipe of a unimodal base logic.
    pub fn recipe(&self) -> Option<Recipe> {
        match self {
            LogicSpec::Base { logic, .. } => logic.recipe(),
            _ => None,
        }
    }

    /// The base logic beneath any number of ⊞/♯ layers.
    pub fn core(&self) -> &LogicSpec {
        match self {
            LogicSpec::Plus(inner) => inner.core(),
            LogicSpec::Sharp { base, .. } => base.core(),
            other => other,
        }
    }

    /// Base components with their index, flattening fusions.
    pub fn components(&self) -> Vec<(BaseLogic, String)> {
        match self {
            LogicSpec::Base { logic, index } => vec![(*logic, index.clone())],
            LogicSpec::Fusion(parts) => parts.iter().flat_map(LogicSpec::components).collect(),
            LogicSpec::Plus(inner) => inner.components(),
            LogicSpec::Sharp { base, .. } => base.components(),
        }
    }
}

fn push_segerberg(out: &mut Vec<(String, Formula)>, e: &IndexTerm) {
    let [a1, a2, a3] = instantiate_segerberg(e, &IndexTerm::plus(e.clone()));
    out.push((format!("A1[{e}]"), a1));
    out.push((format!("A2[{e}]"), a2));
    out.push((format!("A3[{e}]"), a3));
}

impl fmt::Display for LogicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicSpec::Base { logic, index } if index == "r" => f.write_str(logic.name()),
            LogicSpec::Base { logic, index } => write!(f, "{}:{index}", logic.name()),
            LogicSpec::Fusion(parts) => {
                f.write_str("fusion(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    match p {
                        LogicSpec::Base { logic, index } => write!(f, "{}:{index}", logic.name())?,
                        other => write!(f, "{other}")?,
                    }
                }
                f.write_str(")")
            }
            LogicSpec::Plus(inner) => write!(f, "{inner}+"),
            LogicSpec::Sharp { base, level } => write!(f, "{base}#{level}"),
        }
    }
}

impl FromStr for LogicSpec {
    type Err = Error;

    /// `K|T|K4|S4|S5|K2` with optional `:index`, postfix `+` and `#n`, and
    /// `fusion(l1:a1,l2:a2,...)`.
    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = || Error::UnsupportedLogic(text.to_string());
        if let Some(rest) = s.strip_suffix('+') {
            return Ok(LogicSpec::plus(rest.parse()?));
        }
        if let Some(pos) = s.rfind('#') {
            if !s[pos..].contains(')') {
                let level = s[pos + 1..].parse::<usize>().map_err(|_| bad())?;
                return Ok(LogicSpec::sharp(s[..pos].parse()?, level));
            }
        }
        if let Some(inner) = s.strip_prefix("fusion(").and_then(|r| r.strip_suffix(')')) {
            let mut parts = Vec::new();
            let mut depth = 0usize;
            let mut start = 0;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(bad)?,
                    ',' if depth == 0 => {
                        parts.push(inner[start..i].parse::<LogicSpec>()?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(inner[start..].parse::<LogicSpec>()?);
            let mut seen = BTreeSet::new();
            for p in &parts {
                for a in p.atoms() {
                    if !seen.insert(a.clone()) {
                        return Err(Error::AlphabetClash(a));
                    }
                }
            }
            return Ok(LogicSpec::Fusion(parts));
        }
        let (name, index) = match s.split_once(':') {
            Some((n, i)) => (n, i),
            None => (s, "r"),
        };
        let valid_index = index
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_lowercase())
            && index.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_index {
            return Err(bad());
        }
        Ok(LogicSpec::base(name.parse().map_err(|_| bad())?, index))
    }
}
