use std::collections::{BTreeMap, BTreeSet};

use super::formula::Formula;
use super::set::FormulaSet;

/// Finite map from variables to formulas; unmapped variables stay fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    mapping: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn single(var: impl Into<String>, image: Formula) -> Self {
        let mut s = Substitution::default();
        s.insert(var, image);
        s
    }

    pub fn insert(&mut self, var: impl Into<String>, image: Formula) {
        self.mapping.insert(var.into(), image);
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.mapping.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Formula)> {
        self.mapping.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        apply_substitution(f, self)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let mut mapping: BTreeMap<String, Formula> = inner
            .mapping
            .iter()
            .map(|(v, f)| (v.clone(), self.apply(f)))
            .collect();
        for (v, f) in &self.mapping {
            mapping.entry(v.clone()).or_insert_with(|| f.clone());
        }
        Substitution { mapping }
    }
}

impl FromIterator<(String, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Formula)>>(iter: I) -> Self {
        Substitution {
            mapping: iter.into_iter().collect(),
        }
    }
}

pub fn apply_substitution(f: &Formula, sigma: &Substitution) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| f.clone()),
        Formula::Implies(l, r) => {
            Formula::implies(apply_substitution(l, sigma), apply_substitution(r, sigma))
        }
        Formula::Box(t, body) => Formula::boxed(t.clone(), apply_substitution(body, sigma)),
    }
}

/// Fresh surrogate variables `q_φ` for the members of a set, together with
/// the substitution `q_φ ↦ φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surrogates {
    pub sigma: Substitution,
    /// `(φ, q_φ)` in the canonical order of the source set.
    pub names: Vec<(Formula, String)>,
}

impl Surrogates {
    pub fn name_of(&self, f: &Formula) -> Option<&str> {
        self.names
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, q)| q.as_str())
    }

    pub fn var_of(&self, f: &Formula) -> Option<Formula> {
        self.name_of(f).map(Formula::var)
    }
}

/// Names `q_φ` as `"q" + position`, skipping any name that already occurs in
/// the set.
pub fn fresh_surrogates(gamma: &FormulaSet) -> Surrogates {
    let taken: BTreeSet<String> = gamma.variables();
    let mut counter = 0usize;
    let mut names = Vec::with_capacity(gamma.len());
    let mut sigma = Substitution::identity();
    for f in gamma {
        counter = counter.max(names.len());
        let mut name = format!("q{counter}");
        while taken.contains(&name) {
            counter += 1;
            name = format!("q{counter}");
        }
        counter += 1;
        sigma.insert(name.clone(), f.clone());
        names.push((f.clone(), name));
    }
    Surrogates { sigma, names }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, sub_closure, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    #[test]
    fn substitute_under_box() {
        let sigma = Substitution::single("p", f("q & r"));
        assert_eq!(apply_substitution(&f("[r]p"), &sigma), f("[r](q & r)"));
    }

    #[test]
    fn substitute_bot() {
        let sigma = Substitution::single("p", Formula::Bot);
        assert_eq!(apply_substitution(&f("p -> p"), &sigma), f("bot -> bot"));
    }

    #[test]
    fn induction_axiom_instance_for_a_formula() {
        let phi = f("<r>q");
        let a3 = f("[r+](p -> [r]p) -> ([r]p -> [r+]p)");
        let inst = apply_substitution(&a3, &Substitution::single("p", phi));
        assert_eq!(inst, f("[r+](<r>q -> [r]<r>q) -> ([r]<r>q -> [r+]<r>q)"));
    }

    #[test]
    fn identity_substitution_is_neutral() {
        let a = f("[r](p -> q) -> <s>bot");
        assert_eq!(apply_substitution(&a, &Substitution::identity()), a);
    }

    #[test]
    fn surrogates_follow_canonical_order() {
        let gamma = sub_closure(&[f("[r+]p")].into_iter().collect());
        let s = fresh_surrogates(&gamma);
        assert_eq!(
            s.names,
            vec![(f("[r+]p"), "q0".to_string()), (f("p"), "q1".to_string())]
        );
        assert_eq!(s.sigma.get("q0"), Some(&f("[r+]p")));
        assert_eq!(s.sigma.get("q1"), Some(&f("p")));
    }

    #[test]
    fn surrogates_of_empty_set() {
        let s = fresh_surrogates(&FormulaSet::new());
        assert!(s.names.is_empty());
        assert!(s.sigma.is_empty());
    }

    #[test]
    fn surrogates_skip_clashing_names() {
        let gamma: FormulaSet = [f("q0")].into_iter().collect();
        let s = fresh_surrogates(&gamma);
        assert_eq!(s.names, vec![(f("q0"), "q1".to_string())]);

        let gamma: FormulaSet = [f("q1 -> p"), f("p"), f("q1")].into_iter().collect();
        let s = fresh_surrogates(&gamma);
        let names: Vec<&str> = s.names.iter().map(|(_, q)| q.as_str()).collect();
        assert_eq!(names, vec!["q0", "q2", "q3"]);
    }
}
