use super::formula::{Formula, IndexTerm};
use super::set::FormulaSet;

fn p() -> Formula {
    Formula::var("p")
}

/// Segerberg's axioms for a step index `e` and a closure index `s`:
/// `[s]p → [e]p`, `[s]p → [e][s]p` and `[s](p → [e]p) → ([e]p → [s]p)`.
pub fn instantiate_segerberg(e: &IndexTerm, s: &IndexTerm) -> [Formula; 3] {
    let bx = |t: &IndexTerm, f: Formula| Formula::boxed(t.clone(), f);
    [
        Formula::implies(bx(s, p()), bx(e, p())),
        Formula::implies(bx(s, p()), bx(e, bx(s, p()))),
        Formula::implies(
            bx(s, Formula::implies(p(), bx(e, p()))),
            Formula::implies(bx(e, p()), bx(s, p())),
        ),
    ]
}

/// `[e|c]p ↔ [e]p ∧ [c]p`
pub fn union_axiom(e: &IndexTerm, c: &IndexTerm) -> Formula {
    Formula::iff(
        Formula::boxed(IndexTerm::union(e.clone(), c.clone()), p()),
        Formula::and(Formula::boxed(e.clone(), p()), Formula::boxed(c.clone(), p())),
    )
}

/// `[e;c]p ↔ [e][c]p`
pub fn composition_axiom(e: &IndexTerm, c: &IndexTerm) -> Formula {
    Formula::iff(
        Formula::boxed(IndexTerm::comp(e.clone(), c.clone()), p()),
        Formula::boxed(e.clone(), Formula::boxed(c.clone(), p())),
    )
}

/// The PDL-style axioms over an alphabet: one union and one composition
/// axiom per ordered pair, three transitive-closure axioms per symbol.
pub fn pdl_axioms(alphabet: &[IndexTerm]) -> FormulaSet {
    let mut out = Vec::new();
    for e in alphabet {
        for c in alphabet {
            out.push(union_axiom(e, c));
            out.push(composition_axiom(e, c));
        }
        out.extend(instantiate_segerberg(e, &IndexTerm::plus(e.clone())));
    }
    out.into_iter().collect()
}

/// `[e](p → q) → ([e]p → [e]q)`
pub fn distribution_axiom(e: &IndexTerm) -> Formula {
    let q = Formula::var("q");
    Formula::implies(
        Formula::boxed(e.clone(), Formula::implies(p(), q.clone())),
        Formula::implies(Formula::boxed(e.clone(), p()), Formula::boxed(e.clone(), q)),
    )
}

/// `[e]p → p`
pub fn reflexivity_axiom(e: &IndexTerm) -> Formula {
    Formula::implies(Formula::boxed(e.clone(), p()), p())
}

/// `[e]p → [e][e]p`
pub fn transitivity_axiom(e: &IndexTerm) -> Formula {
    Formula::implies(
        Formula::boxed(e.clone(), p()),
        Formula::boxed(e.clone(), Formula::boxed(e.clone(), p())),
    )
}

/// `p → [e]<e>p`
pub fn symmetry_axiom(e: &IndexTerm) -> Formula {
    Formula::implies(p(), Formula::boxed(e.clone(), Formula::diamond(e.clone(), p())))
}

/// `[e][e]p → [e]p`
pub fn density_axiom(e: &IndexTerm) -> Formula {
    Formula::implies(
        Formula::boxed(e.clone(), Formula::boxed(e.clone(), p())),
        Formula::boxed(e.clone(), p()),
    )
}

/// `<e>[e]p → [e]<e>p`
pub fn convergence_axiom(e: &IndexTerm) -> Formula {
    Formula::implies(
        Formula::diamond(e.clone(), Formula::boxed(e.clone(), p())),
        Formula::boxed(e.clone(), Formula::diamond(e.clone(), p())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::open()).unwrap()
    }

    #[test]
    fn segerberg_for_plus() {
        let r = IndexTerm::atom("r");
        let axioms = instantiate_segerberg(&r, &IndexTerm::plus(r.clone()));
        assert_eq!(axioms[0], f("[r+]p -> [r]p"));
        assert_eq!(axioms[1], f("[r+]p -> [r][r+]p"));
        assert_eq!(axioms[2], f("[r+](p -> [r]p) -> ([r]p -> [r+]p)"));
    }

    #[test]
    fn segerberg_for_bimodal_atoms() {
        let axioms = instantiate_segerberg(&IndexTerm::atom("r"), &IndexTerm::atom("s"));
        assert_eq!(axioms[0], f("[s]p -> [r]p"));
        assert_eq!(axioms[1], f("[s]p -> [r][s]p"));
        assert_eq!(axioms[2], f("[s](p -> [r]p) -> ([r]p -> [s]p)"));
    }

    #[test]
    fn segerberg_for_composite_step() {
        let e = IndexTerm::comp(IndexTerm::atom("r"), IndexTerm::atom("s"));
        let axioms = instantiate_segerberg(&e, &IndexTerm::plus(e.clone()));
        assert_eq!(axioms[0], f("[(r;s)+]p -> [r;s]p"));
    }

    #[test]
    fn pdl_axiom_counts() {
        let r = IndexTerm::atom("r");
        let s = IndexTerm::atom("s");
        assert_eq!(pdl_axioms(std::slice::from_ref(&r)).len(), 5);
        assert_eq!(pdl_axioms(&[r.clone(), s.clone()]).len(), 14);
        assert!(pdl_axioms(&[]).is_empty());
        let union = f("([r|r]p -> [r]p & [r]p) & ([r]p & [r]p -> [r|r]p)");
        assert_eq!(union_axiom(&r, &r), union);
        assert!(pdl_axioms(&[r]).contains(&union));
    }
}
