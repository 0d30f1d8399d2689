use proptest::prelude::*;

use filtrakit_core::decision::{decide_sat, decide_validity};
use filtrakit_core::filtration::{
    build_filtration, check_a3_min, differentiate, fusion_strict_filtration, induced_equivalence,
    max_filtered_relation, min_filtered_relation, transclosure_filtration, verify_filtration,
    verify_filtration_lemma, Recipe,
};
use filtrakit_core::mfp::{filtration_map, is_strong_onto_hom, preservation_check, MfpGenerator, WorldMap};
use filtrakit_core::sample::Sampler;
use filtrakit_core::semantics::{expand_plus, expand_sharp, BaseLogic, Frame, LogicSpec, Relation};
use filtrakit_core::syntax::{
    fresh_surrogates, parse_formula, sub_closure, Formula, FormulaSet, IndexTerm, Signature, Substitution,
};
use filtrakit_core::Limits;

const VARS: [&str; 2] = ["p", "q"];

fn r() -> IndexTerm {
    IndexTerm::atom("r")
}

fn s() -> IndexTerm {
    IndexTerm::atom("s")
}

fn rich_indices() -> Vec<IndexTerm> {
    vec![
        r(),
        s(),
        IndexTerm::plus(r()),
        IndexTerm::comp(r(), s()),
        IndexTerm::union(r(), IndexTerm::plus(s())),
    ]
}

/// Warshall's algorithm on a boolean matrix.
fn closure_oracle(rel: &Relation) -> Relation {
    let n = rel.size();
    let mut m: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| rel.contains(x, y)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                m[i][j] = m[i][j] || (m[i][k] && m[k][j]);
            }
        }
    }
    let pairs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y)));
    Relation::from_pairs(n, pairs.filter(|&(x, y)| m[x][y]).collect::<Vec<_>>()).unwrap()
}

fn is_subset(a: &FormulaSet, b: &FormulaSet) -> bool {
    a.iter().all(|f| b.contains(f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let f = Sampler::new(seed).formula(&["p", "q", "r1"], &rich_indices(), 5);
        let back = parse_formula(&f.to_string(), &Signature::open()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn closure_is_transitive_minimal_and_idempotent(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(0, 10);
        let rel = smp.relation(n, 0.2);
        let plus = rel.transitive_closure();
        prop_assert!(rel.is_subset(&plus));
        prop_assert!(plus.is_transitive());
        prop_assert_eq!(plus.transitive_closure(), plus.clone());
        prop_assert_eq!(plus, closure_oracle(&rel));
    }

    #[test]
    fn closure_keeps_convergence(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        if let Some(rel) = smp.convergent(n, 16) {
            prop_assert!(rel.transitive_closure().is_convergent());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sub_closure_is_idempotent_and_monotone(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let small: FormulaSet = (0..3).map(|_| smp.formula(&VARS, &[r(), s()], 3)).collect();
        let big: FormulaSet = small.iter().cloned().chain((0..2).map(|_| smp.formula(&VARS, &[r()], 3))).collect();
        let closed = sub_closure(&small);
        prop_assert!(closed.is_sub_closed());
        prop_assert_eq!(sub_closure(&closed).into_vec(), closed.clone().into_vec());
        prop_assert!(is_subset(&small, &closed));
        prop_assert!(is_subset(&closed, &sub_closure(&big)));
    }

    #[test]
    fn substitutions_compose(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let f = smp.formula(&VARS, &[r()], 3);
        let sigma: Substitution = [("p".to_string(), smp.formula(&VARS, &[r()], 2))].into_iter().collect();
        let tau: Substitution = [
            ("p".to_string(), smp.formula(&VARS, &[s()], 2)),
            ("q".to_string(), smp.formula(&VARS, &[s()], 2)),
        ]
        .into_iter()
        .collect();
        prop_assert_eq!(sigma.compose(&tau).apply(&f), sigma.apply(&tau.apply(&f)));
        prop_assert_eq!(Substitution::identity().apply(&f), f);
    }

    #[test]
    fn surrogates_are_fresh_and_invert(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let gamma = smp.gamma(&["p", "q0", "q1"], &[r()], 8, 3);
        let sur = fresh_surrogates(&gamma);
        let taken = gamma.variables();
        let mut seen = std::collections::BTreeSet::new();
        for (phi, q) in &sur.names {
            prop_assert!(!taken.contains(q));
            prop_assert!(seen.insert(q.clone()));
            prop_assert_eq!(sur.sigma.apply(&Formula::var(q.clone())), phi.clone());
        }
        prop_assert_eq!(sur.names.len(), gamma.len());
    }

    #[test]
    fn sharp_expansion_meets_its_frame_condition(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 5);
        let frame = smp.frame(n, &[r()]);
        let sharp = expand_sharp(&frame, &Limits::default()).unwrap();
        let logic = LogicSpec::sharp(LogicSpec::base(BaseLogic::K, "r"), 1);
        prop_assert!(logic.frame_condition(&sharp));
        prop_assert_eq!(
            sharp.relation_of(&IndexTerm::plus(r())).unwrap().into_owned(),
            closure_oracle(frame.explicit(&r()).unwrap())
        );
    }

    #[test]
    fn filtration_lemma_for_every_recipe(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        let frame = Frame::new(n).unwrap().with_relation(r(), smp.relation_for(BaseLogic::K4, n)).unwrap();
        let model = smp.model(frame, &VARS);
        let gamma = smp.gamma(&VARS, &[r()], 6, 3);
        for recipe in [Recipe::Minimal, Recipe::ClosureOfMinimal, Recipe::Maximal] {
            let fm = build_filtration(&model, &gamma, recipe).unwrap();
            prop_assert!(verify_filtration(&model, &gamma, &fm).passed());
            prop_assert!(verify_filtration_lemma(&model, &gamma, &fm));
            prop_assert!(fm.class_count() <= 1 << gamma.len());
        }
    }

    #[test]
    fn min_is_below_max(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        let frame = smp.frame(n, &[r(), s()]);
        let model = smp.model(frame, &VARS);
        let gamma = smp.gamma(&VARS, &[r(), s()], 6, 3);
        let partition = induced_equivalence(&model, &gamma).unwrap();
        for e in [r(), s()] {
            let min = min_filtered_relation(&model, &partition, &e).unwrap();
            let max = max_filtered_relation(&model, &partition, &gamma, &e).unwrap();
            prop_assert!(min.is_subset(&max));
        }
    }

    #[test]
    fn transfer_output_is_a_filtration(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let logic = BaseLogic::ALL[smp.size(0, 4)];
        let n = smp.size(1, 7);
        let frame = Frame::new(n).unwrap().with_relation(r(), smp.relation_for(logic, n)).unwrap();
        let model = smp.model(expand_plus(&frame, &r()).unwrap(), &VARS);
        let gamma = smp.gamma(&VARS, &[r(), IndexTerm::plus(r())], 6, 3);
        let fm = transclosure_filtration(&model, &gamma, &LogicSpec::base(logic, "r")).unwrap();
        prop_assert!(verify_filtration(&model, &gamma, &fm).passed());
        prop_assert!(verify_filtration_lemma(&model, &gamma, &fm));
    }

    #[test]
    fn fusion_output_is_a_filtration(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 6);
        let (a, b) = (BaseLogic::ALL[smp.size(0, 4)], BaseLogic::ALL[smp.size(0, 4)]);
        let frame = Frame::new(n)
            .unwrap()
            .with_relation(r(), smp.relation_for(a, n))
            .unwrap()
            .with_relation(s(), smp.relation_for(b, n))
            .unwrap();
        let model = smp.model(frame, &VARS);
        let gamma = smp.gamma(&VARS, &[r(), s()], 6, 3);
        let parts = [LogicSpec::base(a, "r"), LogicSpec::base(b, "s")];
        let fm = fusion_strict_filtration(&model, &gamma, &parts).unwrap();
        prop_assert!(verify_filtration_lemma(&model, &gamma, &fm));
        prop_assert!(fm.class_count() <= 1 << gamma.len());
    }

    #[test]
    fn minimal_closure_filtration_stays_in_the_closure(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        let frame = Frame::new(n).unwrap().with_relation(r(), smp.relation(n, 0.25)).unwrap();
        let model = smp.model(expand_plus(&frame, &r()).unwrap(), &VARS);
        let phi: FormulaSet = (0..smp.size(1, 5)).map(|_| smp.formula(&VARS, &[r(), IndexTerm::plus(r())], 3)).collect();
        prop_assert!(check_a3_min(&model, &phi, &Limits::default()).unwrap().passed());
    }

    #[test]
    fn mfp_sentences_survive_minimal_filtration(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 7);
        let frame = smp.frame(n, &[r()]);
        let model = smp.model(frame, &VARS);
        let gamma = smp.gamma(&VARS, &[r()], 6, 3);
        let fm = build_filtration(&model, &gamma, Recipe::Minimal).unwrap();
        let (h, violation) = filtration_map(&fm, &r()).unwrap();
        prop_assert!(violation.is_none());
        let mut generator = MfpGenerator::new(seed, &["R"], 3);
        for _ in 0..5 {
            let psi = generator.sentence();
            prop_assert!(preservation_check(&model.frame, &fm.quotient.frame, &h, &psi).unwrap().preserved());
        }
    }

    #[test]
    fn identity_is_a_strong_onto_hom(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        let frame = smp.frame(n, &[r(), s()]);
        for e in [r(), s()] {
            prop_assert!(is_strong_onto_hom(&frame, &frame, &WorldMap::identity(n), &e).unwrap().is_none());
        }
    }

    #[test]
    fn differentiation_separates_and_is_stable(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, 8);
        let frame = smp.frame(n, &[r(), s()]);
        let model = smp.model(frame, &VARS);
        let d = differentiate(&model).unwrap();
        prop_assert!(d.witnesses_separate());
        let again = differentiate(&d.model).unwrap();
        prop_assert_eq!(again.partition.len(), d.partition.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decision_is_monotone_and_dual(seed in any::<u64>()) {
        let mut smp = Sampler::new(seed);
        let logic: LogicSpec = "K+".parse().unwrap();
        let f = smp.formula(&["p"], &[r(), IndexTerm::plus(r())], 3);
        let limits = Limits::default();
        let small = decide_validity(&f, &logic, 2, &limits).unwrap();
        let large = decide_validity(&f, &logic, 3, &limits).unwrap();
        if small.is_refuted() {
            prop_assert!(large.is_refuted());
        }
        if large.is_valid() {
            prop_assert!(small.is_valid());
        }
        let sat = decide_sat(&Formula::not(f.clone()), &logic, 3, &limits).unwrap();
        prop_assert_eq!(sat.is_sat(), large.is_refuted());
    }
}
