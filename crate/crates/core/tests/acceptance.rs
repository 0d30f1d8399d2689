//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p filtrakit-core --test acceptance`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use filtrakit_core::decision::{compactness_demo, compactness_subset, decide_validity, reverify};
use filtrakit_core::filtration::{
    build_filtration, check_a3_min, differentiate, differentiate_filtration, fusion_strict_filtration,
    transclosure_filtration, verify_filtration, verify_filtration_lemma, Recipe,
};
use filtrakit_core::hilbert::corpus::corpus;
use filtrakit_core::hilbert::{check_proof, mutations, soundness_spotcheck};
use filtrakit_core::mfp::{
    density_fo, filtration_map, fo_sentence_holds, preservation_check, reflexivity_fo, symmetry_fo,
    MfpGenerator,
};
use filtrakit_core::sample::Sampler;
use filtrakit_core::semantics::{
    enumerate_frames, expand_plus, segerberg_table, truth, BaseLogic, Frame, LogicSpec, Model, Relation,
};
use filtrakit_core::syntax::{instantiate_segerberg, parse_formula, pdl_axioms, sub_closure, Formula, IndexTerm, Signature};
use filtrakit_core::Limits;

const FILTRATION_MODELS: u64 = 1000;
const FILTRATION_MAX_WORLDS: usize = 8;
const FILTRATION_MAX_GAMMA: usize = 6;
const FILTRATION_DEPTH: usize = 3;
const FILTRATION_BUDGET: Duration = Duration::from_secs(10);

const SEGERBERG_WORLDS: usize = 3;
const SEGERBERG_FRAMES: u64 = 4 + 256 + 262_144;
const SEGERBERG_BUDGET: Duration = Duration::from_secs(60);

const CLOSURE_MIN_MODELS: u64 = 500;
const CLOSURE_MIN_MAX_PHI: usize = 5;

const TRANSFER_MODELS: u64 = 200;
const TRANSFER_MAX_WORLDS: usize = 7;

const FUSION_MODELS: u64 = 200;
const FUSION_MAX_WORLDS: usize = 6;

const MFP_SENTENCES: u64 = 300;
const MFP_FILTRATIONS: u64 = 100;
const MFP_DEPTH: usize = 3;
const MFP_EXHAUSTIVE_WORLDS: usize = 4;

const DECISION_MAX_SIZE: usize = 4;
const DECISION_BUDGET: Duration = Duration::from_secs(300);
const COMPACTNESS_N: usize = 4;

const HILBERT_FRAMES: usize = 3;
const HILBERT_BUDGET: Duration = Duration::from_secs(60);

const CONVERGENT_RELATIONS: usize = 1000;
const CONVERGENT_MAX_WORLDS: usize = 8;

const DIFFERENTIATION_MODELS: u64 = 300;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r() -> IndexTerm {
    IndexTerm::atom("r")
}

fn rplus() -> IndexTerm {
    IndexTerm::plus(r())
}

fn formula(text: &str) -> Formula {
    parse_formula(text, &Signature::open()).expect("fixture formula parses")
}

/// Runs `check` once per seed in parallel; the first failing seed is reported.
fn for_seeds(base: u64, count: u64, check: impl Fn(u64) -> Result<(), String> + Sync) -> Outcome {
    match (0..count).into_par_iter().find_map_first(|i| check(base + i).err().map(|e| (base + i, e))) {
        Some((seed, e)) => Err(format!("seed {seed}: {e}")),
        None => Ok(format!("{count}/{count} cases")),
    }
}

fn within(budget: Duration, started: Instant, ok: String) -> Outcome {
    let took = started.elapsed();
    if took <= budget {
        Ok(ok)
    } else {
        Err(format!("{ok}, but took {took:.1?} > {budget:?}"))
    }
}

fn filtration_lemma() -> Outcome {
    let started = Instant::now();
    let vars = ["p", "q"];
    let ok = for_seeds(1_000, FILTRATION_MODELS, |seed| {
        let mut s = Sampler::new(seed);
        let n = s.size(1, FILTRATION_MAX_WORLDS);
        let indices: Vec<IndexTerm> = ["r", "s"][..s.size(1, 2)].iter().map(|a| IndexTerm::atom(*a)).collect();
        for recipe in [Recipe::Minimal, Recipe::ClosureOfMinimal] {
            let frame = match recipe {
                // Closing the minimal relation stays below the maximal one
                // only on transitive sources.
                Recipe::ClosureOfMinimal => {
                    let mut f = Frame::new(n).unwrap();
                    for t in &indices {
                        f.set_relation(t.clone(), s.relation_for(BaseLogic::K4, n)).unwrap();
                    }
                    f
                }
                _ => s.frame(n, &indices),
            };
            let model = s.model(frame, &vars);
            let gamma = s.gamma(&vars, &indices, FILTRATION_MAX_GAMMA, FILTRATION_DEPTH);
            let fm = build_filtration(&model, &gamma, recipe).map_err(|e| e.to_string())?;
            let report = verify_filtration(&model, &gamma, &fm);
            if !report.passed() {
                return Err(format!("{recipe}: {report}"));
            }
            if !verify_filtration_lemma(&model, &gamma, &fm) {
                return Err(format!("{recipe}: truth not preserved"));
            }
        }
        Ok(())
    })?;
    within(FILTRATION_BUDGET, started, format!("{ok} x 2 recipes"))
}

fn segerberg() -> Outcome {
    let started = Instant::now();
    let table = segerberg_table(SEGERBERG_WORLDS, &Limits::default()).map_err(|e| e.to_string())?;
    if table.frames != SEGERBERG_FRAMES {
        return Err(format!("enumerated {} frames, expected {SEGERBERG_FRAMES}", table.frames));
    }
    if !table.holds() {
        return Err(table.to_string());
    }
    // The documented converse counterexample to (4).
    let frame = Frame::unimodal(3, "r", [(0, 1), (1, 2)])
        .unwrap()
        .with_relation(IndexTerm::atom("s"), Relation::from_pairs(3, [(0, 2)]).unwrap())
        .unwrap();
    let [_, _, a3] = instantiate_segerberg(&r(), &IndexTerm::atom("s"));
    let limits = Limits::default();
    if filtrakit_core::semantics::frame_valid(&frame, &a3, &limits).unwrap().is_valid() {
        return Err("R={(0,1),(1,2)}, S={(0,2)} validates A3".into());
    }
    within(
        SEGERBERG_BUDGET,
        started,
        format!("{} frames, 5 statements exact, converses of (3) and (4) refuted", table.frames),
    )
}

fn closure_min_filtration() -> Outcome {
    let limits = Limits::default();
    for_seeds(3_000, CLOSURE_MIN_MODELS, |seed| {
        let mut s = Sampler::new(seed);
        let n = s.size(1, FILTRATION_MAX_WORLDS);
        let frame = Frame::new(n).unwrap().with_relation(r(), s.relation(n, 0.3)).unwrap();
        let model = s.model(expand_plus(&frame, &r()).unwrap(), &["p", "q"]);
        let len = s.size(1, CLOSURE_MIN_MAX_PHI);
        let phi = (0..len).map(|_| s.formula(&["p", "q"], &[r(), rplus()], 3)).collect();
        let report = check_a3_min(&model, &phi, &limits).map_err(|e| e.to_string())?;
        report.passed().then_some(()).ok_or_else(|| report.to_string())
    })
}

fn transfer() -> Outcome {
    let mut total = 0;
    for (k, logic) in [BaseLogic::K, BaseLogic::T, BaseLogic::K4, BaseLogic::S4, BaseLogic::S5].into_iter().enumerate() {
        let base = LogicSpec::base(logic, "r");
        for_seeds(4_000 + 1_000 * k as u64, TRANSFER_MODELS, |seed| {
            let mut s = Sampler::new(seed);
            let n = s.size(1, TRANSFER_MAX_WORLDS);
            let frame = Frame::new(n).unwrap().with_relation(r(), s.relation_for(logic, n)).unwrap();
            let model = s.model(expand_plus(&frame, &r()).unwrap(), &["p", "q"]);
            let gamma = s.gamma(&["p", "q"], &[r(), rplus()], FILTRATION_MAX_GAMMA, FILTRATION_DEPTH);
            let fm = transclosure_filtration(&model, &gamma, &base).map_err(|e| e.to_string())?;
            let report = verify_filtration(&model, &gamma, &fm);
            if !report.passed() {
                return Err(report.to_string());
            }
            let q = &fm.quotient.frame;
            if !base.frame_condition(q) {
                return Err(format!("quotient violates the {} condition", logic.name()));
            }
            let rr = q.relation_of(&r()).unwrap();
            if *q.relation_of(&rplus()).unwrap() != rr.transitive_closure() {
                return Err("quotient S is not R⁺".into());
            }
            if fm.class_count() > 1usize << (2 * gamma.len()) {
                return Err(format!("{} classes for |Γ| = {}", fm.class_count(), gamma.len()));
            }
            Ok(())
        })
        .map_err(|e| format!("{}: {e}", logic.name()))?;
        total += TRANSFER_MODELS;
    }
    Ok(format!("{total} models over K, T, K4, S4, S5"))
}

fn fusion() -> Outcome {
    let components = [LogicSpec::base(BaseLogic::S4, "r"), LogicSpec::base(BaseLogic::S5, "s")];
    let s_idx = IndexTerm::atom("s");
    for_seeds(9_000, FUSION_MODELS, |seed| {
        let mut smp = Sampler::new(seed);
        let n = smp.size(1, FUSION_MAX_WORLDS);
        let frame = Frame::new(n)
            .unwrap()
            .with_relation(r(), smp.relation_for(BaseLogic::S4, n))
            .unwrap()
            .with_relation(s_idx.clone(), smp.relation_for(BaseLogic::S5, n))
            .unwrap();
        let model = smp.model(frame, &["p", "q"]);
        let gamma = smp.gamma(&["p", "q"], &[r(), s_idx.clone()], FILTRATION_MAX_GAMMA, FILTRATION_DEPTH);
        let fm = fusion_strict_filtration(&model, &gamma, &components).map_err(|e| e.to_string())?;
        let report = verify_filtration(&model, &gamma, &fm);
        if !report.passed() {
            return Err(report.to_string());
        }
        let q = &fm.quotient.frame;
        if !q.relation_of(&r()).unwrap().is_preorder() || !q.relation_of(&s_idx).unwrap().is_equivalence() {
            return Err("component conditions fail on the quotient".into());
        }
        Ok(())
    })
}

fn mfp() -> Outcome {
    let sentences: Vec<_> = (0..MFP_SENTENCES)
        .map(|i| MfpGenerator::new(20_000 + i, &["R"], MFP_DEPTH).sentence())
        .collect();
    let sampled = for_seeds(30_000, MFP_FILTRATIONS, |seed| {
        let mut s = Sampler::new(seed);
        let n = s.size(1, FILTRATION_MAX_WORLDS);
        let frame = s.frame(n, &[r()]);
        let model = s.model(frame, &["p", "q"]);
        let gamma = s.gamma(&["p", "q"], &[r()], FILTRATION_MAX_GAMMA, FILTRATION_DEPTH);
        let fm = build_filtration(&model, &gamma, Recipe::Minimal).map_err(|e| e.to_string())?;
        let (h, violation) = filtration_map(&fm, &r()).map_err(|e| e.to_string())?;
        if let Some(v) = violation {
            return Err(format!("quotient map is not a strong onto homomorphism: {v}"));
        }
        for psi in &sentences {
            let p = preservation_check(&model.frame, &fm.quotient.frame, &h, psi).map_err(|e| e.to_string())?;
            if !p.preserved() {
                return Err(format!("`{psi}` lost"));
            }
        }
        Ok(())
    })?;

    let limits = Limits::default();
    let gamma = sub_closure(&[formula("[r]p -> p"), formula("[r][r]p")].into_iter().collect());
    let properties = [reflexivity_fo("R"), symmetry_fo("R"), density_fo("R")];
    let mut frames = 0u64;
    for n in 1..=MFP_EXHAUSTIVE_WORLDS {
        let all: Vec<Frame> = enumerate_frames(n, &[r()], &limits).unwrap().collect();
        frames += all.len() as u64;
        let bad = all.par_iter().find_map_first(|frame| {
            let holding: Vec<_> = properties.iter().filter(|psi| fo_sentence_holds(frame, psi).unwrap()).collect();
            if holding.is_empty() {
                return None;
            }
            (0..1u64 << n).find_map(|code| {
                let valuation = [("p".to_string(), (0..n).filter(|w| code >> w & 1 == 1).collect())]
                    .into_iter()
                    .collect();
                let model = Model::new(frame.clone(), valuation).unwrap();
                let fm = build_filtration(&model, &gamma, Recipe::Minimal).unwrap();
                holding
                    .iter()
                    .find(|psi| !fo_sentence_holds(&fm.quotient.frame, psi).unwrap())
                    .map(|psi| format!("`{psi}` lost on {frame:?}"))
            })
        });
        if let Some(e) = bad {
            return Err(e);
        }
    }
    Ok(format!(
        "{MFP_SENTENCES} sentences x {sampled}; reflexivity, symmetry, density kept on all {frames} frames ≤{MFP_EXHAUSTIVE_WORLDS} worlds"
    ))
}

fn decision() -> Outcome {
    let started = Instant::now();
    let limits = Limits::default();
    let k_plus: LogicSpec = "K+".parse().unwrap();
    let k_sharp: LogicSpec = "K#1".parse().unwrap();
    let segerberg = instantiate_segerberg(&r(), &rplus());
    let mut checked = 0;
    let cases = segerberg
        .iter()
        .map(|f| (f.clone(), &k_plus))
        .chain(pdl_axioms(&[r()]).into_vec().into_iter().map(|f| (f, &k_sharp)));
    for (f, logic) in cases {
        let res = decide_validity(&f, logic, DECISION_MAX_SIZE, &limits).map_err(|e| e.to_string())?;
        if !res.is_valid() {
            return Err(format!("{f} in {logic}: {res}"));
        }
        checked += 1;
    }
    for text in ["[r]p -> [r+]p", "[r+]p -> p"] {
        let f = formula(text);
        let res = decide_validity(&f, &k_plus, DECISION_MAX_SIZE, &limits).map_err(|e| e.to_string())?;
        if !res.is_refuted() || !reverify(&res, &f, &k_plus) {
            return Err(format!("{text}: {res}"));
        }
    }
    let witnesses = compactness_demo(COMPACTNESS_N, COMPACTNESS_N + 2).map_err(|e| e.to_string())?;
    let full = compactness_subset(COMPACTNESS_N).into_vec();
    for mask in 0..1u32 << full.len() {
        let subset: Vec<&Formula> = full.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| f).collect();
        let satisfied = witnesses.iter().any(|(_, m)| {
            k_plus.frame_condition(&m.frame)
                && (0..m.world_count()).any(|w| subset.iter().all(|f| truth(m, w, f).unwrap()))
        });
        if !satisfied {
            return Err(format!("no witness for subset {mask:#b}"));
        }
    }
    within(
        DECISION_BUDGET,
        started,
        format!(
            "{checked} axioms valid at ≤{DECISION_MAX_SIZE}, 2 refuted and re-verified, all {} subsets of the n={COMPACTNESS_N} set satisfied",
            1u32 << full.len()
        ),
    )
}

fn hilbert() -> Outcome {
    let started = Instant::now();
    let limits = Limits::default();
    let mut rejected = 0;
    let scripts = corpus();
    for (stem, script) in &scripts {
        let verdict = check_proof(script);
        if !verdict.passed() {
            return Err(format!("{stem}: {verdict}"));
        }
        for (what, m) in mutations(script) {
            if check_proof(&m).passed() {
                return Err(format!("{stem}: mutation `{what}` accepted"));
            }
            rejected += 1;
        }
        let report = soundness_spotcheck(script, HILBERT_FRAMES, &limits).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!("{stem}: {report}"));
        }
    }
    within(
        HILBERT_BUDGET,
        started,
        format!("{} proofs check, {rejected} mutations rejected, spot-checked on frames ≤{HILBERT_FRAMES}", scripts.len()),
    )
}

/// Direct reading of the Church-Rosser property.
fn convergent_oracle(r: &Relation) -> bool {
    let n = r.size();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| !(r.contains(x, y) && r.contains(x, z)) || (0..n).any(|w| r.contains(y, w) && r.contains(z, w)))
        })
    })
}

fn convergence() -> Outcome {
    let mut s = Sampler::new(50_000);
    let mut found = 0;
    while found < CONVERGENT_RELATIONS {
        let n = s.size(1, CONVERGENT_MAX_WORLDS);
        let Some(rel) = s.convergent(n, 1) else { continue };
        if !convergent_oracle(&rel) {
            return Err(format!("sampler produced a non-convergent relation {rel:?}"));
        }
        let closure = rel.transitive_closure();
        if !convergent_oracle(&closure) {
            return Err(format!("closure of {rel:?} is not convergent"));
        }
        found += 1;
    }
    Ok(format!("{found}/{CONVERGENT_RELATIONS} closures convergent"))
}

fn differentiation() -> Outcome {
    for_seeds(60_000, DIFFERENTIATION_MODELS, |seed| {
        let mut s = Sampler::new(seed);
        let n = s.size(1, FILTRATION_MAX_WORLDS);
        let indices = [r(), IndexTerm::atom("s")];
        let k = s.size(1, 2);
        let frame = s.frame(n, &indices[..k]);
        let model = s.model(frame, &["p", "q"]);
        let d = differentiate(&model).map_err(|e| e.to_string())?;
        for ((a, b), f) in &d.witnesses {
            if truth(&d.model, *a, f).unwrap() == truth(&d.model, *b, f).unwrap() {
                return Err(format!("classes {a} and {b} not separated by {f}"));
            }
        }
        let classes = d.partition.len();
        if d.witnesses.len() != classes * (classes.saturating_sub(1)) / 2 {
            return Err("a class pair has no witness".into());
        }
        let gamma = s.gamma(&["p", "q"], &indices[..k], FILTRATION_MAX_GAMMA, FILTRATION_DEPTH);
        let fm = build_filtration(&model, &gamma, Recipe::Minimal).map_err(|e| e.to_string())?;
        let (composed, _) = differentiate_filtration(&fm).map_err(|e| e.to_string())?;
        let report = verify_filtration(&model, &gamma, &composed);
        report.passed().then_some(()).ok_or_else(|| report.to_string())
    })
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("filtration lemma on random models", filtration_lemma),
        ("Segerberg correspondence table on frames ≤3", segerberg),
        ("minimal filtration of the closure stays in the closure, A3 holds", closure_min_filtration),
        ("transitive closure transfer pipeline", transfer),
        ("fusion strict filtration S4 x S5", fusion),
        ("MFP sentences survive minimal filtration", mfp),
        ("bounded decision, refutation and compactness", decision),
        ("Hilbert corpus, mutations and spot-check", hilbert),
        ("transitive closure keeps convergence", convergence),
        ("differentiation witnesses and composition", differentiation),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
