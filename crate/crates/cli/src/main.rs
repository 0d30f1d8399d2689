use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use filtrakit_core::decision::{compactness_demo, decide_sat, decide_validity, DecisionResult};
use filtrakit_core::filtration::{
    build_filtration, differentiate, equivalence_through, filtrate_with, fusion_strict_filtration,
    transclosure_filtration, verify_filtration, verify_filtration_lemma, FilteredModel, Recipe,
    VerificationReport,
};
use filtrakit_core::hilbert::corpus::{a_boxplus_derivation, r_boxplus_derivation};
use filtrakit_core::hilbert::{check_proof_with, parse_proof, soundness_spotcheck, ProofScript, ProofVerdict};
use filtrakit_core::mfp::{fo_sentence_holds, is_strong_onto_hom, mfp_member, parse_fo, WorldMap};
use filtrakit_core::semantics::{
    expand_plus, frame_to_json, frame_valid, fuse_models, iterate_sharp, model_to_json, parse_model,
    segerberg_table, truth, Frame, FrameValidity, LogicSpec, Model,
};
use filtrakit_core::syntax::{parse_formula, parse_index, sub_closure, Formula, FormulaSet, Signature};
use filtrakit_core::{Error, Limits};

#[derive(Parser)]
#[command(name = "filtrakit", version, about = "Finite Kripke semantics and filtration workbench")]
struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel search (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form
    Parse { formula: String },

    /// Evaluate a formula at a world of a model
    Mc { model: PathBuf, world: usize, formula: String },

    /// Check a formula against every valuation on a frame
    FrameValid { frame: PathBuf, formula: String },

    /// Filtrate a model through a Sub-closed Γ
    Filtrate {
        model: PathBuf,
        /// Members of Γ; the subformula closure is taken
        #[arg(long, required = true, num_args = 1..)]
        gamma: Vec<String>,
        /// `<base>`, `<base>+` or `fusion(...)`
        #[arg(long)]
        logic: Option<String>,
        #[arg(long, value_enum)]
        recipe: Option<RecipeArg>,
        /// Filtrate through ∼_Φ for these formulas instead of ∼_Γ
        #[arg(long, num_args = 1..)]
        through: Vec<String>,
    },

    /// ⊕- or ♯-expansion of a frame
    Expand {
        #[arg(value_enum)]
        kind: ExpandKind,
        frame: PathBuf,
        /// Atomic index to close (plus)
        #[arg(long, default_value = "r")]
        index: String,
        /// Number of ♯ rounds (sharp)
        #[arg(long, default_value_t = 1)]
        n: usize,
    },

    /// Fuse models over disjoint alphabets on a shared world set
    Fuse {
        #[arg(required = true, num_args = 1..)]
        models: Vec<PathBuf>,
    },

    /// Bounded validity check with countermodel search
    Decide {
        formula: String,
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },

    /// Bounded satisfiability check with model search
    Sat {
        formula: String,
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },

    /// First-order sentences over frames
    Mfp {
        #[command(subcommand)]
        command: MfpCommand,
    },

    /// Check that a world map is a strong onto homomorphism
    HomCheck {
        source: PathBuf,
        target: PathBuf,
        /// Image of each source world, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        map: Vec<usize>,
        /// Restrict to one index (default: every index of the source)
        #[arg(long)]
        index: Option<String>,
    },

    /// Quotient a model by its coarsest bisimulation, with separating formulas
    Differentiate { model: PathBuf },

    /// Hilbert proof scripts
    Proof {
        #[command(subcommand)]
        command: ProofCommand,
    },

    /// Replay the bundled checks
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        /// Largest finite subset for `compactness`
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum MfpCommand {
    /// Exit 0 if the sentence lies in the MFP fragment
    Member { sentence: String },
    /// Evaluate a sentence on a frame
    Eval { frame: PathBuf, sentence: String },
}

#[derive(Subcommand)]
enum ProofCommand {
    Check {
        file: PathBuf,
        /// Logic for a bare list of lines
        #[arg(long)]
        logic: Option<String>,
        /// Also check every line on frames up to this size
        #[arg(long)]
        spotcheck: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RecipeArg {
    Minimal,
    ClosureOfMinimal,
    Maximal,
}

impl From<RecipeArg> for Recipe {
    fn from(r: RecipeArg) -> Self {
        match r {
            RecipeArg::Minimal => Recipe::Minimal,
            RecipeArg::ClosureOfMinimal => Recipe::ClosureOfMinimal,
            RecipeArg::Maximal => Recipe::Maximal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpandKind {
    Plus,
    Sharp,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    LemmaA4Table,
    Compactness,
    A3Derivation,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = Result<bool, Failure>;

struct Ctx {
    json: bool,
    limits: Limits,
}

impl Ctx {
    fn emit(&self, human: impl FnOnce() -> String, machine: impl FnOnce() -> Value) {
        let text = if self.json { pretty(&machine()) } else { human() };
        // A closed pipe (`| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn model(path: &Path) -> Result<Model, Failure> {
    Ok(parse_model(&read(path)?)?)
}

fn formula(text: &str) -> Result<Formula, Failure> {
    Ok(parse_formula(text, &Signature::open())?)
}

fn logic(text: &str) -> Result<LogicSpec, Failure> {
    Ok(text.parse()?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values print")
}

fn strings(set: &FormulaSet) -> Vec<String> {
    set.iter().map(ToString::to_string).collect()
}

fn report_json(report: &VerificationReport) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx {
        json: cli.json,
        limits: Limits::from_env(),
    };
    match run(&ctx, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap_exceeded() { 3 } else { 2 })
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Run {
    match command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            let sub = sub_closure(&std::iter::once(f.clone()).collect());
            ctx.emit(
                || f.to_string(),
                || {
                    json!({
                        "formula": f.to_string(),
                        "modal_depth": f.modal_depth(),
                        "variables": f.variables(),
                        "indices": f.indices().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "subformulas": strings(&sub),
                    })
                },
            );
            Ok(true)
        }
        Command::Mc { model: path, world, formula: text } => {
            let m = model(&path)?;
            let f = formula(&text)?;
            if world >= m.world_count() {
                return Err(Failure::Usage(format!("world {world} outside 0..{}", m.world_count())));
            }
            let holds = truth(&m, world, &f)?;
            ctx.emit(
                || format!("{} at world {world}: {f}", if holds { "TRUE" } else { "FALSE" }),
                || json!({ "formula": f.to_string(), "world": world, "holds": holds }),
            );
            Ok(holds)
        }
        Command::FrameValid { frame, formula: text } => {
            let frame = model(&frame)?.frame;
            let f = formula(&text)?;
            let verdict = frame_valid(&frame, &f, &ctx.limits)?;
            let valid = verdict.is_valid();
            let (human, machine) = match &verdict {
                FrameValidity::Valid => ("VALID".to_string(), json!({ "formula": f.to_string(), "valid": true })),
                FrameValidity::Counterexample { valuation, world } => {
                    let m = Model::new(frame.clone(), valuation.clone())?;
                    let mj = model_to_json(&m);
                    (
                        format!("REFUTED at world {world}\n{}", pretty(&mj)),
                        json!({ "formula": f.to_string(), "valid": false, "world": world, "model": mj }),
                    )
                }
            };
            ctx.emit(|| human, || machine);
            Ok(valid)
        }
        Command::Filtrate { model: path, gamma, logic: l, recipe, through } => {
            let source = model(&path)?;
            let gamma: FormulaSet = gamma.iter().map(|g| formula(g)).collect::<Result<_, _>>()?;
            let gamma = sub_closure(&gamma);
            let spec = l.as_deref().map(logic).transpose()?;
            let fm = filtrate(&source, &gamma, spec.as_ref(), recipe.map(Recipe::from), &through)?;
            let report = verify_filtration(&source, &gamma, &fm);
            let lemma = verify_filtration_lemma(&source, &gamma, &fm);
            let ok = report.passed() && lemma;
            ctx.emit(
                || {
                    format!(
                        "{} classes {:?}\n{}\n{report}\nfiltration lemma: {}",
                        fm.class_count(),
                        fm.partition.to_lists(),
                        pretty(&fm.to_json()),
                        if lemma { "holds" } else { "fails" }
                    )
                },
                || json!({ "filtration": fm.to_json(), "report": report_json(&report), "lemma": lemma }),
            );
            Ok(ok)
        }
        Command::Expand { kind, frame, index, n } => {
            let frame = model(&frame)?.frame;
            let out = match kind {
                ExpandKind::Plus => expand_plus(&frame, &parse_index(&index, &Signature::open())?)?,
                ExpandKind::Sharp => iterate_sharp(&frame, n, &ctx.limits)?,
            };
            let v = frame_to_json(&out);
            ctx.emit(|| pretty(&v), || v.clone());
            Ok(true)
        }
        Command::Fuse { models } => {
            let ms = models.iter().map(|p| model(p)).collect::<Result<Vec<_>, _>>()?;
            let v = model_to_json(&fuse_models(&ms)?);
            ctx.emit(|| pretty(&v), || v.clone());
            Ok(true)
        }
        Command::Decide { formula: text, logic: l, max_size } => {
            let f = formula(&text)?;
            let res = decide_validity(&f, &logic(&l)?, max_size, &ctx.limits)?;
            emit_decision(ctx, &res);
            Ok(res.is_valid())
        }
        Command::Sat { formula: text, logic: l, max_size } => {
            let f = formula(&text)?;
            let res = decide_sat(&f, &logic(&l)?, max_size, &ctx.limits)?;
            emit_decision(ctx, &res);
            Ok(res.is_sat())
        }
        Command::Mfp { command } => match command {
            MfpCommand::Member { sentence } => {
                let psi = parse_fo(&sentence)?;
                let member = mfp_member(&psi);
                ctx.emit(
                    || format!("{} {psi}", if member { "MFP" } else { "NOT MFP" }),
                    || json!({ "sentence": psi.to_string(), "member": member }),
                );
                Ok(member)
            }
            MfpCommand::Eval { frame, sentence } => {
                let frame = model(&frame)?.frame;
                let psi = parse_fo(&sentence)?;
                let holds = fo_sentence_holds(&frame, &psi)?;
                ctx.emit(
                    || format!("{} {psi}", if holds { "TRUE" } else { "FALSE" }),
                    || json!({ "sentence": psi.to_string(), "holds": holds }),
                );
                Ok(holds)
            }
        },
        Command::HomCheck { source, target, map, index } => {
            let (src, tgt) = (model(&source)?.frame, model(&target)?.frame);
            let h = WorldMap::new(map, tgt.world_count())?;
            let indices = match index {
                Some(t) => vec![parse_index(&t, &Signature::open())?],
                None => src.alphabet().into_iter().collect(),
            };
            let mut results = Vec::new();
            for t in &indices {
                results.push((t.to_string(), is_strong_onto_hom(&src, &tgt, &h, t)?));
            }
            let ok = results.iter().all(|(_, v)| v.is_none());
            ctx.emit(
                || {
                    results
                        .iter()
                        .map(|(t, v)| match v {
                            None => format!("{t}: strong onto homomorphism"),
                            Some(v) => format!("{t}: {v}"),
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                },
                || {
                    json!({
                        "hom": ok,
                        "indices": results.iter().map(|(t, v)| json!({
                            "index": t,
                            "violation": v.as_ref().map(ToString::to_string),
                        })).collect::<Vec<_>>(),
                    })
                },
            );
            Ok(ok)
        }
        Command::Differentiate { model: path } => {
            let d = differentiate(&model(&path)?)?;
            let mj = model_to_json(&d.model);
            let witnesses: Vec<Value> = d
                .witnesses
                .iter()
                .map(|((a, b), f)| json!({ "classes": [a, b], "formula": f.to_string() }))
                .collect();
            ctx.emit(
                || {
                    let mut out = format!("{} classes {:?}\n{}", d.partition.len(), d.partition.to_lists(), pretty(&mj));
                    for ((a, b), f) in &d.witnesses {
                        out.push_str(&format!("\n{a} vs {b}: {f}"));
                    }
                    out
                },
                || json!({ "model": mj, "classes": d.partition.to_lists(), "witnesses": witnesses }),
            );
            Ok(d.witnesses_separate())
        }
        Command::Proof { command: ProofCommand::Check { file, logic: l, spotcheck } } => {
            let fallback = l.as_deref().map(logic).transpose()?;
            let script = parse_proof(&read(&file)?, fallback.as_ref())?;
            let verdict = check_proof_with(&script, &ctx.limits);
            let spot = match spotcheck {
                Some(n) if verdict.passed() => Some(soundness_spotcheck(&script, n, &ctx.limits)?),
                _ => None,
            };
            let ok = verdict.passed() && spot.as_ref().is_none_or(VerificationReport::passed);
            ctx.emit(
                || match &spot {
                    Some(r) => format!("{verdict}\n{r}"),
                    None => verdict.to_string(),
                },
                || {
                    let mut v = verdict_json(&verdict);
                    if let Some(r) = &spot {
                        v["spotcheck"] = report_json(r);
                    }
                    v
                },
            );
            Ok(ok)
        }
        Command::Demo { name, n } => demo(ctx, name, n),
    }
}

fn filtrate(
    source: &Model,
    gamma: &FormulaSet,
    spec: Option<&LogicSpec>,
    recipe: Option<Recipe>,
    through: &[String],
) -> Result<FilteredModel, Failure> {
    if !through.is_empty() {
        let phi: FormulaSet = through.iter().map(|t| formula(t)).collect::<Result<_, _>>()?;
        let recipe = recipe.or_else(|| spec.and_then(LogicSpec::recipe)).unwrap_or(Recipe::Minimal);
        return Ok(filtrate_with(source, gamma, equivalence_through(source, &phi)?, recipe)?);
    }
    Ok(match spec {
        Some(LogicSpec::Plus(base)) => transclosure_filtration(source, gamma, base)?,
        Some(LogicSpec::Fusion(parts)) => fusion_strict_filtration(source, gamma, parts)?,
        Some(base @ LogicSpec::Base { .. }) => {
            let recipe = recipe.or_else(|| base.recipe()).unwrap_or(Recipe::Minimal);
            build_filtration(source, gamma, recipe)?
        }
        Some(other) => {
            return Err(Failure::Core(Error::UnsupportedLogic(format!("no filtration recipe for `{other}`"))))
        }
        None => build_filtration(source, gamma, recipe.unwrap_or(Recipe::Minimal))?,
    })
}

fn emit_decision(ctx: &Ctx, res: &DecisionResult) {
    ctx.emit(
        || match res.witness() {
            Some((m, _)) => format!("{res}\n{}", pretty(&model_to_json(m))),
            None => res.to_string(),
        },
        || res.to_json(),
    );
}

fn verdict_json(verdict: &ProofVerdict) -> Value {
    json!({
        "passed": verdict.passed(),
        "goal_reached": verdict.goal_reached,
        "lines": verdict.lines.iter().map(|l| json!({
            "line": l.line + 1,
            "ok": l.ok(),
            "error": l.error,
        })).collect::<Vec<_>>(),
    })
}

fn show_script(script: &ProofScript, verdict: &ProofVerdict) -> String {
    let mut out = String::new();
    for (k, (line, v)) in script.lines.iter().zip(&verdict.lines).enumerate() {
        let refs: Vec<String> = line.justification.refs().iter().map(|r| (r + 1).to_string()).collect();
        out.push_str(&format!(
            "{:>3}. {}    [{}{}]{}\n",
            k + 1,
            line.formula,
            line.justification.rule_name(),
            if refs.is_empty() { String::new() } else { format!(" {}", refs.join(",")) },
            if v.ok() { "" } else { "  REJECTED" }
        ));
    }
    out.push_str(if verdict.passed() { "PROOF CHECKED" } else { "PROOF REJECTED" });
    out
}

fn demo(ctx: &Ctx, name: DemoName, n: usize) -> Run {
    match name {
        DemoName::LemmaA4Table => {
            let table = segerberg_table(3, &ctx.limits)?;
            let frame_json = |f: &Option<Frame>| f.as_ref().map_or(Value::Null, frame_to_json);
            ctx.emit(
                || table.to_string(),
                || {
                    json!({
                        "frames": table.frames,
                        "max_worlds": table.max_worlds,
                        "holds": table.holds(),
                        "rows": table.rows.iter().map(|r| json!({
                            "statement": r.label,
                            "claim": format!("{:?}", r.claim).to_lowercase(),
                            "violations": r.violations,
                            "first_violation": frame_json(&r.first_violation),
                            "converse_counterexample": frame_json(&r.converse_counterexample),
                        })).collect::<Vec<_>>(),
                    })
                },
            );
            Ok(table.holds())
        }
        DemoName::Compactness => {
            let witnesses = compactness_demo(n, n + 2)?;
            ctx.emit(
                || {
                    witnesses
                        .iter()
                        .map(|(set, m)| {
                            format!(
                                "{{{}}} satisfied at world 0 of a {}-world chain",
                                strings(set).join(", "),
                                m.world_count()
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                },
                || {
                    json!(witnesses
                        .iter()
                        .map(|(set, m)| json!({ "formulas": strings(set), "world": 0, "model": model_to_json(m) }))
                        .collect::<Vec<_>>())
                },
            );
            Ok(true)
        }
        DemoName::A3Derivation => {
            let scripts = [("R-boxplus", r_boxplus_derivation()), ("A-boxplus", a_boxplus_derivation())];
            let verdicts: Vec<ProofVerdict> = scripts.iter().map(|(_, s)| check_proof_with(s, &ctx.limits)).collect();
            ctx.emit(
                || {
                    scripts
                        .iter()
                        .zip(&verdicts)
                        .map(|((name, s), v)| format!("{name} in {}: {}\n{}", s.logic, s.goal, show_script(s, v)))
                        .collect::<Vec<_>>()
                        .join("\n\n")
                },
                || {
                    json!(scripts
                        .iter()
                        .zip(&verdicts)
                        .map(|((name, s), v)| json!({ "name": name, "script": s.to_json(), "verdict": verdict_json(v) }))
                        .collect::<Vec<_>>())
                },
            );
            Ok(verdicts.iter().all(ProofVerdict::passed))
        }
    }
}
