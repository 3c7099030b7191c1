//! `nlwb`: batch front end for the workbench.
//!
//! Output is JSON on stdout unless `--format text` is given. Exit codes:
//! 0 when the command completed, 1 on a usage or input error, 2 when the
//! prover gave up with an unknown verdict.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nlwb::calculus::{check_derivation, Derivation, ProofResult, Prover, SearchBudget, SystemSpec};
use nlwb::kprover::{k_decide, TableauVerdict};
use nlwb::semantics::model_json::{
    kripke_from_json, kripke_to_json, looks_binary, ternary_from_json, ternary_to_json,
};
use nlwb::semantics::{eval_modal, find_countermodel, sequent_true, CountermodelBudget};
use nlwb::syntax::{parse_lambek, parse_modal, parse_sequent, Sequent};
use nlwb::transform::{
    build_ternary_model, build_ternary_model_exchange, dagger, ddagger_problem, extend_with_unit,
    pipeline_k_to_dfnl, section_embed,
};

#[derive(Parser, Debug)]
#[command(name = "nlwb", version, about = "Nonassociative Lambek workbench")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for every randomised search.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    /// A modal formula.
    Modal,
    /// A BFNL* sequent.
    Bfnl,
    /// A BDFNL* sequent.
    Bdfnl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Stage {
    Bfnl,
    Bdfnl,
    Dfnl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    Plain,
    Exchange,
    Unit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translate a formula or sequent along the reduction chain.
    Translate {
        input: String,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long, value_enum)]
        to: Stage,
    },
    /// Search for a derivation of a sequent.
    Prove {
        goal: String,
        /// System slug, e.g. `bfnl-star`, `bdfnl-star`, `bfnl-e-star-s4`.
        #[arg(long, default_value = "bfnl-star")]
        system: String,
        /// Assumptions, one sequent per line; `#` starts a comment.
        #[arg(long)]
        assumptions: Option<PathBuf>,
        /// `depth:N,goals:N,cutsize:N,ms:N`.
        #[arg(long)]
        budget: Option<String>,
        /// Re-read the printed derivation and run the checker on it.
        #[arg(long)]
        recheck: bool,
    },
    /// Evaluate a formula or sequent in a model file.
    ModelCheck {
        model: PathBuf,
        /// A modal formula for Kripke models; a formula or sequent otherwise.
        input: String,
        /// Report only this state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Search for a ternary countermodel.
    Countermodel {
        goal: String,
        #[arg(long)]
        assumptions: Option<PathBuf>,
        /// Largest random model tried.
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// Random models tried after the exhaustive phase.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Only consider models closed under exchange.
        #[arg(long)]
        exchange: bool,
    },
    /// Run the reduction from K to DFNL* on a modal formula.
    Pipeline {
        formula: String,
        /// Also derive the final DFNL* sequent.
        #[arg(long)]
        run_prover: bool,
        #[arg(long)]
        budget: Option<String>,
    },
    /// Decide a modal formula in K.
    Kdecide { formula: String },
    /// Build a ternary model from a Kripke model file.
    BuildModel {
        kripke: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
    },
}

/// What a command produced: its JSON, a text rendering, and whether the
/// verdict was unknown.
struct Outcome {
    json: Value,
    text: String,
    unknown: bool,
}

impl Outcome {
    fn done(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            unknown: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("values serialise") + "\n"
                }
                Format::Text => out.text,
            };
            // A closed pipe (e.g. `| head`) is not an error of ours.
            let _ = std::io::stdout().write_all(body.as_bytes());
            if out.unknown {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Translate { input, from, to } => translate(input, *from, *to),
        Command::Prove {
            goal,
            system,
            assumptions,
            budget,
            recheck,
        } => {
            let sys = SystemSpec::parse(system)?;
            let goal = parse_sequent(goal).context("goal")?;
            let phi = read_assumptions(assumptions.as_deref())?;
            let budget = parse_budget(budget.as_deref())?;
            let mut prover = Prover::new(sys, &phi, budget)?;
            prover.countermodels.seed = cli.seed;
            let result = prover.derive(&goal)?;
            proof_outcome(&sys, &phi, &goal, &result, *recheck)
        }
        Command::ModelCheck {
            model,
            input,
            state,
        } => model_check(model, input, state.as_deref()),
        Command::Countermodel {
            goal,
            assumptions,
            max_states,
            samples,
            exchange,
        } => {
            let goal = parse_sequent(goal).context("goal")?;
            let phi = read_assumptions(assumptions.as_deref())?;
            let budget = CountermodelBudget {
                seed: cli.seed,
                random_samples: *samples,
                max_random_states: *max_states,
                exchange: *exchange,
                ..CountermodelBudget::default()
            };
            Ok(match find_countermodel(&goal, &phi, &budget) {
                Some((j, state)) => {
                    let model = ternary_to_json(&j);
                    let text = format!(
                        "countermodel, {goal} fails at {state}\n{}",
                        render::model(&model)
                    );
                    Outcome::done(json!({"found": true, "state": state, "model": model}), text)
                }
                None => Outcome {
                    json: json!({"found": false}),
                    text: "no countermodel found\n".into(),
                    unknown: true,
                },
            })
        }
        Command::Pipeline {
            formula,
            run_prover,
            budget,
        } => {
            let a = parse_modal(formula).context("formula")?;
            let budget = parse_budget(budget.as_deref())?;
            let p = pipeline_k_to_dfnl(&a)?;
            let bdfnl = json!({
                "goal": p.bdfnl.goal.to_string(),
                "assumptions": strings(&p.bdfnl.assumptions),
            });
            let mut out = json!({
                "source": a.to_string(),
                "bfnl": Sequent::empty(&p.dagger).to_string(),
                "bdfnl": bdfnl,
                "dfnl": {"goal": p.goal.to_string(), "assumptions": strings(&p.assumptions)},
                "output_size": p.output_size(),
            });
            let mut text = format!(
                "K      {a}\nBFNL*  {}\nBDFNL* {} from {} assumptions\nDFNL*  {} from {} assumptions\n",
                Sequent::empty(&p.dagger),
                p.bdfnl.goal,
                p.bdfnl.assumptions.len(),
                p.goal,
                p.assumptions.len(),
            );
            let mut unknown = false;
            if *run_prover {
                let mut prover = Prover::new(p.system, &p.assumptions, budget)?;
                prover.countermodels.seed = cli.seed;
                let result = prover.derive(&p.goal)?;
                let proved = proof_outcome(&p.system, &p.assumptions, &p.goal, &result, false)?;
                out["prover"] = proved.json;
                text.push_str(&proved.text);
                unknown = proved.unknown;
            }
            Ok(Outcome {
                json: out,
                text,
                unknown,
            })
        }
        Command::Kdecide { formula } => {
            let a = parse_modal(formula).context("formula")?;
            let v = k_decide(&a);
            let text = match &v {
                TableauVerdict::Valid(c) => format!("valid\n{c}"),
                TableauVerdict::Invalid { model, root } => format!(
                    "invalid, fails at {root}\n{}",
                    render::model(&kripke_to_json(model))
                ),
            };
            Ok(Outcome::done(v.to_json(), text))
        }
        Command::BuildModel { kripke, variant } => {
            let m = kripke_from_json(&read_json(kripke)?)?;
            let j = match variant {
                Variant::Plain => build_ternary_model(&m),
                Variant::Exchange => build_ternary_model_exchange(&m),
                Variant::Unit => extend_with_unit(&build_ternary_model(&m), &m)?,
            };
            let model = ternary_to_json(&j);
            let text = render::model(&model);
            Ok(Outcome::done(model, text))
        }
    }
}

fn strings(ss: &[Sequent]) -> Vec<String> {
    ss.iter().map(Sequent::to_string).collect()
}

fn parse_budget(s: Option<&str>) -> Result<SearchBudget> {
    Ok(match s {
        Some(s) => s.parse()?,
        None => SearchBudget::default(),
    })
}

fn read_assumptions(path: Option<&Path>) -> Result<Vec<Sequent>> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let s = parse_sequent(line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(s);
    }
    Ok(out)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn proof_outcome(
    sys: &SystemSpec,
    phi: &[Sequent],
    goal: &Sequent,
    result: &ProofResult,
    recheck: bool,
) -> Result<Outcome> {
    let mut json = result.to_json();
    json["system"] = json!(sys.slug());
    json["goal"] = json!(goal.to_string());
    let text = match result {
        ProofResult::Proved(p) => format!("proved {goal} in {sys}\n{}", p.to_text()),
        ProofResult::Refuted { model, state } => format!(
            "refuted {goal} in {sys}, fails at {state}\n{}",
            render::model(&ternary_to_json(model))
        ),
        ProofResult::Unknown(r) => format!("unknown {goal} in {sys}: {r}\n"),
    };
    if recheck {
        if let Some(d) = json.get("derivation") {
            let back = Derivation::from_json(d)?;
            let report = check_derivation(sys, phi, &back);
            if !report.valid || back.conclusion != *goal {
                bail!("printed derivation fails the checker: {:?}", report.trail);
            }
            json["recheck"] = json!({"valid": true, "nodes": report.nodes});
        }
    }
    Ok(Outcome {
        json,
        text,
        unknown: matches!(result, ProofResult::Unknown(_)),
    })
}

fn translate(input: &str, from: Source, to: Stage) -> Result<Outcome> {
    let rank = |s: Stage| match s {
        Stage::Bfnl => 0,
        Stage::Bdfnl => 1,
        Stage::Dfnl => 2,
    };
    let start = match from {
        Source::Modal => 0,
        Source::Bfnl => 1,
        Source::Bdfnl => 2,
    };
    if rank(to) + 1 < start {
        bail!("cannot translate {from:?} input back to {to:?}");
    }
    let mut goal = match from {
        Source::Modal => Sequent::empty(&dagger(&parse_modal(input).context("formula")?)?),
        _ => parse_sequent(input).context("sequent")?,
    };
    let mut assumptions = Vec::new();
    if start <= 1 && rank(to) >= 1 {
        let d = ddagger_problem(&goal);
        goal = d.goal;
        assumptions = d.assumptions;
    }
    if rank(to) == 2 {
        (goal, assumptions) = section_embed(&goal, &assumptions)?;
    }
    let mut text = format!("{goal}\n");
    for a in &assumptions {
        text.push_str(&format!("  assuming {a}\n"));
    }
    Ok(Outcome::done(
        json!({
            "stage": format!("{to:?}").to_lowercase(),
            "goal": goal.to_string(),
            "assumptions": strings(&assumptions),
        }),
        text,
    ))
}

fn model_check(path: &Path, input: &str, state: Option<&str>) -> Result<Outcome> {
    let doc = read_json(path)?;
    // A document without triples reads either way; a sequent or a formula
    // outside the modal grammar settles it.
    let modal = (looks_binary(&doc) && !input.contains("=>"))
        .then(|| parse_modal(input).ok())
        .flatten();
    let (names, truth): (Vec<String>, Vec<bool>) = if let Some(a) = modal {
        let m = kripke_from_json(&doc)?;
        let names = m.states().to_vec();
        let truth = names
            .iter()
            .map(|w| eval_modal(&m, w, &a))
            .collect::<nlwb::Result<_>>()?;
        (names, truth)
    } else {
        let j = ternary_from_json(&doc)?;
        let s = if input.contains("=>") {
            parse_sequent(input).context("sequent")?
        } else {
            Sequent::empty(&parse_lambek(input).context("formula")?)
        };
        let names = j.states().to_vec();
        let truth = names
            .iter()
            .map(|u| sequent_true(&j, u, &s))
            .collect::<nlwb::Result<_>>()?;
        (names, truth)
    };
    let pick: Vec<(String, bool)> = match state {
        Some(w) => {
            let i = names
                .iter()
                .position(|n| n == w)
                .with_context(|| format!("no state `{w}` in the model"))?;
            vec![(names[i].clone(), truth[i])]
        }
        None => names.into_iter().zip(truth).collect(),
    };
    let everywhere = pick.iter().all(|(_, t)| *t);
    let text = pick
        .iter()
        .map(|(w, t)| format!("{w}: {t}\n"))
        .collect::<String>();
    let json = json!({
        "input": input,
        "states": pick.iter().map(|(w, t)| (w.clone(), json!(t))).collect::<serde_json::Map<_, _>>(),
        "holds_everywhere": everywhere,
        "falsified_at": pick.iter().filter(|(_, t)| !t).map(|(w, _)| w.clone()).collect::<Vec<_>>(),
    });
    Ok(Outcome::done(json, text))
}
