//! Command-line front end for the finite-model workbench.
//!
//! Exit codes follow one convention across subcommands: 0 means the check
//! succeeded (parses, forces, valid at bound, derivation ok, experiment
//! verified), 1 means the tool produced a refutation (countermodel found,
//! world refutes, condition fails, proof error), and 2 means the input
//! was unusable. All output is deterministic for fixed inputs: reports
//! carry no timestamps and sampled searches are seeded.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fbl_core::search::{experiment_json, search_report};
use fbl_core::{
    check_conditions, check_derivation, derivation_from_json, find_countermodel, forces,
    logic_spec, parse, run_experiment, subformula_extensions, CondFlag, Extension, FrameClass,
    LogicId, Model, SearchConfig, SearchOutcome,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fbl", version, about = "Finite-model workbench for logics of false belief")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical rendering.
    Parse { formula: String },
    /// Evaluate a formula at one world of a model file.
    Eval {
        /// Model JSON file.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// World name within the model.
        #[arg(long, value_name = "ID")]
        world: String,
        formula: String,
    },
    /// Validate a model file and report its frame conditions.
    CheckModel {
        file: PathBuf,
        /// Restrict the report to these flags and fail if any is violated.
        #[arg(long, value_name = "FLAGS", value_parser = FrameClass::parse)]
        class: Option<FrameClass>,
    },
    /// Decide validity at a world bound.
    Valid {
        formula: String,
        #[command(flatten)]
        scope: Scope,
        /// Largest world count to consider.
        #[arg(long, value_name = "N", default_value_t = 2)]
        max_worlds: usize,
        /// Check a seeded pseudorandom sample instead of enumerating.
        #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
        sampled: Option<Vec<u64>>,
        /// Worker threads for sampled mode (output is identical for any count).
        #[arg(long, value_name = "N", default_value_t = 1)]
        workers: usize,
    },
    /// Search for a countermodel at a world bound.
    Countermodel {
        formula: String,
        #[command(flatten)]
        scope: Scope,
        /// Largest world count to consider.
        #[arg(long, value_name = "N", default_value_t = 2)]
        max_worlds: usize,
    },
    /// Check a derivation file.
    Prove {
        /// Derivation JSON file.
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
    /// Run a named exploratory sweep.
    Experiment {
        name: String,
        /// Largest world count to consider.
        #[arg(long, value_name = "N", default_value_t = 2)]
        max_worlds: usize,
    },
}

/// Where to search: a cataloged logic (implying its frame class) or an
/// explicit conjunction of frame-condition flags.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Scope {
    /// Logic id: W, WC, MW, MWC, A, B, C, D or BK.
    #[arg(long, value_name = "ID", value_parser = parse_logic_id)]
    logic: Option<LogicId>,
    /// Comma-separated frame conditions, e.g. C1,CAP.
    #[arg(long, value_name = "FLAGS", value_parser = FrameClass::parse)]
    class: Option<FrameClass>,
}

fn parse_logic_id(s: &str) -> Result<LogicId, fbl_core::logics::UnknownLogic> {
    s.parse()
}

impl Scope {
    fn resolve(&self) -> (Option<LogicId>, FrameClass) {
        match (self.logic, self.class) {
            (Some(id), _) => (Some(id), logic_spec(id).frame_class),
            (None, Some(class)) => (None, class),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Parse { formula } => cmd_parse(&formula, cli.json),
        Command::Eval {
            model,
            world,
            formula,
        } => cmd_eval(&model, &world, &formula, cli.json),
        Command::CheckModel { file, class } => cmd_check_model(&file, class, cli.json),
        Command::Valid {
            formula,
            scope,
            max_worlds,
            sampled,
            workers,
        } => {
            let mut cfg = match sampled.as_deref() {
                Some([seed, count]) => SearchConfig::sampled(max_worlds, *seed, *count),
                Some(_) => unreachable!("clap enforces two values"),
                None => SearchConfig::exhaustive(max_worlds),
            };
            cfg.workers = workers;
            cmd_search(&formula, &scope, cfg, false, cli.json)
        }
        Command::Countermodel {
            formula,
            scope,
            max_worlds,
        } => cmd_search(
            &formula,
            &scope,
            SearchConfig::exhaustive(max_worlds),
            true,
            cli.json,
        ),
        Command::Prove { file } => cmd_prove(&file, cli.json),
        Command::Experiment { name, max_worlds } => cmd_experiment(&name, max_worlds, cli.json),
    }
}

fn cmd_parse(text: &str, json_out: bool) -> Result<ExitCode, Failure> {
    let f = parse(text)?;
    let atoms = f.atoms();
    if json_out {
        let report = json!({
            "input": text,
            "canonical": f.to_string(),
            "atoms": atoms,
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{f}");
        if !atoms.is_empty() {
            println!("atoms: {}", atoms.join(", "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn extension_table(m: &Model, table: &[Extension]) -> String {
    let mut out = String::new();
    for entry in table {
        let _ = writeln!(out, "ext({}) = {}", entry.formula, m.render_set(entry.worlds));
    }
    out
}

fn extension_json(m: &Model, table: &[Extension]) -> serde_json::Value {
    table
        .iter()
        .map(|entry| {
            json!({
                "formula": entry.formula.to_string(),
                "worlds": entry.worlds.iter().map(|w| m.world_name(w)).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn cmd_eval(
    model_path: &PathBuf,
    world: &str,
    formula: &str,
    json_out: bool,
) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(model_path)?;
    let m = Model::from_json(&text)?;
    let f = parse(formula)?;
    let table = subformula_extensions(&m, &f)?;
    let holds = forces(&m, world, &f)?;
    if json_out {
        let report = json!({
            "world": world,
            "formula": f.to_string(),
            "forces": holds,
            "extensions": extension_json(&m, &table),
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", m.describe());
        print!("{}", extension_table(&m, &table));
        let verb = if holds { "forces" } else { "does not force" };
        println!("world {world} {verb} '{f}'");
    }
    Ok(if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check_model(
    path: &PathBuf,
    class: Option<FrameClass>,
    json_out: bool,
) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(path)?;
    let m = Model::from_json(&text)?;
    let violations = m.validate();
    if !violations.is_empty() {
        if json_out {
            let report = json!({
                "valid": false,
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        } else {
            println!("invalid model:");
            for v in &violations {
                println!("  {v}");
            }
        }
        return Ok(ExitCode::from(1));
    }

    let checked = class.unwrap_or_else(|| FrameClass::of(&CondFlag::ALL));
    let verdicts = check_conditions(&m, checked)?;
    let class_ok = verdicts.values().all(|v| v.holds());
    if json_out {
        let conditions: serde_json::Value = verdicts
            .iter()
            .map(|(flag, verdict)| {
                let detail = match verdict {
                    fbl_core::CondVerdict::Holds => json!({"holds": true}),
                    fbl_core::CondVerdict::Fails(w) => {
                        json!({"holds": false, "witness": w.render(&m)})
                    }
                };
                (flag.to_string(), detail)
            })
            .collect::<serde_json::Map<_, _>>()
            .into();
        let report = json!({
            "valid": true,
            "conditions": conditions,
            "class": class.map(|c| c.to_string()),
            "class_holds": class.map(|_| class_ok),
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", m.describe());
        for (flag, verdict) in &verdicts {
            match verdict {
                fbl_core::CondVerdict::Holds => println!("{flag}: holds"),
                fbl_core::CondVerdict::Fails(w) => println!("{flag}: fails at {}", w.render(&m)),
            }
        }
        if let Some(c) = class {
            let verb = if class_ok { "holds" } else { "fails" };
            println!("class {c} {verb}");
        }
    }
    Ok(if class.is_some() && !class_ok {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_search(
    formula: &str,
    scope: &Scope,
    base: SearchConfig,
    countermodel_wanted: bool,
    json_out: bool,
) -> Result<ExitCode, Failure> {
    let f = parse(formula)?;
    let (logic, class) = scope.resolve();
    let cfg = base.with_class(class);
    let outcome = find_countermodel(&f, &cfg)?;
    if json_out {
        println!("{}", search_report(formula, logic, &cfg, &outcome).to_json());
    } else {
        match &outcome {
            SearchOutcome::ValidAtBound { models_checked } => {
                if countermodel_wanted {
                    println!(
                        "no countermodel with up to {} worlds ({models_checked} models checked)",
                        cfg.max_worlds
                    );
                } else {
                    println!(
                        "valid at bound {} ({models_checked} models checked)",
                        cfg.max_worlds
                    );
                }
            }
            SearchOutcome::Countermodel {
                model,
                witness,
                extensions,
                models_checked,
            } => {
                println!("countermodel found after {models_checked} models");
                print!("{}", model.describe());
                print!("{}", extension_table(model, extensions));
                println!("witness: {} does not force '{f}'", model.world_name(*witness));
            }
        }
    }
    Ok(match outcome {
        SearchOutcome::ValidAtBound { .. } => ExitCode::SUCCESS,
        SearchOutcome::Countermodel { .. } => ExitCode::from(1),
    })
}

fn cmd_prove(path: &PathBuf, json_out: bool) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(path)?;
    let derivation = derivation_from_json(&text)?;
    let lines = derivation.lines.len();
    match check_derivation(&derivation) {
        Ok(()) => {
            if json_out {
                let report = json!({
                    "ok": true,
                    "logic": derivation.logic.to_string(),
                    "lines": lines,
                });
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                let noun = if lines == 1 { "line" } else { "lines" };
                println!("derivation ok ({lines} {noun})");
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => {
            if json_out {
                let report = json!({
                    "ok": false,
                    "logic": derivation.logic.to_string(),
                    "line": err.line,
                    "error": err.kind.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("derivation rejected: {err}");
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_experiment(name: &str, max_worlds: usize, json_out: bool) -> Result<ExitCode, Failure> {
    let cfg = SearchConfig::exhaustive(max_worlds);
    let report = run_experiment(name, &cfg)?;
    if json_out {
        println!("{}", experiment_json(&report).to_json());
    } else {
        let class = if report.class.is_empty() {
            "none".to_string()
        } else {
            report.class.to_string()
        };
        println!(
            "experiment {} (class {class}, bound {})",
            report.name, report.bound
        );
        println!("verdict: {}", report.verdict);
        for line in &report.lines {
            println!("{line}");
        }
    }
    Ok(if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
