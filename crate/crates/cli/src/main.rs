use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use plausikit::bisim::{check, distinguishing_formula, greatest, DEFAULT_CAP};
use plausikit::dynamics::{announce, upgrade};
use plausikit::semantics::{falsifying_state, holds};
use plausikit::translate::{reduce_dynamic, translate_gt, translate_safe};
use plausikit::{model, parse, Formula, Fragment, ModelDoc};
use plausikit_cli::corpus::{self, counterexamples};
use plausikit_cli::generate::{generate, GenSpec};
use plausikit_cli::io::{read_model, read_relation, write_model};
use plausikit_cli::suites::{self, SUITES};

/// Epistemic plausibility models: evaluation, updates, reduction and
/// bisimulation.
#[derive(Parser)]
#[command(name = "plausikit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state.
    Check { model: PathBuf, state: String, formula: String },
    /// Check whether a formula holds at every state.
    Validity { model: PathBuf, formula: String },
    /// Apply an announcement or upgrade and print the resulting model.
    Transform {
        model: PathBuf,
        operation: Update,
        formula: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eliminate announcement and upgrade operators.
    Rewrite {
        formula: String,
        #[arg(long)]
        trace: bool,
    },
    /// Rewrite conditional (and safe) belief into the chosen primitive.
    Translate { target: Target, formula: String },
    /// Check a relation, or compute the largest bisimulation.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "K")]
        fragment: String,
        #[arg(long, conflicts_with = "greatest")]
        relation: Option<PathBuf>,
        #[arg(long)]
        greatest: bool,
        /// Largest definable-pair family to build.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Decide modal equivalence of two states.
    Equiv {
        left: PathBuf,
        left_state: String,
        right: PathBuf,
        right_state: String,
        #[arg(long)]
        fragment: String,
        /// Largest definable-pair family to build.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Report validity, uniformity and local connectedness of a model.
    Props { model: PathBuf },
    /// Generate a random model from a JSON generator spec.
    Gen {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a property suite (`--list` shows them).
    Suite {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        trials: Option<usize>,
        /// Defaults to PLAUSIKIT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Run a single trial, to reproduce a reported failure.
        #[arg(long)]
        trial: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// List or verify the stored witness models.
    Corpus {
        #[arg(long, conflicts_with = "verify")]
        list: bool,
        #[arg(long)]
        verify: bool,
        /// Write each entry's models and relation into this directory.
        #[arg(long, conflicts_with_all = ["list", "verify"])]
        export: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Update {
    Announce,
    Upgrade,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Gt,
    Safe,
}

/// A verdict: success maps to exit 0, a negative answer to exit 1.
type Verdict = bool;

fn formula(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse `{text}`"))
}

/// Parses a fragment, reducing dynamic operators away.
fn static_fragment(text: &str) -> Result<Fragment> {
    let fragment: Fragment = text.parse().map_err(anyhow::Error::msg)?;
    if fragment.is_static() {
        return Ok(fragment);
    }
    let reduced = fragment.reduced();
    eprintln!("note: fragment {fragment} contains dynamic operators; using its reduction {reduced}");
    Ok(reduced)
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Check { model, state, formula: text } => {
            let m = read_model(&model)?;
            let verdict = holds(&m, &state, &formula(&text)?)?;
            println!("{verdict}");
            Ok(verdict)
        }
        Command::Validity { model, formula: text } => {
            let m = read_model(&model)?;
            match falsifying_state(&m, &formula(&text)?)? {
                None => {
                    println!("valid");
                    Ok(true)
                }
                Some(w) => {
                    println!("not valid: fails at {}", m.state_name(w));
                    Ok(false)
                }
            }
        }
        Command::Transform { model, operation, formula: text, output } => {
            let m = read_model(&model)?;
            let f = formula(&text)?;
            let out = match operation {
                Update::Announce => announce(&m, &f)?,
                Update::Upgrade => upgrade(&m, &f)?,
            };
            match output {
                Some(path) => write_model(&path, &out)?,
                None => println!("{}", out.to_json()),
            }
            Ok(true)
        }
        Command::Rewrite { formula: text, trace } => {
            let (g, steps) = reduce_dynamic(&formula(&text)?);
            println!("{g}");
            if trace {
                print!("{steps}");
            }
            Ok(true)
        }
        Command::Translate { target, formula: text } => {
            let f = formula(&text)?;
            let g = match target {
                Target::Gt => translate_gt(&f)?,
                Target::Safe => translate_safe(&f)?,
            };
            println!("{g}");
            Ok(true)
        }
        Command::Bisim { left, right, fragment, relation, greatest: _, cap } => {
            let (l, r) = (read_model(&left)?, read_model(&right)?);
            let fragment = static_fragment(&fragment)?;
            match relation {
                Some(path) => {
                    let z = read_relation(&path, &l, &r)?;
                    match check(&l, &r, &z, fragment, cap)?.witness() {
                        None => {
                            println!("bisimulation");
                            Ok(true)
                        }
                        Some(w) => {
                            println!("not a bisimulation: {w}");
                            Ok(false)
                        }
                    }
                }
                None => {
                    let z = greatest(&l, &r, fragment, cap)?;
                    for (w, v) in z.to_names(&l, &r) {
                        println!("{w} {v}");
                    }
                    Ok(true)
                }
            }
        }
        Command::Equiv { left, left_state, right, right_state, fragment, cap } => {
            let (l, r) = (read_model(&left)?, read_model(&right)?);
            let fragment = static_fragment(&fragment)?;
            let (w, v) = (l.state_id(&left_state)?, r.state_id(&right_state)?);
            match distinguishing_formula(&l, w, &r, v, fragment, cap)? {
                None => {
                    println!("equivalent");
                    Ok(true)
                }
                Some(f) => {
                    println!("distinguished by {f}");
                    Ok(false)
                }
            }
        }
        Command::Props { model } => props(&model),
        Command::Gen { spec, output } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("cannot read {}", spec.display()))?;
            let spec: GenSpec =
                serde_json::from_str(&text).with_context(|| format!("malformed generator spec {}", spec.display()))?;
            write_model(&output, &generate(&spec)?)?;
            Ok(true)
        }
        Command::Suite { name, list, trials, seed, trial, json } => {
            if list {
                for s in SUITES {
                    println!("{:<13} {}", s.name, s.summary);
                }
                return Ok(true);
            }
            let name = name.expect("clap requires a name without --list");
            let Some(suite) = suites::find(&name) else {
                bail!("unknown suite `{name}`; try `suite --list`");
            };
            let mut budget = suite.budget;
            if let Some(t) = trials {
                budget.trials = t;
            }
            let seed = seed.unwrap_or_else(|| suites::seed_from_env(0));
            let report = match trial {
                Some(t) => suites::run_one(&name, budget, seed, t)?,
                None => suites::run(&name, budget, seed)?,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            Ok(report.passed())
        }
        Command::Corpus { list, verify: _, export } => {
            let entries = corpus::entries()?;
            if list {
                for e in &entries {
                    println!("{:<6} {}", e.name, e.description);
                }
                for c in counterexamples() {
                    println!("{:<6} {}", c.name, c.description);
                }
                return Ok(true);
            }
            if let Some(dir) = export {
                return export_corpus(&dir, &entries);
            }
            let mut ok = true;
            for e in &entries {
                for outcome in corpus::verify(e) {
                    ok &= outcome.ok();
                    println!("{outcome}");
                }
            }
            for c in counterexamples() {
                match c.verify() {
                    Ok(()) => println!("ok   {}: {} fails at {}", c.name, c.biconditional(), c.fails_at),
                    Err(e) => {
                        ok = false;
                        println!("FAIL {}: {e}", c.name);
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn props(path: &Path) -> Result<Verdict> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc = ModelDoc::from_json(&text).with_context(|| format!("in {}", path.display()))?;
    let violations = model::validate(&doc);
    if !violations.is_empty() {
        println!("valid: no");
        for v in violations {
            println!("  {v}");
        }
        return Ok(false);
    }
    let m = read_model(path)?;
    println!("valid: yes");
    match m.uniformity() {
        Ok(()) => println!("uniform: yes"),
        Err(w) => println!("uniform: no ({w})"),
    }
    match m.local_connectedness() {
        Ok(()) => println!("locally-connected: yes"),
        Err(w) => println!("locally-connected: no ({w})"),
    }
    println!("image-finite: {}", yes(m.is_image_finite()));
    Ok(true)
}

fn export_corpus(dir: &Path, entries: &[corpus::CorpusEntry]) -> Result<Verdict> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for e in entries {
        let (l, r) = (format!("{}L.json", e.name), format!("{}R.json", e.name));
        write_model(&dir.join(&l), &e.left)?;
        write_model(&dir.join(&r), &e.right)?;
        let doc = e.relation.to_doc(&e.left, &e.right, &l, &r);
        let z = dir.join(format!("{}Z.json", e.name));
        std::fs::write(&z, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("cannot write {}", z.display()))?;
    }
    Ok(true)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let resource = err
        .chain()
        .any(|e| e.downcast_ref::<plausikit::Error>().is_some_and(plausikit::Error::is_resource));
    if resource {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
