use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tits_cr::Caps;
use tits_cr_cli::scenario::set_cap;
use tits_cr_cli::{
    exit_status, parse_scenario, run, run_batch, Analysis, Report, RunOptions, Scenario,
    ENV_CAP_ORDER, ENV_CAP_SUBSPACES,
};

#[derive(Parser)]
#[command(
    name = "tits-cr",
    version,
    about = "Complete reducibility via spherical buildings of GL_n over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for the randomized conjugation self-check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest group order to materialize.
    #[arg(long)]
    cap_order: Option<u64>,
    /// Largest number of subspaces the module oracle may scan.
    #[arg(long)]
    cap_subspaces: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more scenario files.
    Analyze {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate every subgroup of the ambient group of a scenario.
    Corpus {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

const EXIT_ERROR: u8 = 2;

fn env_caps() -> Result<Caps, String> {
    let mut caps = Caps::default();
    for (var, key) in [
        (ENV_CAP_ORDER, "cap_order"),
        (ENV_CAP_SUBSPACES, "cap_subspaces"),
    ] {
        if let Ok(raw) = std::env::var(var) {
            let v = raw
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("{var}: expected a non-negative integer, got {raw:?}"))?;
            set_cap(&mut caps, key, v);
        }
    }
    Ok(caps)
}

fn load(path: &Path, common: &Common) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut s = parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    // command-line caps take precedence over the scenario's own
    if let Some(v) = common.cap_order {
        s.params.caps.insert("cap_order".into(), v);
    }
    if let Some(v) = common.cap_subspaces {
        s.params.caps.insert("cap_subspaces".into(), v);
    }
    Ok(s)
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summarize(r: &Report) {
    match (&r.error, r.violations.is_empty()) {
        (Some(e), _) => eprintln!("{}: error: {e}", r.id),
        (None, true) => eprintln!("{}: ok", r.id),
        (None, false) => eprintln!(
            "{}: invariant violations: {}",
            r.id,
            r.violations.join(", ")
        ),
    }
}

fn exit_code(reports: &[Report]) -> ExitCode {
    ExitCode::from(exit_status(reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match env_caps() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match cli.command {
        Command::Analyze {
            scenarios,
            out,
            common,
        } => {
            let loaded: Result<Vec<Scenario>, String> =
                scenarios.iter().map(|p| load(p, &common)).collect();
            let loaded = match loaded {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ERROR);
                }
            };
            let opts = RunOptions {
                caps,
                seed: common.seed,
            };
            let reports = run_batch(&loaded, &opts);
            reports.iter().for_each(summarize);
            let value = if reports.len() == 1 {
                reports[0].value.clone()
            } else {
                serde_json::Value::Array(reports.iter().map(|r| r.value.clone()).collect())
            };
            if let Err(e) = emit(&value, out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ERROR);
            }
            exit_code(&reports)
        }
        Command::Corpus {
            scenario,
            out,
            common,
        } => {
            let mut s = match load(&scenario, &common) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ERROR);
                }
            };
            s.analysis = Analysis::Corpus;
            let report = run(
                &s,
                &RunOptions {
                    caps,
                    seed: common.seed,
                },
            );
            summarize(&report);
            if let Err(e) = emit(&report.value, out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ERROR);
            }
            exit_code(std::slice::from_ref(&report))
        }
    }
}
