//! Scenario-driven command line for coherent-system reliability comparison:
//! evaluate mixture curves, verify comparison rules, run the Monte Carlo
//! oracle, and certify k-out-of-n distortion properties.
//!
//! Exit codes: 0 success (all checked rules consistent and satisfied),
//! 2 a premise was violated (the expected outcome for negative controls),
//! 3 soundness alarm (premises certified but conclusion refuted),
//! 64 usage error, 65 scenario parse/schema error, 70 internal error.

mod output;
mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use sysrel_core::orders::Certification;
use sysrel_core::simkit::{estimate_survival, SimulationPlan};
use sysrel_core::theorems::{certify_kofn_properties, verify, RuleId, TheoremReport};

use scenario::ScenarioFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parse(_) | CliError::Schema(_) => 65,
            CliError::Internal(_) => 70,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "sysrel",
    version,
    about = "Survival curves and stochastic-order certification for coherent systems in random environments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mixture curve of system 1 under its environment.
    Eval {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Which curve to tabulate.
        #[arg(long, value_enum)]
        curve: Curve,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify comparison rules declared in the scenario (or one given rule).
    Verify {
        scenario: PathBuf,
        /// Rule id (e.g. 3.5); defaults to the scenario's `verify.theorems`.
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the survival curve of system 1 by Monte Carlo.
    Simulate {
        scenario: PathBuf,
        /// Sample count override (scenario `simulate.n` otherwise).
        #[arg(long)]
        n: Option<usize>,
        /// Seed override (scenario `simulate.seed` otherwise).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the k-out-of-n distortion property family for (k:n, l:m).
    Lemmas {
        /// The four indices: k n l m.
        #[arg(long, num_args = 4, value_names = ["K", "N", "L", "M"])]
        kofn: Vec<usize>,
        /// Scalar grid resolution.
        #[arg(long, default_value_t = 1000)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Curve {
    Survival,
    Cdf,
    Density,
    Hazard,
    Rhr,
}

impl Curve {
    fn name(self) -> &'static str {
        match self {
            Curve::Survival => "survival",
            Curve::Cdf => "cdf",
            Curve::Density => "density",
            Curve::Hazard => "hazard",
            Curve::Rhr => "rhr",
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(64);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("sysrel: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval { scenario, curve, out } => cmd_eval(&scenario, curve, out.as_deref()),
        Command::Verify { scenario, theorem, out } => {
            cmd_verify(&scenario, theorem.as_deref(), out.as_deref())
        }
        Command::Simulate { scenario, n, seed, out } => {
            cmd_simulate(&scenario, n, seed, out.as_deref())
        }
        Command::Lemmas { kofn, grid, out } => cmd_lemmas(&kofn, grid, out.as_deref()),
    }
}

fn cmd_eval(
    path: &std::path::Path,
    curve: Curve,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let file = ScenarioFile::load(path)?;
    let mix = file.mixture1()?;
    let grid = file.grid()?;
    let nodes = match curve {
        // the reversed hazard is undefined at x = 0
        Curve::Rhr => grid.ratio_nodes(),
        _ => grid.nodes(),
    };
    let mut rows = Vec::with_capacity(nodes.len());
    for x in nodes {
        let value = match curve {
            Curve::Survival => mix.survival(x),
            Curve::Cdf => mix.cdf(x),
            Curve::Density => mix.density(x),
            Curve::Hazard => mix.hazard(x),
            Curve::Rhr => mix.reversed_hazard(x),
        }
        .map_err(|e| CliError::Internal(format!("x = {x}: {e}")))?;
        rows.push((x, value));
    }
    output::emit(out, &output::curve_csv(curve.name(), &rows))?;
    Ok(0)
}

fn cmd_verify(
    path: &std::path::Path,
    theorem: Option<&str>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let file = ScenarioFile::load(path)?;
    let rule_codes: Vec<String> = match theorem {
        Some(code) => vec![code.to_string()],
        None => file
            .verify
            .as_ref()
            .map(|v| v.theorems.clone())
            .filter(|list| !list.is_empty())
            .ok_or_else(|| {
                CliError::Usage("no --theorem given and the scenario lists none".into())
            })?,
    };
    let rules: Vec<RuleId> = rule_codes
        .iter()
        .map(|code| RuleId::parse(code).map_err(|e| CliError::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let comparison = file.comparison()?;
    let mut reports: Vec<TheoremReport> = Vec::with_capacity(rules.len());
    for rule in rules {
        let report = verify(&comparison, rule).map_err(|e| CliError::Schema(e.to_string()))?;
        print_report_summary(&report);
        reports.push(report);
    }
    output::emit(out, &output::report_csv(&reports))?;
    let alarm = reports.iter().any(|r| !r.consistent);
    let violated = reports.iter().any(|r| !r.conditions_satisfied);
    Ok(if alarm {
        3
    } else if violated {
        2
    } else {
        0
    })
}

fn print_report_summary(report: &TheoremReport) {
    eprintln!(
        "rule {}: premises {}, conclusion {}{}",
        report.rule,
        if report.conditions_satisfied { "satisfied" } else { "not satisfied" },
        report.conclusion.verdict,
        if report.consistent { "" } else { "  ** SOUNDNESS ALARM **" },
    );
    for c in report.effective_violations() {
        eprintln!("  violated {}: {} [{}]", c.id, c.description, c.witness);
    }
}

fn cmd_simulate(
    path: &std::path::Path,
    n: Option<usize>,
    seed: Option<u64>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let file = ScenarioFile::load(path)?;
    let section = file
        .simulate
        .clone()
        .ok_or_else(|| CliError::Schema("missing [simulate] section".into()))?;
    let plan = SimulationPlan::new(
        n.unwrap_or(section.n),
        seed.unwrap_or(section.seed),
        section.x_grid,
    )
    .map_err(|e| CliError::Schema(e.to_string()))?;
    let mix = file.mixture1()?;
    let curve = estimate_survival(&plan, &mix).map_err(|e| CliError::Internal(e.to_string()))?;
    output::emit(out, &output::simulation_csv(&curve))?;
    Ok(0)
}

fn cmd_lemmas(kofn: &[usize], grid: usize, out: Option<&std::path::Path>) -> Result<i32, CliError> {
    let [k, n, l, m] = match kofn {
        &[k, n, l, m] => [k, n, l, m],
        _ => return Err(CliError::Usage("expected --kofn K N L M".into())),
    };
    let reports =
        certify_kofn_properties(k, n, l, m, grid).map_err(|e| CliError::Usage(e.to_string()))?;
    output::emit(out, &output::lemmas_csv(&reports))?;
    let all_ok = reports.iter().all(|r| r.verdict == Certification::CertifiedOnGrid);
    Ok(if all_ok { 0 } else { 2 })
}
