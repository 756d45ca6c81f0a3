//! `chebconv` command-line front end. Every run prints one JSON document.
//! Exit status: 0 pass or inconclusive, 1 violation, 2 input error.

mod commands;
mod identities;
mod input;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use chebconv::error::Error;
use chebconv::sampling::{CheckConfig, DEFAULT_BASE_BUDGET, DEFAULT_REL_TOL, DEFAULT_TUPLE_BUDGET};
use chebconv::tuple::DEFAULT_MIN_GAP;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "chebconv", version, about = "Divided differences, convexity and variation with respect to Chebyshev systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
enum Command {
    /// Check positivity of collocation determinants of system prefixes on a grid.
    Chebcheck {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Prefix size; every prefix when omitted.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Divided difference of a function at given points.
    Divdiff {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        /// Comma-separated points.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Prefix size; defaults to the number of points.
        #[arg(long)]
        k: Option<usize>,
        /// Also compute the classical divided difference.
        #[arg(long)]
        classical: bool,
    },
    /// Decide convexity of a function with respect to the system on a grid.
    Convexity {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
        mode: ModeArg,
        /// Base size for the induced and interval modes; all sizes when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Sub-interval index for the interval mode; all when omitted.
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Seeded fuzzing of the determinant and divided-difference identities.
    Identities {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
    },
    /// Estimate the variation of a function, or check the bound for g - h.
    Variation {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Function whose variation is estimated (alternative to --g/--h).
        #[arg(long, conflicts_with = "g", allow_hyphen_values = true)]
        function: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, requires = "g", allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Anchor tuples: a path or inline JSON {"a": [..], "b": [..]}.
        #[arg(long)]
        anchors: Option<String>,
        #[arg(long, default_value_t = 10)]
        m0: usize,
        #[arg(long, default_value_t = 640)]
        max_m: usize,
        #[arg(long, default_value_t = 0)]
        perturb_rounds: usize,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Catalog id (optionally `id:n`), a JSON file, or inline JSON.
    #[arg(long, default_value = "poly")]
    system: String,
    /// Domain override: `lo,hi`, `[lo,hi]`, or JSON.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    /// Accept a domain override outside the valid domain of a catalog system.
    #[arg(long)]
    unsafe_domain_override: bool,
    /// `uniform:a,b,m`, `interior:a,b,m`, a comma list, or a file.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tuples enumerated exhaustively before switching to sampling.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_BASE_BUDGET)]
    base_budget: usize,
    /// Relative tolerance of the float sign band.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_GAP)]
    min_gap: f64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

impl Common {
    fn check_config(&self) -> Result<CheckConfig, Error> {
        if !(self.tol.is_finite() && self.tol >= 0.0) || !(self.min_gap.is_finite() && self.min_gap >= 0.0) {
            return Err(Error::InvalidInput("--tol and --min-gap must be finite and nonnegative".into()));
        }
        if self.budget == 0 || self.base_budget == 0 {
            return Err(Error::InvalidInput("budgets must be positive".into()));
        }
        Ok(CheckConfig {
            seed: self.seed,
            budget: self.budget,
            base_budget: self.base_budget,
            rel_tol: self.tol,
            min_gap: self.min_gap,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum BackendArg {
    Exact,
    Float,
    /// Exact when every input evaluates exactly on rationals.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Direct,
    Induced,
    Interval,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
enum Suite {
    Sylvester,
    Id,
    Fid,
    Fid1,
    Lemma3,
    TrigCtg,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    Inconclusive,
}

impl Status {
    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violation, _) | (_, Status::Violation) => Status::Violation,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Status::Violation => 1,
            _ => 0,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub backend: chebconv::scalar::Backend,
    pub results: Value,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'static str,
    version: &'static str,
    status: Status,
    backend: chebconv::scalar::Backend,
    config: &'a Command,
    results: Value,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Chebcheck { .. } => "chebcheck",
            Command::Divdiff { .. } => "divdiff",
            Command::Convexity { .. } => "convexity",
            Command::Identities { .. } => "identities",
            Command::Variation { .. } => "variation",
        }
    }

    fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Identities { out, .. } => out.as_ref(),
            Command::Chebcheck { common, .. }
            | Command::Divdiff { common, .. }
            | Command::Convexity { common, .. }
            | Command::Variation { common, .. } => common.out.as_ref(),
        }
    }

    fn run(&self) -> Result<Outcome, Error> {
        match self {
            Command::Chebcheck { common, k } => commands::chebcheck(&commands::Setup::new(common)?, *k),
            Command::Divdiff { common, function, points, k, classical } => {
                commands::divdiff(&commands::Setup::new(common)?, function, points, *k, *classical)
            }
            Command::Convexity { common, function, mode, k, ell } => {
                commands::convexity(&commands::Setup::new(common)?, function, *mode, *k, *ell)
            }
            Command::Identities { suite, trials, seed, backend, .. } => identities::run(*suite, *trials, *seed, *backend),
            Command::Variation { common, function, g, h, a, b, anchors, m0, max_m, perturb_rounds } => {
                let refinement =
                    chebconv::variation::Refinement { m0: *m0, max_m: *max_m, perturb_rounds: *perturb_rounds, seed: common.seed };
                let target = match (function, g) {
                    (Some(f), None) => commands::VariationTarget::Function(f),
                    (None, Some(g)) => commands::VariationTarget::Difference { g, h: h.as_deref() },
                    _ => return Err(Error::InvalidInput("variation needs --function or --g".into())),
                };
                commands::variation(&commands::Setup::new(common)?, target, a, b, anchors.as_deref(), &refinement)
            }
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut body = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::BoundViolated { estimate, bound, partition, a_anchor, b_anchor } = e {
        body["certificate"] = json!({
            "estimate": estimate,
            "bound": bound,
            "partition": partition,
            "a_anchor": a_anchor,
            "b_anchor": b_anchor,
        });
    }
    json!({ "error": body })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::InvalidInput(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = json!({ "error": { "kind": "UsageError", "message": e.kind().to_string(), "detail": e.render().to_string() } });
            println!("{}", serde_json::to_string_pretty(&err).expect("json"));
            return ExitCode::from(2);
        }
    };
    let started = Instant::now();
    let outcome = cli.command.run();
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    let (text, code) = match outcome {
        Ok(o) => {
            let report = Report {
                command: cli.command.name(),
                version: env!("CARGO_PKG_VERSION"),
                status: o.status,
                backend: o.backend,
                config: &cli.command,
                results: o.results,
                timing: Timing { elapsed_ms },
            };
            (serde_json::to_string_pretty(&report).expect("report serializes"), o.status.exit_code())
        }
        Err(e) => {
            let code = if matches!(e, Error::BoundViolated { .. }) { 1 } else { 2 };
            (serde_json::to_string_pretty(&error_json(&e)).expect("json"), code)
        }
    };
    if let Err(e) = emit(&text, cli.command.out()) {
        println!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("json"));
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
