//! `qhamming` command-line tool.
//!
//! Exit codes: 0 success, 1 validation or property failure (and size
//! mismatch), 2 unreadable or malformed input, 3 dimension cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qhamming::distances::{distances, DistanceConfig, Metric};
use qhamming::exec::Execution;
use qhamming::io::{parse_document, parse_mixture, reports_to_csv, reports_to_json, validate_document, FileValidation};
use qhamming::linalg::DEFAULT_DIM_CAP;
use qhamming::states::WordCorpusConfig;
use qhamming::suite::{run_properties, run_suite, Status, SuiteConfig};
use qhamming::{Error, StateMixture};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qhamming", version, about = "Quantum Hamming distances on tracial states of S_n^+")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a magic unitary or state mixture file.
    Validate {
        path: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Estimate distances between two state mixture files.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = MetricArg::All)]
        metric: MetricArg,
        /// JSON report (the default).
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the seeded property suite.
    Suite {
        /// Tolerance override `name=value`; `eigen=value` covers every
        /// eigen-based check. Repeatable.
        #[arg(long = "tolerance", value_name = "NAME=VALUE", value_parser = parse_override)]
        tolerances: Vec<(String, f64)>,
        /// Run only these properties. Repeatable.
        #[arg(long = "only", value_name = "PROPERTY")]
        only: Vec<String>,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, env = "QHAMMING_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_DIM_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    dim_cap: u64,
    /// Random words added to the exhaustive short words of the lower bound.
    #[arg(long, default_value_t = WordCorpusConfig::default().sample_count)]
    corpus_len: usize,
    /// Every word up to this length enters the lower bound.
    #[arg(long, default_value_t = WordCorpusConfig::default().exhaustive_len)]
    word_len: usize,
    /// Random restarts of the unitary search.
    #[arg(long, default_value_t = DistanceConfig::default().restarts)]
    restarts: usize,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = DistanceConfig::default().steps)]
    steps: usize,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Auto
        }
    }

    fn words(&self) -> WordCorpusConfig {
        WordCorpusConfig { exhaustive_len: self.word_len, sample_count: self.corpus_len, seed: self.seed }
    }

    fn distance_config(&self) -> DistanceConfig {
        DistanceConfig {
            dim_cap: self.dim_cap as usize,
            restarts: self.restarts,
            steps: self.steps,
            seed: self.seed,
            words: self.words(),
            exec: self.exec(),
        }
    }

    fn suite_config(&self, tolerances: BTreeMap<String, f64>) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            dim_cap: self.dim_cap as usize,
            tolerances,
            words: WordCorpusConfig { seed: 0, ..self.words() },
            restarts: self.restarts,
            steps: self.steps,
            exec: self.exec(),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Tensor,
    Free,
    L1,
    All,
}

impl MetricArg {
    fn metrics(self) -> Vec<Metric> {
        match self {
            MetricArg::Tensor => vec![Metric::Tensor],
            MetricArg::Free => vec![Metric::Free],
            MetricArg::L1 => vec![Metric::L1],
            MetricArg::All => Metric::ALL.to_vec(),
        }
    }
}

fn parse_override(raw: &str) -> Result<(String, f64), String> {
    let (name, value) = raw.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{raw}`"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad tolerance `{value}`: {e}"))?;
    if value.is_nan() || value < 0.0 {
        return Err(format!("tolerance must be non-negative, got {value}"));
    }
    Ok((name.trim().to_string(), value))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::DimensionOverflow { .. } => EXIT_OVERFLOW,
        Error::Parse(_) => EXIT_INPUT,
        _ => EXIT_FAILURE,
    }
}

fn fail(context: &str, err: &Error) -> ExitCode {
    eprintln!("error: {context}: {err}");
    ExitCode::from(exit_code(err))
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT)
    })
}

/// Loads a mixture; any problem with the file itself is an input error.
fn load_mixture(path: &Path) -> Result<StateMixture, ExitCode> {
    let text = read(path)?;
    parse_mixture(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT)
    })
}

fn print_validation(path: &Path, v: &FileValidation) {
    println!("{}: {} ({})", path.display(), if v.passed { "ok" } else { "INVALID" }, v.kind);
    println!("  worst residual {:e}", v.worst);
    if let Some(r) = v.weight_sum_residual {
        println!("  weight sum residual {r:e}");
    }
    for (k, r) in v.reports.iter().enumerate() {
        if r.passed {
            continue;
        }
        let label = if v.reports.len() > 1 { format!("atom {k}") } else { "rep".to_string() };
        let worst_of = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
        println!(
            "  {label}: n {} d {} row sums {:e} column sums {:e} projection {:e} hermiticity {:e}",
            r.n,
            r.d,
            worst_of(&r.row_sums),
            worst_of(&r.column_sums),
            worst_of(&r.projection),
            worst_of(&r.hermiticity),
        );
    }
}

fn cmd_validate(path: &Path, json: bool) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let doc = match parse_document(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let v = validate_document(&doc);
    if json {
        println!("{}", serde_json::to_string_pretty(&v).expect("validation serializes"));
    } else {
        print_validation(path, &v);
    }
    if v.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn cmd_distance(a: &Path, b: &Path, metric: MetricArg, csv: bool, run: &RunArgs) -> ExitCode {
    let (phi, psi) = match (load_mixture(a), load_mixture(b)) {
        (Ok(phi), Ok(psi)) => (phi, psi),
        (Err(code), _) | (_, Err(code)) => return code,
    };
    match distances(&phi, &psi, &metric.metrics(), &run.distance_config()) {
        Ok(reports) => {
            if csv {
                print!("{}", reports_to_csv(&reports));
            } else {
                println!("{}", reports_to_json(&reports));
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail("distance", &e),
    }
}

fn cmd_suite(tolerances: &[(String, f64)], only: &[String], json: bool, run: &RunArgs) -> ExitCode {
    let config = run.suite_config(tolerances.iter().cloned().collect());
    let result = if only.is_empty() {
        run_suite(&config)
    } else {
        let names: Vec<&str> = only.iter().map(String::as_str).collect();
        run_properties(&config, &names)
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return fail("suite", &e),
    };
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
        let count = |s: Status| report.properties.iter().filter(|p| p.status == s).count();
        println!("{} passed, {} failed, {} skipped", count(Status::Pass), count(Status::Fail), count(Status::Skipped));
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Validate { path, json } => cmd_validate(path, *json),
        Command::Distance { a, b, metric, csv, run, .. } => cmd_distance(a, b, *metric, *csv, run),
        Command::Suite { tolerances, only, json, run } => cmd_suite(tolerances, only, *json, run),
    }
}
