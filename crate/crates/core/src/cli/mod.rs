//! The `mmgw` command-line tool.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 numerical failure.

mod input;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use input::{load_scenario, EstimateFile};

use crate::error::Error;
use crate::fusion::{fuse, FusionInput, FusionOptions, HeuristicCriterion, Method, DEFAULT_SAMPLES};
use crate::harness::{run_experiment, serialize_report, ReportFormat, ScenarioConfig};
use crate::metrics::{gw_approx, gw_approx_frobenius, gw_exact, Aggregation};
use crate::rng::SampleSeeds;
use crate::transform::{inverse_transform, transform};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mmgw", version, about = "Wasserstein-optimal fusion of elliptic extended-target estimates")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Angles in estimate files are in degrees instead of radians.
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Print numbers with shortest round-trip precision instead of 6 significant digits.
    #[arg(long, global = true)]
    pub full_precision: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse two estimate files and print the result as JSON.
    Fuse {
        file1: PathBuf,
        file2: PathBuf,
        /// naive, shape_mean, mmgw_lin, mmgw_mc or heuristic.
        #[arg(long)]
        method: Method,
        /// Particles per estimate for mmgw_mc.
        #[arg(long = "samples", short = 'm', default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = CriterionArg::Likelihood)]
        criterion: CriterionArg,
    },
    /// Print the squared Gaussian Wasserstein distance between two ellipses.
    Distance {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Exact)]
        variant: Variant,
    },
    /// Print the square-root transform of an ellipse and its canonical inverse.
    Transform { file: PathBuf },
    /// Run the Monte-Carlo comparison and write the report.
    Eval {
        /// Scenario JSON; with --paper, keys in it override the built-in scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Start from the built-in two-sensor scenario.
        #[arg(long)]
        paper: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long = "samples", short = 'm')]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        aggregation: Option<AggregationArg>,
        #[arg(long, value_enum)]
        criterion: Option<CriterionArg>,
        /// Report path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Exact,
    Approx,
    Frobenius,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AggregationArg {
    RootMean,
    Mean,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CriterionArg {
    Likelihood,
    Printed,
}

impl From<CriterionArg> for HeuristicCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Likelihood => HeuristicCriterion::Likelihood,
            CriterionArg::Printed => HeuristicCriterion::Printed,
        }
    }
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
        Self { code, message: e.to_string() }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ =
                if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let numbers = NumberFormat { full: cli.global.full_precision };
    let degrees = cli.global.degrees;
    let text = match &cli.command {
        Command::Fuse { file1, file2, method, samples, seed, criterion } => {
            let input = FusionInput::new(
                EstimateFile::load(file1)?.estimate(degrees, true)?,
                EstimateFile::load(file2)?.estimate(degrees, true)?,
            );
            let options = FusionOptions {
                samples: *samples,
                seeds: SampleSeeds::from_seed(*seed),
                criterion: (*criterion).into(),
            };
            let result = fuse(&input, *method, &options)?;
            numbers.json(&result)
        }
        Command::Distance { file1, file2, variant } => {
            let a = EstimateFile::load(file1)?.estimate(degrees, false)?.mean;
            let b = EstimateFile::load(file2)?.estimate(degrees, false)?.mean;
            let value = match variant {
                Variant::Exact => gw_exact(&a, &b)?,
                Variant::Approx => gw_approx(&a, &b)?,
                Variant::Frobenius => gw_approx_frobenius(&a, &b)?,
            };
            format!("{}\n", numbers.number(value.value()))
        }
        Command::Transform { file } => {
            let state = EstimateFile::load(file)?.estimate(degrees, false)?.mean;
            let y = transform(&state)?;
            let canonical = inverse_transform(&y)?;
            numbers.json(&json!({ "transformed": y, "canonical": canonical }))
        }
        Command::Eval { config, paper, seed, runs, samples, aggregation, criterion, out: path, format } => {
            let mut scenario = load_scenario(config.as_deref(), paper.then(ScenarioConfig::paper))?;
            if let Some(seed) = seed {
                scenario.seed = *seed;
            }
            if let Some(runs) = runs {
                scenario.runs = *runs;
            }
            if let Some(samples) = samples {
                scenario.mc_samples = *samples;
            }
            if let Some(a) = aggregation {
                scenario.aggregation = match a {
                    AggregationArg::RootMean => Aggregation::RootMean,
                    AggregationArg::Mean => Aggregation::Mean,
                };
            }
            if let Some(c) = criterion {
                scenario.heuristic_criterion = (*c).into();
            }
            let report = run_experiment(&scenario)?;
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            write_report(path, |w| serialize_report(&report, format, w))?;
            report.summary_table(|v| numbers.number(v))
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::input(format!("writing output: {e}")))
}

fn write_report(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::input(format!("{}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(fail)?);
    body(&mut w).map_err(fail)?;
    w.flush().map_err(fail)
}

#[derive(Debug, Clone, Copy)]
struct NumberFormat {
    full: bool,
}

impl NumberFormat {
    fn round(&self, x: f64) -> f64 {
        if self.full || x == 0.0 || !x.is_finite() {
            x
        } else {
            round_significant(x, 6)
        }
    }

    fn number(&self, x: f64) -> String {
        let x = self.round(x);
        if x == 0.0 || (1e-6..1e16).contains(&x.abs()) {
            x.to_string()
        } else {
            format!("{x:e}")
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> String {
        let mut v = serde_json::to_value(value).expect("output serializes");
        self.round_all(&mut v);
        format!("{}\n", serde_json::to_string_pretty(&v).expect("output serializes"))
    }

    fn round_all(&self, v: &mut Value) {
        match v {
            Value::Number(n) if n.is_f64() => {
                if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(self.round(x))) {
                    *n = x;
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|i| self.round_all(i)),
            Value::Object(map) => map.values_mut().for_each(|i| self.round_all(i)),
            _ => {}
        }
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}
