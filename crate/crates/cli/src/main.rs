//! `fmbound`: singular numbers, multiplier bounds and verification campaigns
//! driven by a JSON config.
//!
//! Exit codes: 0 success, 1 failed assertion (the report is still written),
//! 2 configuration error.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fmbound::bound_functionals::{
    compact_symbol_functional, level_set_functional, PhiFunction, ScalarSymbolData,
};
use fmbound::experiments::{
    run_comparison, run_hausdorff_young, run_hyp, run_multiplier_verification, run_sharpness_l2,
    run_sobolev_trend, write_atomic, BoundReport, ReportFormat, SCHEMA,
};
use fmbound::group_models::ModelKind;
use fmbound::singular_values::{mu_from_spectrum, spectrum_of_symbol};
use fmbound::{Error, Result};
use serde::Serialize;

use config::{Config, Experiment};

#[derive(Debug, Parser)]
#[command(
    name = "fmbound",
    version,
    about = "Fourier multiplier bounds on group models"
)]
struct Cli {
    /// JSON config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `options.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Step function `t ↦ μ_t` of the configured symbol.
    Mu,
    /// Level-set (abelian) or compact-dual functional of the configured symbol.
    Bound,
    /// Run a verification experiment and write its report.
    Verify {
        /// Overrides `experiment` from the config.
        #[arg(long, value_enum)]
        experiment: Option<Experiment>,
    },
}

enum Failure {
    Assertion,
    Config(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

struct Output {
    path: Option<PathBuf>,
    format: ReportFormat,
}

impl Output {
    fn emit(&self, bytes: &[u8]) -> Result<()> {
        match &self.path {
            Some(path) => write_atomic(path, bytes),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct MuOutput<'a> {
    schema: &'static str,
    model: String,
    steps: &'a [fmbound::singular_values::Step],
}

#[derive(Serialize)]
struct BoundOutput {
    schema: &'static str,
    model: String,
    functional: &'static str,
    p: f64,
    q: f64,
    value: f64,
}

fn cmd_mu(config: &Config, out: &Output) -> Result<()> {
    let model = config.model()?;
    let mu = mu_from_spectrum(&spectrum_of_symbol(&config.symbol(&model)?)?);
    match out.format {
        ReportFormat::Csv => {
            let mut buf = Vec::new();
            mu.write_csv(&mut buf)?;
            out.emit(&buf)
        }
        ReportFormat::Json => {
            let body = MuOutput {
                schema: SCHEMA,
                model: model.descriptor(),
                steps: mu.steps(),
            };
            out.emit(format!("{}\n", serde_json::to_string_pretty(&body)?).as_bytes())
        }
    }
}

fn cmd_bound(config: &Config, out: &Output) -> Result<()> {
    let model = config.model()?;
    let sigma = config.symbol(&model)?;
    let p = config.exponent(config.p, "p")?;
    let q = config.exponent(config.q, "q")?;
    let (functional, value) = if model.is_abelian() {
        let data = ScalarSymbolData::from_symbol(&sigma)?;
        ("level-set", level_set_functional(&data, p, q)?)
    } else {
        ("compact-dual", compact_symbol_functional(&sigma, p, q)?)
    };
    let body = BoundOutput {
        schema: SCHEMA,
        model: model.descriptor(),
        functional,
        p,
        q,
        value,
    };
    match out.format {
        ReportFormat::Json => {
            out.emit(format!("{}\n", serde_json::to_string_pretty(&body)?).as_bytes())
        }
        ReportFormat::Csv => {
            out.emit(format!("functional,p,q,value\n{functional},{p},{q},{value}\n").as_bytes())
        }
    }
}

fn run_experiment(config: &Config, experiment: Experiment) -> Result<BoundReport> {
    let opts = &config.options;
    match experiment {
        Experiment::SharpnessL2 => run_sharpness_l2(&config.model()?, opts),
        Experiment::HausdorffYoung => {
            run_hausdorff_young(&config.model()?, config.exponent(config.p, "p")?, opts)
        }
        Experiment::Hyp => {
            let spec = config
                .phi
                .as_ref()
                .ok_or_else(|| Error::InvalidConfiguration("config is missing `phi`".into()))?;
            let phi = PhiFunction::from_spec(spec)?;
            run_hyp(
                &config.model()?,
                &phi,
                config.exponent(config.p, "p")?,
                config.exponent(config.b, "b")?,
                opts,
            )
        }
        Experiment::Multiplier => {
            let ensemble = config.ensemble.as_ref().ok_or_else(|| {
                Error::InvalidConfiguration("config is missing `ensemble`".into())
            })?;
            run_multiplier_verification(
                &config.model()?,
                ensemble,
                config.exponent(config.p, "p")?,
                config.exponent(config.q, "q")?,
                opts,
            )
        }
        Experiment::Comparison => {
            let model = config.model()?;
            let ModelKind::Su2(dual) = model.kind() else {
                return Err(Error::InvalidConfiguration(
                    "the comparison runs on an su2 model".into(),
                ));
            };
            run_comparison(
                dual.max_two_l(),
                config.exponent(config.p, "p")?,
                config.exponent(config.q, "q")?,
                opts,
            )
        }
        Experiment::Sobolev => {
            let lambda = config.eigenvalues()?;
            run_sobolev_trend(
                &lambda,
                config.exponent(config.s, "s")?,
                config.exponent(config.p, "p")?,
                config.exponent(config.q, "q")?,
                &config.schedule(lambda.len()),
            )
        }
    }
}

fn cmd_verify(
    config: &Config,
    experiment: Option<Experiment>,
    out: &Output,
) -> std::result::Result<(), Failure> {
    let experiment = experiment
        .or(config.experiment)
        .ok_or_else(|| Error::InvalidConfiguration("config is missing `experiment`".into()))?;
    let report = run_experiment(config, experiment)?;
    out.emit(&report.render(out.format)?)?;
    for a in report.assertions.iter().filter(|a| !a.passed) {
        eprintln!(
            "assertion {} failed: {} of {} checks (tolerance {}), first at trial {:?}",
            a.name, a.violations, a.checked, a.tolerance, a.first_violation
        );
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    let mut config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.options.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidConfiguration(format!("--jobs: {e}")))?;
    }
    let default_format = match cli.command {
        Command::Verify { .. } => ReportFormat::Json,
        _ => ReportFormat::Csv,
    };
    let out = Output {
        path: cli.out.or_else(|| config.out.clone()),
        format: cli
            .format
            .map(ReportFormat::from)
            .or(config.format)
            .unwrap_or(default_format),
    };
    match cli.command {
        Command::Mu => cmd_mu(&config, &out)?,
        Command::Bound => cmd_bound(&config, &out)?,
        Command::Verify { experiment } => cmd_verify(&config, experiment, &out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Config(Error::Numerical { label, reason })) => {
            eprintln!("error: numerical failure in {label}: {reason}");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
