//! Command-line front end: `run`, `bounds`, `verify`, `params`.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 verification failure,
//! 3 I/O failure.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    bounds_table, build_instance, build_schedule, cmd_bounds, cmd_params, cmd_run, fmt_float, params_table,
    run_experiment, write_bounds_csv, write_params_csv, write_run_csv, write_table, BoundsParams, BoundsRow,
    Instance, ParamsRow, RunMetadata, RunOutput, BOUNDS_COLUMNS, PARAMS_COLUMNS, RUN_COLUMNS,
};
pub use config::{DatasetSpec, ExperimentConfig, MethodName, StepRule, StepSize, ThetaSpec};

use crate::error::Error;
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SUITE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

#[derive(Debug, Parser)]
#[command(name = "unrolljac", version, about = "Unrolled Jacobians of parametric quadratics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unroll a method on a dataset and write suboptimality curves.
    Run(RunArgs),
    /// Write the theoretical bound curves.
    Bounds(BoundsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Write the Sobolev coefficient table.
    Params(ParamsArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// scalar_toy, synthetic, synthetic:NxD, breast_cancer:PATH or bodyfat:PATH
    #[arg(long)]
    pub dataset: Option<String>,
    /// Standardize dataset columns.
    #[arg(long)]
    pub standardize: bool,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<MethodName>,
    /// large, small or a number
    #[arg(long)]
    pub step_size: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 0.5)]
    pub ell: f64,
    #[arg(long, default_value_t = 10.0)]
    pub big_l: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Defaults to L/ℓ.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub d0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub g: f64,
    #[arg(long, default_value_t = 200)]
    pub horizon: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ell: f64,
    #[arg(long, default_value_t = 10.0)]
    pub big_l: f64,
    #[arg(long, default_value_t = 200)]
    pub horizon: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Config file (or defaults) with flag overrides applied.
    pub fn to_config(&self) -> crate::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(d) = &self.dataset {
            cfg.dataset = DatasetSpec::parse_flag(d)?;
        }
        if self.standardize {
            match &mut cfg.dataset {
                DatasetSpec::BreastCancerFile { standardize, .. } | DatasetSpec::BodyfatFile { standardize, .. } => {
                    *standardize = true
                }
                _ => return Err(Error::Config("standardize: only applies to file datasets".into())),
            }
        }
        if let Some(t) = &self.theta {
            cfg.theta = Some(ThetaSpec::parse_flag(t)?);
        }
        if let Some(m) = self.method {
            cfg.method = m;
        }
        if let Some(s) = &self.step_size {
            cfg.step_size = StepSize::parse_flag(s)?;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(e) = self.eta {
            cfg.eta = e;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parse `args` and run the command. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command) -> crate::Result<i32> {
    match command {
        Command::Run(args) => {
            let cfg = args.to_config()?;
            let out = cmd_run(&cfg)?;
            if cfg.out.is_some() {
                let b = out.metadata.burn_in;
                eprintln!(
                    "{} on {}: kappa={:.3e}, peak |J_t - J*| = {:.3e} at t={}",
                    out.metadata.method, out.metadata.dataset, out.metadata.kappa, b.peak_value, b.peak_index
                );
            }
            Ok(EXIT_OK)
        }
        Command::Bounds(a) => {
            let eta = a.eta.unwrap_or(a.big_l / a.ell);
            cmd_bounds(
                &BoundsParams {
                    ell: a.ell,
                    big_l: a.big_l,
                    alpha: a.alpha,
                    eta,
                    d0: a.d0,
                    g: a.g,
                    horizon: a.horizon,
                },
                a.out.as_deref(),
            )?;
            Ok(EXIT_OK)
        }
        Command::Params(a) => {
            cmd_params(a.alpha, a.eta, a.ell, a.big_l, a.horizon, a.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let checks = run_suite(a.suite)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!("{c}");
            }
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_SUITE })
        }
    }
}
