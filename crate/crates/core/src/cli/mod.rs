//! Experiment runner behind the `subharm` binary.
//!
//! Each subcommand reads a [`RunConfig`] (JSON, optional), applies command
//! line overrides and writes plot-ready tables into the output directory.
//! Exit codes: 0 on success, 2 for configuration or I/O problems, 3 for
//! numerical failures (partial outputs are kept).

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{
    cmd_find_po, cmd_melnikov, cmd_period_curve, cmd_phase_portrait, cmd_strobo_scan, default_portrait_seeds, scan_seeds,
};
pub use config::{ExperimentBlock, OutputBlock, RunConfig, SeedLine, SystemBlock, DEFAULT_V0};
pub use output::{format_number, render_csv, render_json, write_table, Cell, Format, Table};

use crate::solvers::SolverKind;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "subharm", version, about = "Subharmonic periodic orbits of the forced pendulum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trajectories of a seed grid, with energy along each.
    PhasePortrait(CommonArgs),
    /// Period of the unforced libration as a function of the axis velocity.
    PeriodCurve(CommonArgs),
    /// Stroboscopic map iterates from a line of seeds near a resonance.
    StroboScan(CommonArgs),
    /// Subharmonic Melnikov function and its zeros.
    Melnikov(CommonArgs),
    /// Newton shooting from Melnikov seeds, with optional continuation.
    FindPo(FindPoArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Axis velocity of the resonant level.
    #[arg(long)]
    pub v0: Option<f64>,
    /// Forcing spectrum, e.g. "1*sin(1),4*cos(2)".
    #[arg(long)]
    pub forcing: Option<String>,
    #[arg(long, conflicts_with = "period")]
    pub omega: Option<f64>,
    #[arg(long)]
    pub period: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Significant digits of written numbers.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FindPoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_parser = parse_solver)]
    pub solver: Option<SolverKind>,
    /// Use only this Melnikov zero (0-based) as seed.
    #[arg(long)]
    pub seed_zero: Option<usize>,
    /// Continue every distinct orbit in eps up to this value.
    #[arg(long)]
    pub continue_to: Option<f64>,
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    match s {
        "strobo" => Ok(SolverKind::Strobo),
        "poincare" => Ok(SolverKind::Poincare),
        _ => Err(format!("unknown solver {s:?} (strobo | poincare)")),
    }
}

impl CommonArgs {
    /// Loads the config file (or defaults) and applies the flags on top.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let (s, e, o) = (&mut cfg.system, &mut cfg.experiment, &mut cfg.output);
        if let Some(x) = self.eps {
            s.epsilon = x;
        }
        if let Some(f) = &self.forcing {
            s.forcing = f.clone();
        }
        if let Some(w) = self.omega {
            s.omega = Some(w);
            s.period = None;
        }
        if let Some(t) = self.period {
            s.period = Some(t);
            s.omega = None;
        }
        if let Some(t0) = self.t0 {
            e.t0 = t0;
        }
        if let Some(m) = self.m {
            e.m = Some(m);
        }
        if let Some(n) = self.n {
            e.n = Some(n);
        }
        if let Some(v0) = self.v0 {
            e.v0 = Some(v0);
            e.c = None;
            e.x0 = None;
        }
        if let Some(dir) = &self.out {
            o.dir = dir.clone();
        }
        if let Some(f) = self.format {
            o.format = f;
        }
        if let Some(p) = self.precision {
            o.precision = p;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl FindPoArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = self.common.resolve()?;
        if let Some(s) = self.solver {
            cfg.experiment.solver = s;
        }
        if let Some(i) = self.seed_zero {
            cfg.experiment.seed_zero_index = Some(i);
        }
        if let Some(t) = self.continue_to {
            cfg.experiment.continue_to = Some(t);
        }
        Ok(cfg)
    }
}

/// Runs one subcommand and returns the written files.
pub fn execute(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    match command {
        Command::PhasePortrait(a) => cmd_phase_portrait(&a.resolve()?),
        Command::PeriodCurve(a) => cmd_period_curve(&a.resolve()?),
        Command::StroboScan(a) => cmd_strobo_scan(&a.resolve()?),
        Command::Melnikov(a) => cmd_melnikov(&a.resolve()?),
        Command::FindPo(a) => cmd_find_po(&a.resolve()?),
    }
}

/// Entry point of the binary: prints written files, returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(err) => {
            eprintln!("subharm: {err}");
            err.exit_code()
        }
    }
}
