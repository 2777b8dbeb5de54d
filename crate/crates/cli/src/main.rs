use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gmscore::divergence::default_theta_grid;
use gmscore::estimator::OptimizerSpec;
use gmscore::harness::{self, EstimatorKind, ExperimentSpec, HorizonRule, LandscapeSpec};
use gmscore::stats::median;
use gmscore::{Error, QuadratureSpec};

const EXIT_BOUND_VIOLATION: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "gmscore",
    version,
    about = "Weight estimation for a symmetric two-component Gaussian mixture"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one estimator to a single-column CSV of samples (header `x`).
    Estimate {
        #[arg(long, value_parser = parse_estimator)]
        estimator: EstimatorKind,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        mu: f64,
        /// DDSM horizon; defaults to max(1, 2 ln mu).
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
    },
    /// Monte Carlo sweep over (mu, n, replication) driven by a config file.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for sweep.csv; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra `key=value` overrides applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Centered SM/DDSM/ML loss curves for one sample, plus densities and scores.
    Landscape {
        #[arg(long, default_value_t = 5.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.5)]
        theta0: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// DDSM horizon; defaults to max(1, 2 ln mu).
        #[arg(long = "T")]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 99)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        /// Loss CSV; densities go next to it as `<stem>_densities.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Isoperimetric constants per theta and for the whole family.
    Isoperimetric {
        #[arg(long = "mu-list", value_delimiter = ',', required = true)]
        mu_list: Vec<f64>,
        /// Defaults to 21 points spanning [eta, 1 - eta].
        #[arg(long = "theta-list", value_delimiter = ',')]
        theta_list: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate every bound; exits with status 2 if any is violated.
    VerifyBounds {
        #[arg(long = "mu-list", value_delimiter = ',', required = true)]
        mu_list: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_estimator(s: &str) -> Result<EstimatorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Csv { source, .. } if source.is_io_error() => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn horizon_for(mu: f64, horizon: Option<f64>) -> f64 {
    horizon.unwrap_or_else(|| HorizonRule::TwoLnMu.horizon(mu))
}

fn densities_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}_densities.csv"))
}

/// Returns the JSON summary and whether the run found a bound violation.
fn run(command: Command) -> Result<(Value, bool), Error> {
    match command {
        Command::Estimate {
            estimator,
            data,
            mu,
            horizon,
            eta,
        } => {
            let samples = harness::read_samples(&data)?;
            let t = horizon_for(mu, horizon);
            let fit = harness::estimate(
                estimator,
                &samples,
                mu,
                t,
                0.1,
                eta,
                &OptimizerSpec::default(),
            )?;
            Ok((
                json!({
                    "command": "estimate",
                    "estimator": estimator.label(),
                    "n": samples.len(),
                    "mu": mu,
                    "T": t,
                    "theta_hat": fit.theta_hat,
                    "loss_at_opt": fit.loss_at_opt,
                    "evaluations": fit.evaluations,
                    "boundary_hit": fit.boundary_hit,
                }),
                false,
            ))
        }
        Command::Sweep {
            config,
            seed,
            out,
            overrides,
        } => {
            let mut spec = match &config {
                Some(path) => ExperimentSpec::from_file(path)?,
                None => ExperimentSpec::default(),
            };
            for kv in &overrides {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                spec.set(k, v)?;
            }
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let path = match (out, &spec.output_path) {
                (Some(dir), _) => dir.join("sweep.csv"),
                (None, Some(p)) => p.clone(),
                (None, None) => PathBuf::from("sweep.csv"),
            };
            let rows = harness::run_sweep_to_file(&spec, &path)?;
            let mut medians = serde_json::Map::new();
            for kind in &spec.estimators {
                let per_mu: Vec<Value> = spec
                    .mu_list
                    .iter()
                    .map(|&mu| {
                        let errs: Vec<f64> = rows
                            .iter()
                            .filter(|r| r.estimator == *kind && r.mu == mu)
                            .map(|r| r.abs_error)
                            .collect();
                        json!({ "mu": mu, "median_abs_error": median(&errs) })
                    })
                    .collect();
                medians.insert(kind.label().to_string(), Value::Array(per_mu));
            }
            Ok((
                json!({
                    "command": "sweep",
                    "output": path,
                    "rows": rows.len(),
                    "seed": spec.seed,
                    "boundary_hits": rows.iter().filter(|r| r.boundary_hit).count(),
                    "median_abs_error": medians,
                }),
                false,
            ))
        }
        Command::Landscape {
            mu,
            theta0,
            n,
            horizon,
            grid,
            seed,
            eta,
            out,
        } => {
            let spec = LandscapeSpec {
                theta0,
                mu,
                n,
                horizon: horizon_for(mu, horizon),
                grid,
                seed,
                eta,
            };
            let dens = densities_path(&out);
            let s = harness::run_landscape(&spec, &out, Some(&dens))?;
            Ok((
                json!({
                    "command": "landscape",
                    "losses": out,
                    "densities": dens,
                    "sm_range": s.sm_range,
                    "ddsm_range": s.ddsm_range,
                    "ml_range": s.ml_range,
                    "sm_to_ml_range": s.sm_range / s.ml_range,
                    "ml_argmin": s.ml_argmin,
                    "ml_argmin_offset_cells": s.ml_argmin_offset,
                }),
                false,
            ))
        }
        Command::Isoperimetric {
            mu_list,
            theta_list,
            eta,
            out,
        } => {
            let thetas = if theta_list.is_empty() {
                default_theta_grid(eta)
            } else {
                theta_list
            };
            let rows =
                harness::run_isoperimetric(&mu_list, &thetas, &QuadratureSpec::default(), &out)?;
            let family: Vec<Value> = mu_list
                .iter()
                .filter_map(|&mu| rows.iter().find(|r| r.mu == mu))
                .map(|r| json!({ "mu": r.mu, "c_ip_family": r.c_ip_family, "two_phi_mu": r.two_phi_mu }))
                .collect();
            Ok((
                json!({
                    "command": "isoperimetric",
                    "output": out,
                    "rows": rows.len(),
                    "family": family,
                }),
                false,
            ))
        }
        Command::VerifyBounds { mu_list, eta, out } => {
            let s = harness::run_verify_bounds(&mu_list, eta, &QuadratureSpec::default(), &out)?;
            let failed: Vec<&str> = s
                .rows
                .iter()
                .filter(|r| !r.satisfied)
                .map(|r| r.name.as_str())
                .collect();
            Ok((
                json!({
                    "command": "verify-bounds",
                    "output": out,
                    "rows": s.rows.len(),
                    "all_satisfied": s.all_satisfied,
                    "violations": failed,
                }),
                !s.all_satisfied,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok((summary, violated)) => {
            println!("{summary}");
            if violated {
                ExitCode::from(EXIT_BOUND_VIOLATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
