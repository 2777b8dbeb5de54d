use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::config::{EstimatorKind, ExperimentSpec};
use super::{csv_writer, estimate, format_float};
use crate::error::{Error, Result};
use crate::estimator::{OptimizerSpec, RiskMode};
use crate::model::MixtureParams;
use crate::rng::{stream, Stream};

pub const SWEEP_HEADER: [&str; 10] = [
    "mu",
    "n",
    "T",
    "replication_index",
    "estimator",
    "theta_hat",
    "abs_error",
    "loss_at_opt",
    "boundary_hit",
    "wall_time_ms",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub mu: f64,
    pub n: usize,
    pub horizon: f64,
    pub replication_index: usize,
    pub estimator: EstimatorKind,
    pub theta_hat: f64,
    pub abs_error: f64,
    pub loss_at_opt: f64,
    pub boundary_hit: bool,
    /// Zero unless timing is requested, so that reruns are
    /// byte-identical by default.
    pub wall_time_ms: f64,
}

/// Source of the observations for one sweep cell.
pub trait Sampler: Sync {
    fn draw(&self, p: &MixtureParams, n: usize, rng: &mut Stream) -> Vec<f64>;
}

/// I.i.d. draws from the mixture.
pub struct MixtureSampler;

impl Sampler for MixtureSampler {
    fn draw(&self, p: &MixtureParams, n: usize, rng: &mut Stream) -> Vec<f64> {
        p.sample(n, rng)
    }
}

pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>> {
    run_sweep_with(spec, &MixtureSampler)
}

/// Every `(μ, n, replication)` cell draws its data once from the stream
/// `(seed, replication)` and fits every requested estimator to it. Rows
/// come back sorted by `(μ, n, replication, estimator)`.
pub fn run_sweep_with<S: Sampler>(
    spec: &ExperimentSpec,
    sampler: &S,
) -> Result<Vec<ExperimentRow>> {
    let spec = spec.clone().validated()?;
    let opt = OptimizerSpec {
        coarse_grid: spec.coarse_grid,
        refine_tol: 1e-9,
        mode: RiskMode::Binned { bins: spec.bins },
    };
    let mut cells = Vec::new();
    for &mu in &spec.mu_list {
        for &n in &spec.n_list {
            for rep in 0..spec.replications {
                cells.push((mu, n, rep));
            }
        }
    }
    let per_cell: Vec<Vec<ExperimentRow>> = cells
        .par_iter()
        .map(|&(mu, n, rep)| {
            let p = MixtureParams::new(spec.theta0, mu)?;
            let mut rng = stream(spec.seed, rep as u64);
            let data = sampler.draw(&p, n, &mut rng);
            let horizon = spec.horizon.horizon(mu);
            spec.estimators
                .iter()
                .map(|&kind| {
                    let start = Instant::now();
                    let fit = estimate(kind, &data, mu, horizon, spec.dsm_t, spec.eta, &opt)?;
                    let wall_time_ms = if spec.record_timing {
                        start.elapsed().as_secs_f64() * 1e3
                    } else {
                        0.0
                    };
                    Ok(ExperimentRow {
                        mu,
                        n,
                        horizon,
                        replication_index: rep,
                        estimator: kind,
                        theta_hat: fit.theta_hat,
                        abs_error: (fit.theta_hat - spec.theta0).abs(),
                        loss_at_opt: fit.loss_at_opt,
                        boundary_hit: fit.boundary_hit,
                        wall_time_ms,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ExperimentRow> = per_cell.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.mu.total_cmp(&b.mu)
            .then(a.n.cmp(&b.n))
            .then(a.replication_index.cmp(&b.replication_index))
            .then(a.estimator.cmp(&b.estimator))
    });
    Ok(rows)
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".partial");
    path.with_file_name(name)
}

/// Writes rows to `<path>.partial` and renames it to `path` once complete,
/// so an interrupted write leaves the `.partial` file behind as a marker.
pub fn write_sweep_csv(path: &Path, rows: &[ExperimentRow]) -> Result<()> {
    let tmp = partial_path(path);
    let mut w = csv_writer(&tmp)?;
    let err = |e| Error::csv(&tmp, e);
    w.write_record(SWEEP_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            format_float(r.mu),
            r.n.to_string(),
            format_float(r.horizon),
            r.replication_index.to_string(),
            r.estimator.label().to_string(),
            format_float(r.theta_hat),
            format_float(r.abs_error),
            format_float(r.loss_at_opt),
            r.boundary_hit.to_string(),
            format_float(r.wall_time_ms),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(&tmp, e))?;
    drop(w);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn run_sweep_to_file(spec: &ExperimentSpec, path: &Path) -> Result<Vec<ExperimentRow>> {
    let rows = run_sweep(spec)?;
    write_sweep_csv(path, &rows)?;
    Ok(rows)
}
