use std::path::Path;

use super::{csv_writer, format_float};
use crate::bounds::{verify_bounds, BoundReport};
use crate::contrast::{ContrastEvaluator, NoiseSchedule};
use crate::divergence::isoperimetric_constant;
use crate::error::{Error, Result};
use crate::estimator::{PreparedRisk, RiskMode, DEFAULT_BINS};
use crate::gaussian::normal_pdf;
use crate::model::{MixtureParams, ParamSpace};
use crate::quadrature::QuadratureSpec;
use crate::rng::stream;
use crate::search::argmin;

/// Weights whose densities and scores are tabulated next to a landscape.
pub const LANDSCAPE_THETAS: [f64; 5] = [0.01, 0.1, 0.5, 0.9, 0.99];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeSpec {
    pub theta0: f64,
    pub mu: f64,
    pub n: usize,
    pub horizon: f64,
    pub grid: usize,
    pub seed: u64,
    pub eta: f64,
}

impl Default for LandscapeSpec {
    fn default() -> Self {
        LandscapeSpec {
            theta0: 0.5,
            mu: 5.0,
            n: 10_000,
            horizon: 2.0 * 5f64.ln(),
            grid: 99,
            seed: 0,
            eta: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeSummary {
    pub thetas: Vec<f64>,
    /// Centered losses, minimum subtracted.
    pub loss_sm: Vec<f64>,
    pub loss_ddsm: Vec<f64>,
    pub loss_ml: Vec<f64>,
    pub sm_range: f64,
    pub ddsm_range: f64,
    pub ml_range: f64,
    pub ml_argmin: f64,
    /// Grid cells between the ML argmin and the grid point nearest `θ0`.
    pub ml_argmin_offset: usize,
}

fn centered(values: Vec<f64>) -> (Vec<f64>, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (values.into_iter().map(|v| v - lo).collect(), hi - lo)
}

/// Empirical SM, DDSM and ML losses over a uniform `θ`-grid for one sample,
/// plus (optionally) densities and scores of a few family members.
pub fn run_landscape(
    spec: &LandscapeSpec,
    losses: &Path,
    densities: Option<&Path>,
) -> Result<LandscapeSummary> {
    if spec.grid < 2 {
        return Err(Error::Config(format!(
            "landscape grid needs >= 2 points, got {}",
            spec.grid
        )));
    }
    if spec.n == 0 {
        return Err(Error::EmptyData);
    }
    let space = ParamSpace::new(spec.eta)?;
    let p0 = MixtureParams::new(spec.theta0, spec.mu)?;
    let data = p0.sample(spec.n, &mut stream(spec.seed, 0));
    let thetas = space.grid(spec.grid);

    let curve = |ev: ContrastEvaluator, mode| -> Result<Vec<f64>> {
        let risk = PreparedRisk::new(&ev, &data, mode)?;
        Ok(thetas.iter().map(|&t| risk.total(t)).collect())
    };
    let (loss_sm, sm_range) = centered(curve(ContrastEvaluator::sm(spec.mu)?, RiskMode::Exact)?);
    let ddsm = ContrastEvaluator::ddsm(spec.mu, NoiseSchedule::with_horizon(spec.horizon)?)?;
    let (loss_ddsm, ddsm_range) = centered(curve(ddsm, RiskMode::Binned { bins: DEFAULT_BINS })?);
    let (loss_ml, ml_range) = centered(curve(ContrastEvaluator::ml(spec.mu)?, RiskMode::Exact)?);

    let k = argmin(&loss_ml);
    let nearest = argmin(
        &thetas
            .iter()
            .map(|t| (t - spec.theta0).abs())
            .collect::<Vec<_>>(),
    );

    let mut w = csv_writer(losses)?;
    let err = |e| Error::csv(losses, e);
    w.write_record(["theta", "loss_sm", "loss_ddsm", "loss_ml"])
        .map_err(err)?;
    for i in 0..thetas.len() {
        w.write_record([
            format_float(thetas[i]),
            format_float(loss_sm[i]),
            format_float(loss_ddsm[i]),
            format_float(loss_ml[i]),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(losses, e))?;

    if let Some(path) = densities {
        let mut w = csv_writer(path)?;
        let err = |e| Error::csv(path, e);
        w.write_record(["theta", "x", "density", "score"])
            .map_err(err)?;
        let (lo, hi) = (-spec.mu - 4.0, spec.mu + 4.0);
        for &theta in &LANDSCAPE_THETAS {
            let p = MixtureParams::new(theta, spec.mu)?;
            for k in 0..=400 {
                let x = lo + (hi - lo) * k as f64 / 400.0;
                w.write_record([
                    format_float(theta),
                    format_float(x),
                    format_float(p.density(x)),
                    format_float(p.score(x)),
                ])
                .map_err(err)?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }

    Ok(LandscapeSummary {
        ml_argmin: thetas[k],
        ml_argmin_offset: k.abs_diff(nearest),
        thetas,
        loss_sm,
        loss_ddsm,
        loss_ml,
        sm_range,
        ddsm_range,
        ml_range,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetricRow {
    pub mu: f64,
    pub theta: f64,
    pub c_ip: f64,
    pub c_ip_family: f64,
    pub two_phi_mu: f64,
}

/// Per-member isoperimetric constants, the family infimum over
/// `theta_grid`, and `2φ(μ)` for comparison.
pub fn run_isoperimetric(
    mu_list: &[f64],
    theta_grid: &[f64],
    q: &QuadratureSpec,
    output: &Path,
) -> Result<Vec<IsoperimetricRow>> {
    if mu_list.is_empty() || theta_grid.is_empty() {
        return Err(Error::Config("mu and theta lists must be nonempty".into()));
    }
    let mut rows = Vec::new();
    for &mu in mu_list {
        let members = theta_grid
            .iter()
            .map(|&theta| {
                Ok((
                    theta,
                    isoperimetric_constant(&MixtureParams::new(theta, mu)?, q),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let family = members.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        rows.extend(members.into_iter().map(|(theta, c_ip)| IsoperimetricRow {
            mu,
            theta,
            c_ip,
            c_ip_family: family,
            two_phi_mu: 2.0 * normal_pdf(mu),
        }));
    }
    let mut w = csv_writer(output)?;
    let err = |e| Error::csv(output, e);
    w.write_record(["mu", "theta", "c_ip", "c_ip_family", "two_phi_mu"])
        .map_err(err)?;
    for r in &rows {
        w.write_record([r.mu, r.theta, r.c_ip, r.c_ip_family, r.two_phi_mu].map(format_float))
            .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(output, e))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub rows: Vec<BoundReport>,
    pub all_satisfied: bool,
}

/// Evaluates every bound over `mu_list` and writes one row per check. Rows
/// are written even when some check fails.
pub fn run_verify_bounds(
    mu_list: &[f64],
    eta: f64,
    q: &QuadratureSpec,
    output: &Path,
) -> Result<VerifySummary> {
    if mu_list.is_empty() {
        return Err(Error::Config("mu list must be nonempty".into()));
    }
    let rows = verify_bounds(mu_list, eta, q)?;
    let mut w = csv_writer(output)?;
    let err = |e| Error::csv(output, e);
    w.write_record(["name", "lhs", "rhs", "satisfied", "margin"])
        .map_err(err)?;
    for r in &rows {
        w.write_record([
            r.name.clone(),
            format_float(r.lhs),
            format_float(r.rhs),
            r.satisfied.to_string(),
            format_float(r.margin),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::io(output, e))?;
    let all_satisfied = rows.iter().all(|r| r.satisfied);
    Ok(VerifySummary {
        rows,
        all_satisfied,
    })
}
