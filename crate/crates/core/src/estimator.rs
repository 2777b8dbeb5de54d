//! Empirical risk minimization over `Θ = [η, 1 − η]`, the sandwich variance
//! of the score-matching estimator, and the Cramér–Rao bound.

use crate::contrast::{gaussian_layer, logit, ContrastEvaluator, ContrastKind, Layer};
use crate::divergence::fisher_information;
use crate::error::{Error, Result};
use crate::model::{component_overlap, MixtureParams, ParamSpace};
use crate::quadrature::QuadratureSpec;
use crate::search::{argmin, golden_section};
use crate::stats::pairwise_sum;

/// How the denoising risks are evaluated inside the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMode {
    /// Every observation times every Gauss–Hermite node.
    Exact,
    /// The noised points of each time node are binned linearly onto a
    /// uniform grid of `bins` points. Only affects DDSM and fixed-noise DSM.
    Binned { bins: usize },
}

pub const DEFAULT_BINS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSpec {
    pub coarse_grid: usize,
    pub refine_tol: f64,
    pub mode: RiskMode,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        OptimizerSpec {
            coarse_grid: 512,
            refine_tol: 1e-9,
            mode: RiskMode::Binned { bins: DEFAULT_BINS },
        }
    }
}

impl OptimizerSpec {
    pub fn validated(self) -> Result<Self> {
        if self.coarse_grid < 64 {
            return Err(Error::InvalidOptimizer(format!(
                "coarse grid needs at least 64 points, got {}",
                self.coarse_grid
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::InvalidOptimizer(format!(
                "refinement tolerance must be positive, got {}",
                self.refine_tol
            )));
        }
        if let RiskMode::Binned { bins } = self.mode {
            if bins < 256 {
                return Err(Error::InvalidOptimizer(format!(
                    "binned risk needs at least 256 bins, got {bins}"
                )));
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub theta_hat: f64,
    /// Full empirical risk at `theta_hat`, offset included.
    pub loss_at_opt: f64,
    pub evaluations: usize,
    pub boundary_hit: bool,
}

fn sorted(data: &[f64]) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `(1/n) Σ m(θ, xᵢ)`.
///
/// The data are sorted before the pairwise sum, so the result depends only
/// on the multiset of observations.
pub fn empirical_risk(ev: &ContrastEvaluator, theta: f64, data: &[f64]) -> Result<f64> {
    let data = sorted(data)?;
    let values: Vec<f64> = data.iter().map(|&x| ev.eval(theta, x)).collect();
    Ok(pairwise_sum(&values) / data.len() as f64)
}

enum Objective {
    Stein(Vec<Layer>),
    Pointwise(Vec<f64>),
}

/// The empirical risk of one evaluator on one data set, split into its
/// `θ`-dependent part and a constant.
pub struct PreparedRisk {
    ev: ContrastEvaluator,
    objective: Objective,
    constant: f64,
}

impl PreparedRisk {
    pub fn new(ev: &ContrastEvaluator, data: &[f64], mode: RiskMode) -> Result<Self> {
        let data = sorted(data)?;
        let n = data.len() as f64;
        let baseline: Vec<f64> = data.iter().map(|&x| ev.baseline(x)).collect();
        let constant = pairwise_sum(&baseline) / n;
        let bin = |layer: Layer| match mode {
            RiskMode::Exact => layer,
            RiskMode::Binned { bins } => layer.binned(bins),
        };
        // With more observations than bins, the observations themselves are
        // binned first; the noised points are binned again per time node.
        let (points, weights) = match mode {
            RiskMode::Binned { bins } if data.len() > bins => {
                let l = Layer {
                    m: 0.0,
                    ys: data.clone(),
                    ws: vec![1.0 / n; data.len()],
                }
                .binned(bins);
                (l.ys, l.ws)
            }
            _ => (data.clone(), vec![1.0 / n; data.len()]),
        };
        let objective = match ev.kind() {
            ContrastKind::Sm => Objective::Stein(vec![Layer {
                m: ev.mu(),
                ws: vec![1.0 / n; data.len()],
                ys: data,
            }]),
            ContrastKind::Ddsm(s) => Objective::Stein(
                s.time_rule()
                    .iter()
                    .map(|(t, wt)| {
                        let m = ev.mu() * (-t).exp();
                        bin(gaussian_layer(&points, &weights, t, m, s.space_rule(), wt))
                    })
                    .collect(),
            ),
            ContrastKind::DsmFixed { t, space } => Objective::Stein(vec![bin(gaussian_layer(
                &points,
                &weights,
                *t,
                ev.mu(),
                space,
                1.0,
            ))]),
            ContrastKind::Ml => Objective::Pointwise(data),
        };
        Ok(PreparedRisk {
            ev: ev.clone(),
            objective,
            constant,
        })
    }

    /// The `θ`-dependent part of the empirical risk.
    pub fn varying(&self, theta: f64) -> f64 {
        match &self.objective {
            Objective::Stein(layers) => {
                let lt = logit(theta);
                layers.iter().map(|l| l.eval(lt)).sum()
            }
            Objective::Pointwise(data) => {
                let v: Vec<f64> = data.iter().map(|&x| self.ev.varying(theta, x)).collect();
                pairwise_sum(&v) / data.len() as f64
            }
        }
    }

    /// The rest of the empirical risk, offset included.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn total(&self, theta: f64) -> f64 {
        self.varying(theta) + self.constant
    }
}

/// Coarse scan of `Θ` followed by golden-section refinement in the cell
/// around the best grid point. Ties go to the smaller `θ`.
pub fn minimize(
    ev: &ContrastEvaluator,
    data: &[f64],
    opt: &OptimizerSpec,
    space: &ParamSpace,
) -> Result<EstimationResult> {
    let opt = opt.validated()?;
    let risk = PreparedRisk::new(ev, data, opt.mode)?;
    Ok(minimize_prepared(&risk, &opt, space))
}

pub fn minimize_prepared(
    risk: &PreparedRisk,
    opt: &OptimizerSpec,
    space: &ParamSpace,
) -> EstimationResult {
    let grid = space.grid(opt.coarse_grid);
    let values: Vec<f64> = grid.iter().map(|&t| risk.varying(t)).collect();
    let k = argmin(&values);
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let refined = golden_section(|t| risk.varying(t), a, b, opt.refine_tol);
    let refined_wins =
        refined.value < values[k] || (refined.value == values[k] && refined.x < grid[k]);
    let (theta_hat, value) = if refined_wins {
        (refined.x, refined.value)
    } else {
        (grid[k], values[k])
    };
    let boundary_hit =
        theta_hat - space.lower() <= opt.refine_tol || space.upper() - theta_hat <= opt.refine_tol;
    EstimationResult {
        theta_hat,
        loss_at_opt: value + risk.constant(),
        evaluations: grid.len() + refined.evaluations,
        boundary_hit,
    }
}

/// Pieces of the sandwich variance `E[(∂_θ m)²] / E[∂²_θ m]²` at `θ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichVariance {
    pub numerator: f64,
    /// `E[∂²_θ m]` by a central difference of `∂_θ m` with step `1e-5`.
    pub denominator: f64,
    /// The same, Richardson-extrapolated from steps `1e-5` and `5e-6`.
    pub denominator_extrapolated: f64,
    pub value: f64,
}

/// Step of the central difference for the second `θ`-derivative.
const SECOND_DERIVATIVE_STEP: f64 = 1e-5;

pub fn avar_sm_parts(theta0: f64, mu: f64, q: &QuadratureSpec) -> Result<SandwichVariance> {
    use crate::contrast::dm_sm_dtheta;
    let p = MixtureParams::new(theta0, mu)?;
    let numerator = q.expect(&p, |x| {
        let d = dm_sm_dtheta(theta0, mu, x);
        d * d
    })?;
    let curvature = |h: f64| {
        q.expect(&p, |x| {
            (dm_sm_dtheta(theta0 + h, mu, x) - dm_sm_dtheta(theta0 - h, mu, x)) / (2.0 * h)
        })
    };
    let h = SECOND_DERIVATIVE_STEP;
    let coarse = curvature(h)?;
    let fine = curvature(0.5 * h)?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    if !(coarse.abs() >= 1e-30) {
        return Err(Error::VarianceOverflow {
            numerator,
            denominator: coarse,
        });
    }
    Ok(SandwichVariance {
        numerator,
        denominator: coarse,
        denominator_extrapolated: extrapolated,
        value: numerator / (coarse * coarse),
    })
}

/// Asymptotic variance of `√n (θ̂_SM − θ0)`.
pub fn avar_sm(theta0: f64, mu: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(avar_sm_parts(theta0, mu, q)?.value)
}

/// `E_θ0[∂²_θ m_SM(θ0, X)] = 8μ² ∫ (φ(x−μ)φ(x+μ)/f_θ0²)² f_θ0`, the second
/// derivative of the Fisher divergence at its minimum.
pub fn sm_hessian(theta0: f64, mu: f64, q: &QuadratureSpec) -> Result<f64> {
    let p = MixtureParams::new(theta0, mu)?;
    let r2 = q.expect(&p, |x| {
        let r = component_overlap(theta0, theta0, mu, x);
        r * r
    })?;
    Ok(8.0 * mu * mu * r2)
}

/// Cramér–Rao bound `1 / I(θ0)`.
pub fn crlb(theta0: f64, mu: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(1.0 / fisher_information(&MixtureParams::new(theta0, mu)?, q)?)
}
