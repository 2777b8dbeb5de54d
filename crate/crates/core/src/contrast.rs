//! Contrast functions `m(θ, x)` for the four estimators.
//!
//! For the score-based contrasts the integrand `s² + 2s′` of a family member
//! with location `m` splits into a part that depends on `θ` and one that does
//! not:
//!
//! ```text
//! s² + 2s′ = [4m² w(1 − w) − 2m y (2w − 1)] + [m² + y² − 2].
//! ```
//!
//! Evaluators expose both halves. The optimizer only ever looks at the
//! `θ`-dependent half, which keeps the flat score-matching loss from being
//! swamped by the `y²` term and makes the estimate independent of any
//! additive constant.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::{log_add_exp, LN_SQRT_2PI};
use crate::model::forward_sd;
use crate::quadrature::Rule;

/// Default number of Gauss–Legendre nodes in time.
pub const DEFAULT_TIME_NODES: usize = 32;
/// Default number of Gauss–Hermite nodes in space.
pub const DEFAULT_SPACE_NODES: usize = 64;
/// Raw-form Monte Carlo draws with `t` below this are redrawn.
pub const MC_MIN_TIME: f64 = 1e-12;

/// `ln(θ / (1 − θ))`
#[inline]
pub fn logit(theta: f64) -> f64 {
    theta.ln() - (-theta).ln_1p()
}

/// θ-dependent half of `s² + 2s′` at `y` for location `m`.
#[inline]
pub(crate) fn stein_varying(m: f64, logit_theta: f64, y: f64) -> f64 {
    let z = 2.0 * m * y + logit_theta;
    let e = (-z.abs()).exp();
    let d = 1.0 + e;
    let v = e / (d * d);
    // 2w − 1 = tanh(z / 2)
    let tanh = ((1.0 - e) / d).copysign(z);
    4.0 * m * m * v - 2.0 * m * y * tanh
}

/// θ-independent half of `s² + 2s′`.
#[inline]
fn stein_baseline(m: f64, y: f64) -> f64 {
    m * m + y * y - 2.0
}

/// `−log f_θ(x)` minus its θ-independent part `(x² + μ²)/2 + ln √(2π)`.
#[inline]
fn ml_varying(mu: f64, theta: f64, x: f64) -> f64 {
    -log_add_exp(theta.ln() + mu * x, (-theta).ln_1p() - mu * x)
}

#[inline]
fn ml_baseline(mu: f64, x: f64) -> f64 {
    0.5 * (x * x + mu * mu) + LN_SQRT_2PI
}

/// Time horizon and the two quadrature rules used by the DDSM contrast.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSchedule {
    horizon: f64,
    time: Rule,
    space: Rule,
}

impl NoiseSchedule {
    pub fn new(horizon: f64, time_nodes: usize, space_nodes: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if time_nodes < 16 {
            return Err(Error::InvalidSchedule(format!(
                "need at least 16 time nodes, got {time_nodes}"
            )));
        }
        if space_nodes < 32 {
            return Err(Error::InvalidSchedule(format!(
                "need at least 32 space nodes, got {space_nodes}"
            )));
        }
        Ok(NoiseSchedule {
            horizon,
            time: Rule::legendre_on(time_nodes, 0.0, horizon),
            space: Rule::standard_normal(space_nodes),
        })
    }

    /// Horizon `T` with the default 32 × 64 rules.
    pub fn with_horizon(horizon: f64) -> Result<Self> {
        Self::new(horizon, DEFAULT_TIME_NODES, DEFAULT_SPACE_NODES)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn time_rule(&self) -> &Rule {
        &self.time
    }

    pub fn space_rule(&self) -> &Rule {
        &self.space
    }
}

/// `T = max(1, 2 ln μ)`.
pub fn default_horizon(mu: f64) -> f64 {
    (2.0 * mu.ln()).max(1.0)
}

/// Hyvärinen contrast `s_θ(x)² + 2 s′_θ(x)`.
pub fn m_sm(theta: f64, mu: f64, x: f64) -> f64 {
    stein_varying(mu, logit(theta), x) + stein_baseline(mu, x)
}

/// `∂_θ m_SM(θ, x) = ∂_θ w · (4μ² − 4xμ − 8μ² w)`.
pub fn dm_sm_dtheta(theta: f64, mu: f64, x: f64) -> f64 {
    let z = 2.0 * mu * x + logit(theta);
    let e = (-z.abs()).exp();
    let d = 1.0 + e;
    let v = e / (d * d);
    let tanh = ((1.0 - e) / d).copysign(z);
    let dw = v / (theta * (1.0 - theta));
    // 4μ² − 8μ²w = −4μ²(2w − 1)
    dw * (-4.0 * mu * mu * tanh - 4.0 * x * mu)
}

fn ddsm_varying(logit_theta: f64, mu: f64, x0: f64, sched: &NoiseSchedule) -> f64 {
    sched
        .time
        .iter()
        .map(|(t, wt)| {
            let decay = (-t).exp();
            let m = mu * decay;
            let centre = decay * x0;
            let sd = forward_sd(t);
            wt * sched
                .space
                .apply(|z| stein_varying(m, logit_theta, centre + sd * z))
        })
        .sum()
}

/// `∫₀ᵀ (μ_t² + E[X_t² | X₀ = x0] − 2) dt` in closed form.
fn ddsm_baseline(mu: f64, x0: f64, horizon: f64) -> f64 {
    let decayed = -0.5 * (-2.0 * horizon).exp_m1();
    (mu * mu + x0 * x0 - 1.0) * decayed - horizon
}

/// Denoising score-matching contrast in Stein form,
/// `∫₀ᵀ E[s_{θ,t}(X_t)² + 2 s′_{θ,t}(X_t) | X₀ = x0] dt`, where `s_{θ,t}` is the
/// score of the evolved member `(θ, e^{−t}μ)`.
pub fn m_ddsm(theta: f64, mu: f64, x0: f64, sched: &NoiseSchedule) -> f64 {
    ddsm_varying(logit(theta), mu, x0, sched) + ddsm_baseline(mu, x0, sched.horizon)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// The DDSM contrast from its defining noise-draw form,
/// `T · E_U[s(X_t)² + (2/σ_t) s(X_t) Z]` with `t = T U`.
///
/// Each draw evaluates the integrand at `Z` and `−Z` and averages the two.
/// The pair has the same mean as a single draw, but the `Z/σ_t` term cancels
/// to leading order as `t → 0`, which keeps the variance finite.
pub fn m_ddsm_mc<R: Rng + ?Sized>(
    theta: f64,
    mu: f64,
    x0: f64,
    horizon: f64,
    draws: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    if draws == 0 {
        return Err(Error::InvalidContrast("need at least one draw".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidSchedule(format!("horizon {horizon}")));
    }
    let lt = logit(theta);
    let score = |m: f64, y: f64| {
        let z = 2.0 * m * y + lt;
        let e = (-z.abs()).exp();
        let tanh = ((1.0 - e) / (1.0 + e)).copysign(z);
        m * tanh - y
    };
    let mut values = Vec::with_capacity(draws);
    for _ in 0..draws {
        let t = loop {
            let t = horizon * rng.gen::<f64>();
            if t >= MC_MIN_TIME {
                break t;
            }
        };
        let z: f64 = rng.sample(StandardNormal);
        let decay = (-t).exp();
        let m = mu * decay;
        let sd = forward_sd(t);
        let raw = |z: f64| {
            let s = score(m, decay * x0 + sd * z);
            s * s + 2.0 * s * z / sd
        };
        values.push(horizon * 0.5 * (raw(z) + raw(-z)));
    }
    let estimate = crate::stats::mean(&values);
    let std_error = (crate::stats::variance(&values) / draws as f64).sqrt();
    Ok(McEstimate {
        estimate,
        std_error,
    })
}

/// Classical denoising score matching at a single noise level:
/// `E[s_θ(X_t)² + 2 s′_θ(X_t) | X₀ = x0]` with the score of the noise-free
/// member, not of the evolved one.
pub fn m_dsm_fixed_t(theta: f64, mu: f64, x0: f64, t: f64, space: &Rule) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(dsm_varying(logit(theta), mu, x0, t, space) + dsm_baseline(mu, x0, t))
}

fn dsm_varying(logit_theta: f64, mu: f64, x0: f64, t: f64, space: &Rule) -> f64 {
    let centre = (-t).exp() * x0;
    let sd = forward_sd(t);
    space.apply(|z| stein_varying(mu, logit_theta, centre + sd * z))
}

fn dsm_baseline(mu: f64, x0: f64, t: f64) -> f64 {
    // E[X_t² | x0] = e^{−2t} x0² + 1 − e^{−2t}
    let decay2 = (-2.0 * t).exp();
    mu * mu + decay2 * (x0 * x0 - 1.0) - 1.0
}

/// Negative log-likelihood `−log f_θ(x)`.
pub fn m_ml(theta: f64, mu: f64, x: f64) -> f64 {
    ml_varying(mu, theta, x) + ml_baseline(mu, x)
}

/// Which contrast an evaluator computes, with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ContrastKind {
    Sm,
    Ddsm(NoiseSchedule),
    DsmFixed { t: f64, space: Rule },
    Ml,
}

/// A contrast for the family with location `mu`, as a function of `(θ, x)`.
///
/// `offset` is a constant added to every value. It has no effect on any
/// estimate and exists so that this can be checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastEvaluator {
    mu: f64,
    kind: ContrastKind,
    offset: f64,
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams {
            theta: f64::NAN,
            mu,
        })
    }
}

impl ContrastEvaluator {
    pub fn sm(mu: f64) -> Result<Self> {
        Self::new(mu, ContrastKind::Sm)
    }

    pub fn ml(mu: f64) -> Result<Self> {
        Self::new(mu, ContrastKind::Ml)
    }

    pub fn ddsm(mu: f64, schedule: NoiseSchedule) -> Result<Self> {
        Self::new(mu, ContrastKind::Ddsm(schedule))
    }

    pub fn dsm_fixed(mu: f64, t: f64, space_nodes: usize) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime(t));
        }
        if space_nodes < 32 {
            return Err(Error::InvalidContrast(format!(
                "need at least 32 space nodes, got {space_nodes}"
            )));
        }
        Self::new(
            mu,
            ContrastKind::DsmFixed {
                t,
                space: Rule::standard_normal(space_nodes),
            },
        )
    }

    pub fn new(mu: f64, kind: ContrastKind) -> Result<Self> {
        check_mu(mu)?;
        Ok(ContrastEvaluator {
            mu,
            kind,
            offset: 0.0,
        })
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kind(&self) -> &ContrastKind {
        &self.kind
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Short name used in CSV output.
    pub fn name(&self) -> &'static str {
        match self.kind {
            ContrastKind::Sm => "SM",
            ContrastKind::Ddsm(_) => "DDSM",
            ContrastKind::DsmFixed { .. } => "DSM-fixed-t",
            ContrastKind::Ml => "ML",
        }
    }

    /// `m(θ, x)`, including the offset.
    pub fn eval(&self, theta: f64, x: f64) -> f64 {
        self.varying(theta, x) + self.baseline(x)
    }

    /// The part of `m(θ, x)` that depends on `θ`.
    pub fn varying(&self, theta: f64, x: f64) -> f64 {
        let mu = self.mu;
        match &self.kind {
            ContrastKind::Sm => stein_varying(mu, logit(theta), x),
            ContrastKind::Ddsm(s) => ddsm_varying(logit(theta), mu, x, s),
            ContrastKind::DsmFixed { t, space } => dsm_varying(logit(theta), mu, x, *t, space),
            ContrastKind::Ml => ml_varying(mu, theta, x),
        }
    }

    /// The rest of `m(θ, x)`, offset included.
    pub fn baseline(&self, x: f64) -> f64 {
        let mu = self.mu;
        self.offset
            + match &self.kind {
                ContrastKind::Sm => stein_baseline(mu, x),
                ContrastKind::Ddsm(s) => ddsm_baseline(mu, x, s.horizon),
                ContrastKind::DsmFixed { t, .. } => dsm_baseline(mu, x, *t),
                ContrastKind::Ml => ml_baseline(mu, x),
            }
    }
}

/// One Gauss–Hermite "layer" of a score-based risk: weighted points `y`
/// at which `stein_varying(m, ·, y)` is averaged.
#[derive(Debug, Clone)]
pub(crate) struct Layer {
    pub m: f64,
    pub ys: Vec<f64>,
    pub ws: Vec<f64>,
}

impl Layer {
    pub fn eval(&self, logit_theta: f64) -> f64 {
        let m = self.m;
        self.ys
            .iter()
            .zip(&self.ws)
            .map(|(&y, &w)| w * stein_varying(m, logit_theta, y))
            .sum()
    }

    /// Linear (cloud-in-cell) binning of the points onto a uniform grid of
    /// `bins` points spanning their range. Mass and first moment are kept
    /// exactly; empty cells are dropped.
    pub fn binned(&self, bins: usize) -> Layer {
        let lo = self.ys.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) || bins < 2 {
            return self.clone();
        }
        let h = (hi - lo) / (bins - 1) as f64;
        let mut acc = vec![0.0; bins];
        for (&y, &w) in self.ys.iter().zip(&self.ws) {
            let pos = (y - lo) / h;
            let k = (pos.floor() as usize).min(bins - 2);
            let frac = pos - k as f64;
            acc[k] += w * (1.0 - frac);
            acc[k + 1] += w * frac;
        }
        let (ys, ws) = acc
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w != 0.0)
            .map(|(k, w)| (lo + k as f64 * h, w))
            .unzip();
        Layer { m: self.m, ys, ws }
    }
}

/// Hermite weights below this carry no mass worth tracking.
const NEGLIGIBLE_WEIGHT: f64 = 1e-30;

/// Layer for the weighted average over `points` of a Gauss–Hermite
/// expectation at time `t` with location `m`, scaled by `scale`.
pub(crate) fn gaussian_layer(
    points: &[f64],
    weights: &[f64],
    t: f64,
    m: f64,
    space: &Rule,
    scale: f64,
) -> Layer {
    let decay = (-t).exp();
    let sd = forward_sd(t);
    let kept: Vec<(f64, f64)> = space
        .iter()
        .filter(|&(_, w)| w >= NEGLIGIBLE_WEIGHT)
        .collect();
    let mut ys = Vec::with_capacity(points.len() * kept.len());
    let mut ws = Vec::with_capacity(points.len() * kept.len());
    for (&x, &wx) in points.iter().zip(weights) {
        let centre = decay * x;
        for &(z, w) in &kept {
            ys.push(centre + sd * z);
            ws.push(scale * w * wx);
        }
    }
    Layer { m, ys, ws }
}
