//! The two-component mixture `θ N(μ, 1) + (1 − θ) N(−μ, 1)` and its
//! Ornstein–Uhlenbeck time evolution.
//!
//! Everything here is closed form. The posterior weight of the right
//! component is a logistic function of `x`,
//!
//! ```text
//! w_θ(x) = θ φ(x − μ) / f_θ(x) = σ(2μx + ln(θ / (1 − θ))),
//! ```
//!
//! so `w_θ = 1/2` at `x = ln((1 − θ)/θ) / (2μ)`, and the score is
//! `s_θ(x) = (2 w_θ(x) − 1) μ − x`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::{
    log_add_exp, logistic, logistic_variance, normal_cdf, normal_log_pdf, normal_pdf, normal_sf,
};

/// A member of the mixture family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureParams {
    theta: f64,
    mu: f64,
}

impl MixtureParams {
    /// Requires `0 < theta < 1` and `mu > 0`.
    pub fn new(theta: f64, mu: f64) -> Result<Self> {
        if theta > 0.0 && theta < 1.0 && mu > 0.0 && mu.is_finite() {
            Ok(MixtureParams { theta, mu })
        } else {
            Err(Error::InvalidParams { theta, mu })
        }
    }

    /// Evolved members may carry `mu = 0` once `e^{-t} μ` underflows.
    pub(crate) fn new_unchecked(theta: f64, mu: f64) -> Self {
        debug_assert!(theta > 0.0 && theta < 1.0 && mu >= 0.0);
        MixtureParams { theta, mu }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Same location, different weight.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        if theta > 0.0 && theta < 1.0 {
            Ok(MixtureParams { theta, ..*self })
        } else {
            Err(Error::InvalidParams { theta, mu: self.mu })
        }
    }

    /// The mirrored member `(1 − θ, μ)`; its density is `x ↦ f_θ(−x)`.
    pub fn mirrored(&self) -> Self {
        MixtureParams {
            theta: 1.0 - self.theta,
            mu: self.mu,
        }
    }

    fn logit(&self) -> f64 {
        (self.theta / (1.0 - self.theta)).ln()
    }

    fn weight_arg(&self, x: f64) -> f64 {
        2.0 * self.mu * x + self.logit()
    }

    pub fn density(&self, x: f64) -> f64 {
        self.theta * normal_pdf(x - self.mu) + (1.0 - self.theta) * normal_pdf(x + self.mu)
    }

    pub fn log_density(&self, x: f64) -> f64 {
        log_add_exp(
            self.theta.ln() + normal_log_pdf(x - self.mu),
            (-self.theta).ln_1p() + normal_log_pdf(x + self.mu),
        )
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.theta * normal_cdf(x - self.mu) + (1.0 - self.theta) * normal_cdf(x + self.mu)
    }

    /// `1 − F_θ(x)` without cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        self.theta * normal_sf(x - self.mu) + (1.0 - self.theta) * normal_sf(x + self.mu)
    }

    /// Posterior probability of the right component, in logistic form.
    pub fn weight(&self, x: f64) -> f64 {
        logistic(self.weight_arg(x))
    }

    /// `w (1 − w)`, accurate in both tails.
    pub fn weight_variance(&self, x: f64) -> f64 {
        logistic_variance(self.weight_arg(x))
    }

    /// The point where the two weighted components balance.
    pub fn weight_midpoint(&self) -> f64 {
        ((1.0 - self.theta) / self.theta).ln() / (2.0 * self.mu)
    }

    /// ∂ₓ log f_θ(x)
    pub fn score(&self, x: f64) -> f64 {
        (2.0 * self.weight(x) - 1.0) * self.mu - x
    }

    /// ∂ₓ s_θ(x) = 4μ² w(1 − w) − 1
    pub fn score_dx(&self, x: f64) -> f64 {
        4.0 * self.mu * self.mu * self.weight_variance(x) - 1.0
    }

    /// ∂_θ w_θ(x) = w (1 − w) / (θ (1 − θ))
    pub fn weight_dtheta(&self, x: f64) -> f64 {
        self.weight_variance(x) / (self.theta * (1.0 - self.theta))
    }

    /// ∂_θ log f_θ(x) = (φ(x − μ) − φ(x + μ)) / f_θ(x)
    pub fn log_density_dtheta(&self, x: f64) -> f64 {
        let w = self.weight(x);
        w / self.theta - (1.0 - w) / (1.0 - self.theta)
    }

    /// Draws `n` i.i.d. observations: pick the right component with
    /// probability θ, then add a standard normal.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let right = rng.gen::<f64>() < self.theta;
        let z: f64 = rng.sample(StandardNormal);
        if right {
            self.mu + z
        } else {
            -self.mu + z
        }
    }
}

/// `φ(x − μ) φ(x + μ) / (f_θ(x) f_θ*(x))` for two members sharing `μ`.
///
/// Written as `u / (A B)` with `u = e^{−2μ|x|}`, so it stays finite for any
/// `x` and makes the bounds `u ≤ ratio ≤ u / (θθ* ∧ (1−θ)(1−θ*))` visible.
pub fn component_overlap(theta: f64, theta_star: f64, mu: f64, x: f64) -> f64 {
    let u = (-2.0 * mu * x.abs()).exp();
    let (a, b) = if x >= 0.0 {
        (
            theta + (1.0 - theta) * u,
            theta_star + (1.0 - theta_star) * u,
        )
    } else {
        (
            theta * u + (1.0 - theta),
            theta_star * u + (1.0 - theta_star),
        )
    };
    u / (a * b)
}

/// Signed score difference `s_θ(x) − s_θ*(x) = 2μ(θ − θ*) φφ / (f_θ f_θ*)`.
pub fn score_diff(p: &MixtureParams, q: &MixtureParams, x: f64) -> Result<f64> {
    if p.mu != q.mu {
        return Err(Error::MismatchedMu(p.mu, q.mu));
    }
    Ok(2.0 * p.mu * (p.theta - q.theta) * component_overlap(p.theta, q.theta, p.mu, x))
}

/// A mixture member pushed forward through the OU flow for time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedParams {
    base: MixtureParams,
    t: f64,
    mu_t: f64,
}

impl EvolvedParams {
    pub fn base(&self) -> MixtureParams {
        self.base
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mu_t(&self) -> f64 {
        self.mu_t
    }

    /// The evolved law as a family member `(θ, e^{−t}μ)`.
    pub fn params(&self) -> MixtureParams {
        MixtureParams::new_unchecked(self.base.theta, self.mu_t)
    }
}

/// Law of `X_t = e^{−t} X₀ + √(1 − e^{−2t}) Z` when `X₀ ~ P_θ`.
pub fn evolve(p: &MixtureParams, t: f64) -> Result<EvolvedParams> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(EvolvedParams {
        base: *p,
        t,
        mu_t: (-t).exp() * p.mu,
    })
}

/// Standard deviation of `X_t | X₀`, `√(1 − e^{−2t})`.
pub fn forward_sd(t: f64) -> f64 {
    (-(-2.0 * t).exp_m1()).sqrt()
}

/// One draw of `X_t | X₀ = x0 ~ N(e^{−t} x0, 1 − e^{−2t})`.
pub fn sample_forward<R: Rng + ?Sized>(x0: f64, t: f64, rng: &mut R) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(x0);
    }
    let z: f64 = rng.sample(StandardNormal);
    Ok((-t).exp() * x0 + forward_sd(t) * z)
}

/// Parameter space `Θ = [η, 1 − η]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpace {
    eta: f64,
}

/// Margin used wherever none is given; matches the extreme weights 0.01/0.99.
pub const DEFAULT_ETA: f64 = 0.01;

impl Default for ParamSpace {
    fn default() -> Self {
        ParamSpace { eta: DEFAULT_ETA }
    }
}

impl ParamSpace {
    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta < 0.5 {
            Ok(ParamSpace { eta })
        } else {
            Err(Error::InvalidMargin(eta))
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lower(&self) -> f64 {
        self.eta
    }

    pub fn upper(&self) -> f64 {
        1.0 - self.eta
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lower() && theta <= self.upper()
    }

    /// `n ≥ 2` uniformly spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let (lo, hi) = (self.lower(), self.upper());
        let step = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { hi } else { lo + k as f64 * step })
            .collect()
    }
}
