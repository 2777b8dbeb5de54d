//! Closed-form constants behind the estimators' error bounds, evaluated
//! numerically and checked as inequalities.
//!
//! Score matching: the Lipschitz norm `‖L_SM‖` grows like `μ³ e^{−μ²/2}`
//! while the curvature `C_SM` decays like `μ e^{−μ²/2}`, so their ratio blows
//! up with the separation `μ`. Denoising score matching: the analogous ratio
//! is `ψ(μ, T) / ξ(μ, T)`, which stays bounded once `T ≥ 2 ln μ`.

use crate::contrast::dm_sm_dtheta;
use crate::error::{Error, Result};
use crate::gaussian::{normal_cdf, normal_pdf, normal_sf, sqrt_half_pi};
use crate::model::{component_overlap, MixtureParams, ParamSpace};
use crate::quadrature::QuadratureSpec;
use crate::search::{argmin, golden_section};

/// Slack allowed in `lhs ≤ rhs`.
pub const BOUND_TOLERANCE: f64 = 1e-12;

/// Points in the `θ`-grid used for suprema and infima over `Θ`.
pub const THETA_GRID: usize = 256;

/// The `≳` constant of the Lipschitz lower bound is fixed at this `μ` and
/// then checked at every larger `μ`.
pub const LIPSCHITZ_REFERENCE_MU: f64 = 2.0;

/// Explicit bound on `ψ(μ, T)` for `T ≥ max(0, ln μ)`: the Lipschitz constant
/// `8ψ / (η² (2π)^{1/8})` is at most `192 / (η² (2π)^{1/8})`.
pub const PSI_CEILING: f64 = 24.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl BoundReport {
    /// Report on the claim `lhs ≤ rhs`.
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            satisfied: lhs <= rhs + BOUND_TOLERANCE,
            margin: rhs - lhs,
        }
    }
}

/// `‖sup_θ |∂_θ m_SM(θ, X)|‖_{L²(P_θ0)}` with the supremum over `points`
/// equally spaced weights in `[η, 1 − η]`.
pub fn lipschitz_norm_sm_with(
    mu: f64,
    eta: f64,
    theta0: f64,
    points: usize,
    q: &QuadratureSpec,
) -> Result<f64> {
    let p0 = MixtureParams::new(theta0, mu)?;
    let grid = ParamSpace::new(eta)?.grid(points);
    let second_moment = q.expect(&p0, |x| {
        let sup = grid
            .iter()
            .map(|&t| dm_sm_dtheta(t, mu, x).abs())
            .fold(0.0, f64::max);
        sup * sup
    })?;
    Ok(second_moment.sqrt())
}

/// Lipschitz norm at `θ0 = 1/2` on the standard 256-point grid.
pub fn lipschitz_norm_sm(mu: f64, eta: f64, q: &QuadratureSpec) -> Result<f64> {
    lipschitz_norm_sm_with(mu, eta, 0.5, THETA_GRID, q)
}

/// `‖L_SM‖ / (μ³ e^{−μ²/2})`.
pub fn lipschitz_scaled(mu: f64, eta: f64, q: &QuadratureSpec) -> Result<f64> {
    Ok(lipschitz_norm_sm(mu, eta, q)? / lipschitz_rate(mu))
}

fn lipschitz_rate(mu: f64) -> f64 {
    mu.powi(3) * (-0.5 * mu * mu).exp()
}

/// `4μ² ∫ (φ(x−μ)φ(x+μ) / (f_θ f_θ0))² f_θ0 dx`, which equals
/// `FI(P_θ0, P_θ) / (θ − θ0)²`.
pub fn curvature_sm_at(mu: f64, theta0: f64, theta: f64, q: &QuadratureSpec) -> Result<f64> {
    let p0 = MixtureParams::new(theta0, mu)?;
    MixtureParams::new(theta, mu)?;
    let integral = q.expect(&p0, |x| {
        let r = component_overlap(theta, theta0, mu, x);
        r * r
    })?;
    Ok(4.0 * mu * mu * integral)
}

/// `C_SM(μ)`: infimum of [`curvature_sm_at`] over `θ ∈ [η, 1 − η]`, by a
/// 256-point scan refined by golden section.
pub fn curvature_sm(mu: f64, theta0: f64, eta: f64, q: &QuadratureSpec) -> Result<f64> {
    let grid = ParamSpace::new(eta)?.grid(THETA_GRID);
    let values = grid
        .iter()
        .map(|&t| curvature_sm_at(mu, theta0, t, q))
        .collect::<Result<Vec<f64>>>()?;
    let k = argmin(&values);
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let refined = golden_section(
        |t| curvature_sm_at(mu, theta0, t, q).unwrap_or(f64::INFINITY),
        a,
        b,
        1e-10,
    );
    Ok(refined.value.min(values[k]))
}

/// `(32μ / (15 m² √(2π))) e^{−μ²/2}` with `m = η · min(θ0, 1 − θ0)`.
pub fn curvature_sm_upper(mu: f64, theta0: f64, eta: f64) -> f64 {
    let m = eta * theta0.min(1.0 - theta0);
    32.0 * mu / (15.0 * m * m * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * mu * mu).exp()
}

/// `g(x) = x^{7/4} + x^{3/4} (3 + 6x² + x⁴)^{1/4} + x^{3/2}`
pub fn psi_integrand(x: f64) -> f64 {
    let x2 = x * x;
    x.powf(1.75) + x.powf(0.75) * (3.0 + 6.0 * x2 + x2 * x2).powf(0.25) + x.powf(1.5)
}

/// `ψ(μ, T) = ∫₀ᵀ g(μ_t) e^{−μ_t²/8} dt` with `μ_t = e^{−t} μ`.
pub fn psi(mu: f64, horizon: f64, q: &QuadratureSpec) -> Result<f64> {
    if horizon <= 0.0 {
        return Ok(0.0);
    }
    q.integrate(0.0, horizon, |t| {
        let m = mu * (-t).exp();
        psi_integrand(m) * (-m * m / 8.0).exp()
    })
}

/// `∫ g(u) e^{−u²/8} du` over `[e^{−T} μ, μ]`, i.e. the interval length times
/// the uniform average. This drops the `1/u` Jacobian of `u = μ e^{−t}` and
/// differs from [`psi`]; it is kept for display.
pub fn psi_interval_average(mu: f64, horizon: f64, q: &QuadratureSpec) -> Result<f64> {
    if horizon <= 0.0 {
        return Ok(0.0);
    }
    q.integrate(mu * (-horizon).exp(), mu, |u| {
        psi_integrand(u) * (-u * u / 8.0).exp()
    })
}

/// `ξ(μ, T)`: `μ²(1 − e^{−2T})` for `μ ≤ 1`, `1 − μ² e^{−2T}` otherwise.
pub fn xi(mu: f64, horizon: f64) -> f64 {
    if mu <= 1.0 {
        -mu * mu * (-2.0 * horizon).exp_m1()
    } else {
        1.0 - mu * mu * (-2.0 * horizon).exp()
    }
}

/// Both ratios of the Lipschitz norm to the curvature constant.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioComparison {
    pub mu: f64,
    pub horizon: f64,
    pub sm_ratio: f64,
    pub ddsm_ratio: f64,
    /// `ddsm_ratio ≤ sm_ratio`
    pub report: BoundReport,
}

/// Compares `‖L_SM‖ / C_SM` with `ψ / ξ`. Requires `μ > 1` and `T ≥ 2 ln μ`.
pub fn bound_ratio_report(
    mu: f64,
    horizon: f64,
    eta: f64,
    q: &QuadratureSpec,
) -> Result<RatioComparison> {
    if !(mu > 1.0) {
        return Err(Error::InvalidParams { theta: 0.5, mu });
    }
    if horizon < 2.0 * mu.ln() * (1.0 - 1e-12) {
        return Err(Error::InvalidSchedule(format!(
            "horizon {horizon} below 2 ln mu = {}",
            2.0 * mu.ln()
        )));
    }
    let sm_ratio = lipschitz_norm_sm(mu, eta, q)? / curvature_sm(mu, 0.5, eta, q)?;
    let ddsm_ratio = psi(mu, horizon, q)? / xi(mu, horizon);
    Ok(RatioComparison {
        mu,
        horizon,
        sm_ratio,
        ddsm_ratio,
        report: BoundReport::new(format!("ratio_separation mu={mu}"), ddsm_ratio, sm_ratio),
    })
}

/// Mills ratio `(1 − Φ(a)) / φ(a)`.
pub fn mills_ratio(a: f64) -> f64 {
    if a < 30.0 {
        normal_sf(a) / normal_pdf(a)
    } else {
        let r = 1.0 / (a * a);
        (1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r))) / a
    }
}

/// `E[e^{−t|X|}]` for `X ~ P_θ`, which does not depend on `θ`:
/// `φ(μ) (R(t − μ) + R(t + μ))` with `R` the Mills ratio.
pub fn folded_exponential_moment(mu: f64, t: f64) -> f64 {
    normal_pdf(mu) * (mills_ratio(t - mu) + mills_ratio(t + mu))
}

/// `[min(√(π/2), 1/(t−μ)) + min(√(π/2), 1/(t+μ))] φ(μ)` for `t ≥ μ`, the
/// bound on `E[e^{−t|X|}]` obtained by bounding each Mills ratio separately.
pub fn exponential_moment_bound(mu: f64, t: f64) -> f64 {
    let cap = sqrt_half_pi();
    let near = if t > mu { cap.min(1.0 / (t - mu)) } else { cap };
    (near + cap.min(1.0 / (t + mu))) * normal_pdf(mu)
}

/// `min(√(π/2), 1/(t−μ) + 1/(t+μ)) φ(μ)`. Not a valid bound for `t` close
/// to `μ`; see the tests.
pub fn exponential_moment_bound_single_min(mu: f64, t: f64) -> f64 {
    sqrt_half_pi().min(1.0 / (t - mu) + 1.0 / (t + mu)) * normal_pdf(mu)
}

/// Tail inequalities for `X ~ N(μ, σ²)` at distance `t ≥ 0` above the mean,
/// plus the exponential-moment bound of the unit-variance family when
/// `t ≥ μ`.
pub fn gaussian_tail_bounds(mu: f64, sigma: f64, t: f64) -> Vec<BoundReport> {
    let a = t / sigma;
    let tail = normal_sf(a);
    let density = normal_pdf(a);
    let tag = |name: &str| format!("{name} mu={mu} sigma={sigma} t={t}");
    let mut out = Vec::new();
    if t > 0.0 {
        out.push(BoundReport::new(
            tag("mills_lower"),
            density / (a + 1.0 / a),
            tail,
        ));
        out.push(BoundReport::new(tag("mills_upper"), tail, density / a));
    }
    out.push(BoundReport::new(
        tag("chernoff"),
        tail,
        0.5 * (-0.5 * a * a).exp(),
    ));
    let cap = if t > 0.0 {
        sqrt_half_pi().min(sigma / t)
    } else {
        sqrt_half_pi()
    };
    out.push(BoundReport::new(tag("tail_min_form"), tail, cap * density));
    if t >= mu {
        out.push(BoundReport::new(
            tag("exponential_moment"),
            folded_exponential_moment(mu, t),
            exponential_moment_bound(mu, t),
        ));
    }
    out
}

/// Every bound over a grid of separations `mu_list`.
pub fn verify_bounds(mu_list: &[f64], eta: f64, q: &QuadratureSpec) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    let c_ref = lipschitz_scaled(LIPSCHITZ_REFERENCE_MU, eta, q)?;
    let coarse_eta = (5.0 * eta).min(0.45);
    let mut psi_at_long_horizon = Vec::new();

    for &mu in mu_list {
        let lip = lipschitz_norm_sm(mu, eta, q)?;
        let curv = curvature_sm(mu, 0.5, eta, q)?;
        out.push(BoundReport::new(
            format!("curvature_sm_upper mu={mu}"),
            curv,
            curvature_sm_upper(mu, 0.5, eta),
        ));
        if mu > LIPSCHITZ_REFERENCE_MU {
            out.push(BoundReport::new(
                format!("lipschitz_sm_lower mu={mu}"),
                c_ref * lipschitz_rate(mu),
                lip,
            ));
        }
        if coarse_eta > eta {
            out.push(BoundReport::new(
                format!("lipschitz_sm_eta_monotone mu={mu}"),
                lipschitz_norm_sm(mu, coarse_eta, q)?,
                lip,
            ));
        }
        for &delta in &[0.1, 0.25, 0.45] {
            for theta in [0.5 - delta, 0.5 + delta] {
                let fi = crate::divergence::fisher_divergence(
                    &MixtureParams::new(0.5, mu)?,
                    &MixtureParams::new(theta, mu)?,
                    q,
                )?;
                out.push(BoundReport::new(
                    format!("curvature_condition mu={mu} theta={theta}"),
                    curv * delta * delta,
                    fi * (1.0 + 1e-9),
                ));
            }
        }

        let log_mu2 = 2.0 * mu.ln();
        for horizon in [1.0, log_mu2, 2.0 * log_mu2] {
            if horizon > 0.0 && horizon >= mu.ln() {
                out.push(BoundReport::new(
                    format!("psi_ceiling mu={mu} T={horizon}"),
                    psi(mu, horizon, q)?,
                    PSI_CEILING,
                ));
            }
        }
        if mu > 1.0 {
            for m in [2.0, 4.0] {
                let horizon = m * mu.ln();
                out.push(BoundReport::new(
                    format!("xi_lower mu={mu} T={horizon}"),
                    1.0 - mu.powf(-2.0 * (m - 1.0)),
                    xi(mu, horizon),
                ));
            }
            let horizon = log_mu2;
            let ratio = bound_ratio_report(mu, horizon, eta, q)?;
            psi_at_long_horizon.push(psi(mu, horizon, q)?);
            out.push(BoundReport::new(
                format!("ddsm_ratio_upper mu={mu}"),
                ratio.ddsm_ratio,
                PSI_CEILING / (1.0 - mu.powi(-2)),
            ));
            out.push(BoundReport::new(
                format!("sm_ratio_lower mu={mu}"),
                mu * mu,
                ratio.sm_ratio,
            ));
            out.push(ratio.report);
        }

        for &sigma in &[0.5, 1.0, 2.0] {
            for &t in &[0.0, 0.5, 1.0, 2.0, 3.0, 5.0] {
                out.extend(
                    gaussian_tail_bounds(mu, sigma, t)
                        .into_iter()
                        .filter(|r| !r.name.starts_with("exponential_moment")),
                );
            }
        }
        for &factor in &[1.1, 1.5, 2.0, 3.0] {
            let t = factor * mu;
            out.extend(
                gaussian_tail_bounds(mu, 1.0, t)
                    .into_iter()
                    .filter(|r| r.name.starts_with("exponential_moment")),
            );
        }
    }

    if psi_at_long_horizon.len() >= 2 {
        let hi = psi_at_long_horizon
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = psi_at_long_horizon
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        out.push(BoundReport::new("psi_spread_across_mu", hi / lo, 3.0));
    }
    out.push(BoundReport::new(
        "xi_branch_agreement mu=1",
        (xi(1.0, 1.0) - (1.0 - (-2.0f64).exp())).abs(),
        0.0,
    ));
    out.push(BoundReport::new(
        "chernoff_equality_at_zero",
        (0.5 - normal_cdf(0.0)).abs(),
        0.0,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn report_flag_follows_tolerance() {
        assert!(BoundReport::new("a", 1.0, 1.0).satisfied);
        assert!(BoundReport::new("a", 1.0 + 1e-13, 1.0).satisfied);
        assert!(!BoundReport::new("a", 1.0 + 1e-9, 1.0).satisfied);
        assert_eq!(BoundReport::new("a", 1.0, 3.0).margin, 2.0);
    }

    #[test]
    fn xi_branches() {
        assert!((xi(1.0, 0.7) - (1.0 - (-1.4f64).exp())).abs() < 1e-15);
        assert!((xi(2.0, 4f64.ln()) - 0.75).abs() < 1e-15);
        assert!((xi(0.5, 60.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn psi_limits_and_oracle() {
        assert_eq!(psi(2.0, 0.0, &q()).unwrap(), 0.0);
        assert!(psi(2.0, 1e-9, &q()).unwrap() < 1e-8);
        // 10^6-point trapezoid in t
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        let f = |t: f64| {
            let m = (-t).exp();
            psi_integrand(m) * (-m * m / 8.0).exp()
        };
        let mut s = 0.5 * (f(0.0) + f(1.0));
        for k in 1..n {
            s += f(k as f64 * h);
        }
        let brute = s * h;
        let value = psi(1.0, 1.0, &q()).unwrap();
        assert!(((value - brute) / brute).abs() < 1e-6);
        // the interval-average display is a different quantity
        let display = psi_interval_average(1.0, 1.0, &q()).unwrap();
        assert!((display - value).abs() > 1e-3);
    }

    #[test]
    fn psi_bounded_across_separations() {
        let v: Vec<f64> = [2.0, 5.0, 10.0]
            .iter()
            .map(|&mu: &f64| psi(mu, 2.0 * mu.ln(), &q()).unwrap())
            .collect();
        let hi = v.iter().copied().fold(0.0, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(hi / lo < 3.0, "{v:?}");
        assert!(hi <= PSI_CEILING);
    }

    #[test]
    fn psi_continuous() {
        for &(mu, t) in &[(0.5, 1.0), (2.0, 2.0 * 2f64.ln()), (4.0, 3.0)] {
            let a = psi(mu, t, &q()).unwrap();
            let b = psi(mu + 1e-8, t + 1e-8, &q()).unwrap();
            assert!((a - b).abs() < 1e-6);
            assert!((xi(mu, t) - xi(mu + 1e-8, t + 1e-8)).abs() < 1e-6);
        }
    }

    #[test]
    fn lipschitz_norm_properties() {
        let small = lipschitz_norm_sm(0.25, 0.01, &q()).unwrap();
        assert!(small.is_finite() && small > 0.0);
        let tight = lipschitz_norm_sm(2.0, 0.01, &q()).unwrap();
        let loose = lipschitz_norm_sm(2.0, 0.05, &q()).unwrap();
        assert!(tight > loose);
        let doubled = lipschitz_norm_sm_with(2.0, 0.01, 0.5, 2 * THETA_GRID, &q()).unwrap();
        assert!(((doubled - tight) / tight).abs() < 1e-3);
    }

    #[test]
    fn lipschitz_calibration_at_unit_separation_does_not_carry_over() {
        // The scaled norm dips between μ = 1 and μ = 2 before growing, so a
        // constant fixed at μ = 1 is violated at μ = 2; fixed at μ = 2 it
        // holds further out.
        let at = |mu: f64| lipschitz_scaled(mu, 0.01, &q()).unwrap();
        assert!(at(2.0) < at(1.0));
        assert!(at(3.0) > at(2.0));
        assert!(at(4.0) > at(2.0));
    }

    #[test]
    fn curvature_properties() {
        let c: Vec<f64> = [2.0, 3.0, 4.0]
            .iter()
            .map(|&mu| curvature_sm(mu, 0.5, 0.01, &q()).unwrap())
            .collect();
        assert!(c[0] > c[1] && c[1] > c[2], "{c:?}");
        for (mu, value) in [2.0, 3.0, 4.0].iter().zip(&c) {
            assert!(*value <= curvature_sm_upper(*mu, 0.5, 0.01));
        }
    }

    #[test]
    fn curvature_matches_divergence_quotient() {
        // FI(P_θ0, P_θ) = (θ − θ0)² · curvature_sm_at, so the quotient at a
        // small offset recovers the pointwise curvature.
        let (mu, theta0, d) = (2.0, 0.5, 1e-3);
        let p0 = MixtureParams::new(theta0, mu).unwrap();
        let p = MixtureParams::new(theta0 + d, mu).unwrap();
        let fi = crate::divergence::fisher_divergence(&p0, &p, &q()).unwrap();
        let at_theta0 = curvature_sm_at(mu, theta0, theta0, &q()).unwrap();
        assert!((fi / (d * d) / at_theta0 - 1.0).abs() < 0.05);
        // and twice the quotient is the Hessian, not the curvature
        let hessian = crate::estimator::sm_hessian(theta0, mu, &q()).unwrap();
        assert!((2.0 * fi / (d * d) / hessian - 1.0).abs() < 0.05);
    }

    #[test]
    fn ratio_separation_at_four() {
        let mu = 4.0;
        let r = bound_ratio_report(mu, 2.0 * mu.ln(), 0.01, &q()).unwrap();
        assert!(r.sm_ratio > mu * mu);
        assert!(r.sm_ratio > 5.0 * r.ddsm_ratio);
        assert!(r.report.satisfied);
        assert!(bound_ratio_report(0.5, 1.0, 0.01, &q()).is_err());
        assert!(bound_ratio_report(4.0, 1.0, 0.01, &q()).is_err());
    }

    #[test]
    fn sm_ratio_increases_with_separation() {
        let r: Vec<f64> = [2.0, 3.0, 4.0, 5.0]
            .iter()
            .map(|&mu: &f64| {
                bound_ratio_report(mu, 2.0 * mu.ln(), 0.01, &q())
                    .unwrap()
                    .sm_ratio
            })
            .collect();
        assert!(r.windows(2).all(|w| w[1] > w[0]), "{r:?}");
    }

    #[test]
    fn tail_bounds() {
        let at_zero = gaussian_tail_bounds(1.0, 1.0, 0.0);
        let chernoff = at_zero
            .iter()
            .find(|r| r.name.starts_with("chernoff"))
            .unwrap();
        assert_eq!(chernoff.lhs, 0.5);
        assert_eq!(chernoff.rhs, 0.5);
        let at_three = gaussian_tail_bounds(1.0, 1.0, 3.0);
        assert_eq!(at_three.len(), 5);
        for r in &at_three {
            assert!(r.satisfied && r.margin > 0.0, "{r:?}");
        }
        for r in gaussian_tail_bounds(2.0, 1.0, 3.0) {
            assert!(r.satisfied, "{r:?}");
        }
    }

    #[test]
    fn exponential_moment_closed_form_matches_quadrature() {
        for &mu in &[0.5, 1.0, 2.0, 4.0] {
            for &t in &[0.3, mu, 1.5 * mu, 3.0 * mu + 1.0] {
                let p = MixtureParams::new(0.3, mu).unwrap();
                let quad = q().expect(&p, |x| (-t * x.abs()).exp()).unwrap();
                let closed = folded_exponential_moment(mu, t);
                assert!(((quad - closed) / closed).abs() < 1e-10, "{mu} {t}");
            }
        }
    }

    #[test]
    fn single_min_exponential_bound_fails_near_the_mean() {
        let (mu, t) = (1.0, 1.1);
        let actual = folded_exponential_moment(mu, t);
        assert!(actual > exponential_moment_bound_single_min(mu, t));
        assert!(actual <= exponential_moment_bound(mu, t));
        // far enough out both forms hold
        let t = 3.0;
        assert!(folded_exponential_moment(mu, t) <= exponential_moment_bound_single_min(mu, t));
    }

    #[test]
    fn mills_ratio_branches_meet() {
        let a = 30.0;
        let exact = normal_sf(a) / normal_pdf(a);
        assert!(((mills_ratio(a) - exact) / exact).abs() < 1e-8);
        assert!((mills_ratio(0.0) - sqrt_half_pi()).abs() < 1e-15);
    }

    #[test]
    fn standard_grid_all_satisfied() {
        let rows = verify_bounds(&[0.5, 1.0, 2.0, 3.0, 4.0], 0.01, &q()).unwrap();
        let failed: Vec<_> = rows.iter().filter(|r| !r.satisfied).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(rows
            .iter()
            .any(|r| r.name.starts_with("lipschitz_sm_lower")));
        assert!(rows
            .iter()
            .any(|r| r.name.starts_with("exponential_moment")));
    }
}
