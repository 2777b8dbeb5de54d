//! Fisher divergence, Fisher information and isoperimetric constants of the
//! mixture family.
//!
//! On the real line the isoperimetric (Cheeger) constant of a law with a
//! positive continuous density reduces to
//!
//! ```text
//! C_IP(P) = inf_x f(x) / min(F(x), 1 − F(x)),
//! ```
//!
//! which is what [`isoperimetric_constant`] minimizes. For the family with
//! fixed `μ` the infimum over weights is `2φ(μ)`, reached by `θ = 1/2` at
//! `x = 0`.

use crate::error::{Error, Result};
use crate::model::{component_overlap, MixtureParams};
use crate::quadrature::QuadratureSpec;
use crate::search::{argmin, golden_section};

fn same_family(a: &MixtureParams, b: &MixtureParams) -> Result<()> {
    if a.mu() == b.mu() {
        Ok(())
    } else {
        Err(Error::MismatchedMu(a.mu(), b.mu()))
    }
}

/// `FI(P, Q) = E_P[(s_Q − s_P)²]`, using the closed form of the score
/// difference.
pub fn fisher_divergence(
    p_true: &MixtureParams,
    p_model: &MixtureParams,
    q: &QuadratureSpec,
) -> Result<f64> {
    same_family(p_true, p_model)?;
    let mu = p_true.mu();
    let dtheta = p_model.theta() - p_true.theta();
    if dtheta == 0.0 {
        return Ok(0.0);
    }
    let scale = 2.0 * mu * dtheta;
    let integral = q.expect(p_true, |x| {
        let r = component_overlap(p_model.theta(), p_true.theta(), mu, x);
        r * r
    })?;
    Ok(scale * scale * integral)
}

/// Same divergence, integrating the squared difference of the two scores as
/// evaluated independently.
pub fn fisher_divergence_direct(
    p_true: &MixtureParams,
    p_model: &MixtureParams,
    q: &QuadratureSpec,
) -> Result<f64> {
    same_family(p_true, p_model)?;
    q.expect(p_true, |x| {
        let d = p_model.score(x) - p_true.score(x);
        d * d
    })
}

/// `I(θ) = E_θ[(∂_θ log f_θ(X))²]`.
pub fn fisher_information(p: &MixtureParams, q: &QuadratureSpec) -> Result<f64> {
    q.expect(p, |x| {
        let d = p.log_density_dtheta(x);
        d * d
    })
}

/// `f(x) / min(F(x), 1 − F(x))`, with the upper tail taken in complementary
/// form.
pub fn isoperimetric_profile(p: &MixtureParams, x: f64) -> f64 {
    let tail = p.cdf(x).min(p.sf(x));
    p.density(x) / tail
}

/// Extra half-width added beyond `±μ` for the profile scan.
const PROFILE_MARGIN: f64 = 8.0;

fn minimize_profile<F: Fn(f64) -> f64>(profile: F, lo: f64, hi: f64, points: usize) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|k| lo + k as f64 * step).collect();
    let values: Vec<f64> = xs.iter().map(|&x| profile(x)).collect();
    let k = argmin(&values);
    let a = xs[k.saturating_sub(1)];
    let b = xs[(k + 1).min(points - 1)];
    let refined = golden_section(&profile, a, b, 1e-12 * (1.0 + a.abs().max(b.abs())));
    refined.value.min(values[k])
}

/// Global scan of the profile over `[−μ − 8, μ + 8]` with `grid.nodes`
/// points, then golden-section refinement in the cell around the scan
/// minimum.
pub fn isoperimetric_constant(p: &MixtureParams, grid: &QuadratureSpec) -> f64 {
    let lo = -p.mu() - PROFILE_MARGIN;
    let hi = p.mu() + PROFILE_MARGIN;
    minimize_profile(|x| isoperimetric_profile(p, x), lo, hi, grid.nodes.max(3))
}

/// Isoperimetric constant of the standard normal, by the same scan.
pub fn normal_isoperimetric_constant(grid: &QuadratureSpec) -> f64 {
    use crate::gaussian::{normal_cdf, normal_pdf, normal_sf};
    minimize_profile(
        |x| normal_pdf(x) / normal_cdf(x).min(normal_sf(x)),
        -PROFILE_MARGIN,
        PROFILE_MARGIN,
        grid.nodes.max(3),
    )
}

/// Smallest per-member constant over a grid of weights.
pub fn isoperimetric_constant_family(
    mu: f64,
    theta_grid: &[f64],
    grid: &QuadratureSpec,
) -> Result<f64> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidParams {
            theta: f64::NAN,
            mu,
        });
    }
    theta_grid.iter().try_fold(f64::INFINITY, |best, &theta| {
        let p = MixtureParams::new(theta, mu)?;
        Ok(best.min(isoperimetric_constant(&p, grid)))
    })
}

/// Weight grid for family constants: `{0.05, 0.1, ..., 0.95}` plus the
/// endpoints of `[η, 1 − η]`, 21 points in all.
pub fn default_theta_grid(eta: f64) -> Vec<f64> {
    let mut grid = vec![eta];
    grid.extend((1..20).map(|k| k as f64 * 0.05));
    grid.push(1.0 - eta);
    grid
}
