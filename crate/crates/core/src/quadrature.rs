//! Quadrature rules for integrals over the real line and over `[0, T]`.
//!
//! Integrals against mixture densities are truncated to `[-μ - h, μ + h]` where
//! `h` is the truncation half-width in standard-deviation units. The default
//! `h = 12` leaves out less than `1e-30` of Gaussian mass.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{GaussHermite, GaussLegendre};

use crate::error::{Error, Result};
use crate::model::MixtureParams;

/// Default truncation half-width, in σ units.
pub const DEFAULT_TRUNCATION: f64 = 12.0;

/// Panel order of the composite Gauss–Legendre rule.
const PANEL_ORDER: usize = 16;

/// A Gauss rule stored as sorted `(node, weight)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Rule { nodes, weights }
    }

    /// Gauss–Legendre rule on `[-1, 1]`.
    pub fn legendre(n: usize) -> Self {
        let n = NonZeroUsize::new(n).expect("rule order must be positive");
        Self::from_pairs(GaussLegendre::new(n).as_node_weight_pairs().to_vec())
    }

    /// Gauss–Legendre rule mapped to `[a, b]`.
    pub fn legendre_on(n: usize, a: f64, b: f64) -> Self {
        let base = Self::legendre(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: base.weights.iter().map(|&w| half * w).collect(),
        }
    }

    /// Gauss–Hermite rule rescaled to expectations under N(0, 1):
    /// `E[f(Z)] ≈ Σ wₖ f(zₖ)`, with `Σ wₖ = 1`.
    pub fn standard_normal(n: usize) -> Self {
        let n = NonZeroUsize::new(n).expect("rule order must be positive");
        let scale = std::f64::consts::SQRT_2;
        let norm = std::f64::consts::PI.sqrt();
        let pairs = GaussHermite::new(n)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (scale * x, w / norm))
            .collect();
        Self::from_pairs(pairs)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

fn panel_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::legendre(PANEL_ORDER))
}

fn gl_panel<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * panel_rule().apply(|x| f(mid + half * x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureMethod {
    /// Composite Gauss–Legendre with 16-point panels; `nodes` is the total
    /// number of nodes (rounded up to a multiple of 16).
    GaussLegendre,
    /// Bisection-refined Gauss–Legendre, stopping when a panel and its two
    /// halves agree to `tol` (absolute, apportioned by panel width).
    Adaptive { tol: f64, max_panels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub nodes: usize,
    pub truncation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: QuadratureMethod::GaussLegendre,
            nodes: 4096,
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

impl QuadratureSpec {
    pub fn gauss_legendre(nodes: usize) -> Result<Self> {
        Self {
            nodes,
            ..Self::default()
        }
        .validated()
    }

    pub fn adaptive(tol: f64) -> Result<Self> {
        Self {
            method: QuadratureMethod::Adaptive {
                tol,
                max_panels: 1 << 16,
            },
            ..Self::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.nodes < 16 {
            return Err(Error::InvalidQuadrature(format!(
                "need at least 16 nodes, got {}",
                self.nodes
            )));
        }
        if !(self.truncation >= 10.0) {
            return Err(Error::InvalidQuadrature(format!(
                "truncation must be at least 10 sigma, got {}",
                self.truncation
            )));
        }
        if let QuadratureMethod::Adaptive { tol, max_panels } = self.method {
            if !(tol > 0.0) || max_panels == 0 {
                return Err(Error::InvalidQuadrature(format!(
                    "adaptive tolerance {tol} / panel budget {max_panels}"
                )));
            }
        }
        Ok(self)
    }

    /// The truncated integration range for a mixture with location `mu`.
    pub fn range(&self, mu: f64) -> (f64, f64) {
        (-mu - self.truncation, mu + self.truncation)
    }

    /// ∫ₐᵇ f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        match self.method {
            QuadratureMethod::GaussLegendre => {
                let panels = self.nodes.div_ceil(PANEL_ORDER);
                let h = (b - a) / panels as f64;
                Ok((0..panels)
                    .map(|k| {
                        let lo = a + k as f64 * h;
                        let hi = if k + 1 == panels { b } else { lo + h };
                        gl_panel(lo, hi, &mut f)
                    })
                    .sum())
            }
            QuadratureMethod::Adaptive { tol, max_panels } => adaptive(
                a,
                b,
                tol,
                max_panels,
                self.nodes.div_ceil(PANEL_ORDER),
                &mut f,
            ),
        }
    }

    /// E_p[f(X)] over the truncated range.
    pub fn expect<F: FnMut(f64) -> f64>(&self, p: &MixtureParams, mut f: F) -> Result<f64> {
        let (a, b) = self.range(p.mu());
        self.integrate(a, b, |x| {
            let d = p.density(x);
            if d == 0.0 {
                0.0
            } else {
                d * f(x)
            }
        })
    }
}

fn adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
    initial: usize,
    f: &mut F,
) -> Result<f64> {
    let width = b - a;
    let initial = initial.max(1);
    let h = width / initial as f64;
    let mut stack: Vec<(f64, f64, f64)> = (0..initial)
        .rev()
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == initial { b } else { lo + h };
            (lo, hi, 0.0)
        })
        .collect();
    for item in stack.iter_mut() {
        item.2 = gl_panel(item.0, item.1, f);
    }

    let mut total = 0.0;
    let mut worst = 0.0_f64;
    let mut panels = initial;
    let mut converged = true;
    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl_panel(lo, mid, f);
        let right = gl_panel(mid, hi, f);
        let fine = left + right;
        let err = (fine - coarse).abs();
        let budget = tol * (hi - lo) / width;
        if err <= budget || hi - lo < 1e-12 * width {
            total += fine;
            continue;
        }
        if panels >= max_panels {
            converged = false;
            worst = worst.max(err);
            total += fine;
            continue;
        }
        panels += 1;
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    if converged {
        Ok(total)
    } else {
        Err(Error::QuadratureNotConverged {
            achieved: worst,
            requested: tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_even_moments_exactly() {
        let rule = Rule::standard_normal(64);
        assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        assert!((rule.apply(|z| z * z) - 1.0).abs() < 1e-12);
        assert!((rule.apply(|z| z.powi(4)) - 3.0).abs() < 1e-11);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn legendre_weights_sum_to_interval_length() {
        let rule = Rule::legendre_on(32, 0.0, 3.5);
        assert!((rule.weights().iter().sum::<f64>() - 3.5).abs() < 1e-13);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn composite_and_adaptive_agree() {
        let f = |x: f64| (-x * x).exp() * (3.0 * x).cos();
        let exact = std::f64::consts::PI.sqrt() * (-9.0f64 / 4.0).exp();
        let gl = QuadratureSpec::default().integrate(-12.0, 12.0, f).unwrap();
        let ad = QuadratureSpec::adaptive(1e-13)
            .unwrap()
            .integrate(-12.0, 12.0, f)
            .unwrap();
        assert!((gl - exact).abs() < 1e-14);
        assert!((ad - exact).abs() < 1e-13);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let spec = QuadratureSpec {
            method: QuadratureMethod::Adaptive {
                tol: 1e-15,
                max_panels: 4,
            },
            ..QuadratureSpec::default()
        };
        // a kink resists polynomial refinement
        match spec.integrate(-1.0, 1.3, |x| x.abs().sqrt()) {
            Err(Error::QuadratureNotConverged {
                achieved,
                requested,
            }) => {
                assert!(achieved > requested);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::gauss_legendre(8).is_err());
        let bad = QuadratureSpec {
            truncation: 5.0,
            ..QuadratureSpec::default()
        };
        assert!(bad.validated().is_err());
    }
}
