//! Sweep configuration and its flat `key = value` file format.
//!
//! ```text
//! # lines starting with '#' are comments
//! theta0       = 0.5
//! mu_list      = 1, 2, 3, 4
//! n_list       = 10000
//! T_rule       = 2ln(mu)        # or ln(mu^2), or a number
//! replications = 200
//! seed         = 20240917
//! estimators   = ml, sm, ddsm   # also dsm-fixed-t
//! eta          = 0.01
//! output       = sweep.csv
//! dsm_t        = 0.1            # noise level of dsm-fixed-t
//! coarse_grid  = 128
//! bins         = 2048
//! timing       = false          # record wall time per fit
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::contrast::default_horizon;
use crate::error::{Error, Result};
use crate::model::DEFAULT_ETA;

/// How the DDSM horizon `T` is chosen for each `μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HorizonRule {
    Fixed(f64),
    /// `max(1, 2 ln μ)`
    TwoLnMu,
    /// `ln μ²`, unclamped; only valid for `μ > 1`.
    LnMuSquared,
}

impl HorizonRule {
    pub fn horizon(&self, mu: f64) -> f64 {
        match *self {
            HorizonRule::Fixed(t) => t,
            HorizonRule::TwoLnMu => default_horizon(mu),
            HorizonRule::LnMuSquared => (mu * mu).ln(),
        }
    }
}

impl FromStr for HorizonRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2ln(mu)" => Ok(HorizonRule::TwoLnMu),
            "ln(mu^2)" => Ok(HorizonRule::LnMuSquared),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && t.is_finite())
                .map(HorizonRule::Fixed)
                .ok_or_else(|| Error::Config(format!("bad T_rule {other:?}"))),
        }
    }
}

impl fmt::Display for HorizonRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HorizonRule::Fixed(t) => write!(f, "{t}"),
            HorizonRule::TwoLnMu => f.write_str("2ln(mu)"),
            HorizonRule::LnMuSquared => f.write_str("ln(mu^2)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimatorKind {
    Ml,
    Sm,
    Ddsm,
    DsmFixed,
}

impl EstimatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::Ml => "ML",
            EstimatorKind::Sm => "SM",
            EstimatorKind::Ddsm => "DDSM",
            EstimatorKind::DsmFixed => "DSM-fixed-t",
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ml" | "mle" => Ok(EstimatorKind::Ml),
            "sm" => Ok(EstimatorKind::Sm),
            "ddsm" => Ok(EstimatorKind::Ddsm),
            "dsm-fixed-t" | "dsm" => Ok(EstimatorKind::DsmFixed),
            other => Err(Error::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub theta0: f64,
    pub mu_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub horizon: HorizonRule,
    pub replications: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub eta: f64,
    pub output_path: Option<PathBuf>,
    pub dsm_t: f64,
    pub coarse_grid: usize,
    pub bins: usize,
    pub record_timing: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            theta0: 0.5,
            mu_list: vec![1.0, 2.0, 3.0, 4.0],
            n_list: vec![10_000],
            horizon: HorizonRule::TwoLnMu,
            replications: 200,
            seed: 0,
            estimators: vec![EstimatorKind::Ml, EstimatorKind::Sm, EstimatorKind::Ddsm],
            eta: DEFAULT_ETA,
            output_path: None,
            dsm_t: 0.1,
            coarse_grid: 128,
            bins: 2048,
            record_timing: false,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl ExperimentSpec {
    /// Sets one key. Used both by the file parser and for command-line
    /// overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "theta0" => self.theta0 = parse_one(key, value)?,
            "mu_list" => self.mu_list = parse_list(key, value)?,
            "n_list" => self.n_list = parse_list(key, value)?,
            "T_rule" | "t_rule" => self.horizon = value.parse()?,
            "replications" => self.replications = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "estimators" => {
                let mut kinds: Vec<EstimatorKind> = parse_list(key, value)?;
                kinds.sort();
                kinds.dedup();
                self.estimators = kinds;
            }
            "eta" => self.eta = parse_one(key, value)?,
            "output" => self.output_path = Some(PathBuf::from(value.trim())),
            "dsm_t" => self.dsm_t = parse_one(key, value)?,
            "coarse_grid" => self.coarse_grid = parse_one(key, value)?,
            "bins" => self.bins = parse_one(key, value)?,
            "timing" => self.record_timing = parse_one(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = ExperimentSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            spec.set(key, value)?;
        }
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validated(self) -> Result<Self> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return fail(format!("eta must lie in (0, 1/2), got {}", self.eta));
        }
        if !(self.theta0 >= self.eta && self.theta0 <= 1.0 - self.eta) {
            return fail(format!("theta0 = {} outside [eta, 1 - eta]", self.theta0));
        }
        if self.replications == 0 {
            return fail("replications must be at least 1".into());
        }
        if self.mu_list.is_empty() || self.mu_list.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return fail(format!(
                "mu_list must be nonempty and positive: {:?}",
                self.mu_list
            ));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return fail(format!(
                "n_list must be nonempty and positive: {:?}",
                self.n_list
            ));
        }
        if self.estimators.is_empty() {
            return fail("no estimators requested".into());
        }
        if self.estimators.contains(&EstimatorKind::Ddsm) {
            for &mu in &self.mu_list {
                let t = self.horizon.horizon(mu);
                if !(t > 0.0) {
                    return fail(format!(
                        "T_rule {} gives T = {t} at mu = {mu}",
                        self.horizon
                    ));
                }
            }
        }
        if !(self.dsm_t > 0.0) {
            return fail(format!("dsm_t must be positive, got {}", self.dsm_t));
        }
        if self.coarse_grid < 64 || self.bins < 256 {
            return fail(format!(
                "coarse_grid >= 64 and bins >= 256 required, got {} and {}",
                self.coarse_grid, self.bins
            ));
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = "\
# headline sweep
theta0 = 0.5
mu_list = 1, 2, 3, 4
n_list = 10000
T_rule = 2ln(mu)
replications = 200
seed = 7
estimators = ddsm, sm, ml
eta = 0.01
output = out/sweep.csv   # relative to cwd
";
        let spec = ExperimentSpec::parse(text).unwrap().validated().unwrap();
        assert_eq!(spec.mu_list, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            spec.estimators,
            vec![EstimatorKind::Ml, EstimatorKind::Sm, EstimatorKind::Ddsm]
        );
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.output_path, Some(PathBuf::from("out/sweep.csv")));
        assert_eq!(spec.horizon, HorizonRule::TwoLnMu);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentSpec::parse("bogus = 1").is_err());
        assert!(ExperimentSpec::parse("theta0 0.5").is_err());
        assert!(ExperimentSpec::parse("mu_list = 1, x").is_err());
        assert!(ExperimentSpec::parse("estimators = em").is_err());
        let spec = ExperimentSpec::parse("replications = 0").unwrap();
        assert!(spec.validated().is_err());
        let spec = ExperimentSpec::parse("theta0 = 0.999").unwrap();
        assert!(spec.validated().is_err());
        let spec = ExperimentSpec::parse("T_rule = ln(mu^2)\nmu_list = 0.5").unwrap();
        assert!(spec.validated().is_err());
    }

    #[test]
    fn horizon_rules() {
        assert_eq!(HorizonRule::TwoLnMu.horizon(1.0), 1.0);
        assert!((HorizonRule::TwoLnMu.horizon(4.0) - 2.0 * 4f64.ln()).abs() < 1e-15);
        assert!((HorizonRule::LnMuSquared.horizon(3.0) - 9f64.ln()).abs() < 1e-15);
        assert_eq!(
            "2.5".parse::<HorizonRule>().unwrap(),
            HorizonRule::Fixed(2.5)
        );
        assert!("-1".parse::<HorizonRule>().is_err());
    }
}
