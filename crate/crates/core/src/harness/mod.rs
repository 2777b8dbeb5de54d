//! Experiment runner: Monte Carlo sweeps, loss landscapes, isoperimetric
//! tables and bound verification, each written as CSV.

mod config;
mod reports;
mod sweep;

use std::fs::File;
use std::path::Path;

pub use config::{EstimatorKind, ExperimentSpec, HorizonRule};
pub use reports::{
    run_isoperimetric, run_landscape, run_verify_bounds, IsoperimetricRow, LandscapeSpec,
    LandscapeSummary, VerifySummary,
};
pub use sweep::{
    run_sweep, run_sweep_to_file, run_sweep_with, write_sweep_csv, ExperimentRow, MixtureSampler,
    Sampler, SWEEP_HEADER,
};

use crate::contrast::{ContrastEvaluator, NoiseSchedule};
use crate::error::{Error, Result};
use crate::estimator::{minimize, EstimationResult, OptimizerSpec};
use crate::model::ParamSpace;

/// Floats in CSV output: 17 significant digits, round-trippable.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))
}

/// Reads a single-column CSV of observations with header `x`.
pub fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let headers = reader.headers().map_err(|e| Error::csv(path, e))?.clone();
    if headers.len() != 1 || headers.get(0).map(str::trim) != Some("x") {
        return Err(Error::Config(format!(
            "{}: expected a single column with header `x`",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::csv(path, e))?;
        let field = record.get(0).unwrap_or("").trim();
        let x: f64 = field.parse().map_err(|_| {
            Error::Config(format!(
                "{}: row {}: not a number: {field:?}",
                path.display(),
                i + 2
            ))
        })?;
        if !x.is_finite() {
            return Err(Error::Config(format!(
                "{}: row {}: non-finite value",
                path.display(),
                i + 2
            )));
        }
        out.push(x);
    }
    if out.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(out)
}

/// Contrast for one estimator kind at separation `mu`.
pub fn evaluator(
    kind: EstimatorKind,
    mu: f64,
    horizon: f64,
    dsm_t: f64,
) -> Result<ContrastEvaluator> {
    match kind {
        EstimatorKind::Ml => ContrastEvaluator::ml(mu),
        EstimatorKind::Sm => ContrastEvaluator::sm(mu),
        EstimatorKind::Ddsm => ContrastEvaluator::ddsm(mu, NoiseSchedule::with_horizon(horizon)?),
        EstimatorKind::DsmFixed => {
            ContrastEvaluator::dsm_fixed(mu, dsm_t, crate::contrast::DEFAULT_SPACE_NODES)
        }
    }
}

/// Fits one estimator to `data`.
pub fn estimate(
    kind: EstimatorKind,
    data: &[f64],
    mu: f64,
    horizon: f64,
    dsm_t: f64,
    eta: f64,
    opt: &OptimizerSpec,
) -> Result<EstimationResult> {
    let ev = evaluator(kind, mu, horizon, dsm_t)?;
    minimize(&ev, data, opt, &ParamSpace::new(eta)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &v in &[0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn sample_file_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.csv");
        std::fs::write(&good, "x\n0.5\n-1.25\n3\n").unwrap();
        assert_eq!(read_samples(&good).unwrap(), vec![0.5, -1.25, 3.0]);
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "y\n0.5\n").unwrap();
        assert!(matches!(read_samples(&bad), Err(Error::Config(_))));
        std::fs::write(&bad, "x\nabc\n").unwrap();
        assert!(matches!(read_samples(&bad), Err(Error::Config(_))));
        std::fs::write(&bad, "x\n").unwrap();
        assert!(matches!(read_samples(&bad), Err(Error::EmptyData)));
        assert!(read_samples(&dir.path().join("missing.csv")).is_err());
    }
}
