//! Posterior-predictive forecasts from the Gaussian conditional of the joint ARFIMA covariance.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::acvf::acvf;
use crate::draws::PosteriorDraws;
use crate::error::{Error, Result};
use crate::params::{ArfimaParams, Series};
use crate::stats::{mean, quantile_linear_sorted, std_dev};
use crate::toeplitz::{sample_continuation, solve};

/// Mean and covariance of the next `b` values given the series.
///
/// With S the (n + b) covariance partitioned into past (1) and future (2) blocks, the mean is
/// S21 S11^-1 y and the covariance S22 - S21 S11^-1 S12. The S11 solves are Toeplitz
/// (Levinson) solves over all right-hand sides at once.
pub fn conditional_predictive(series: &Series, params: &ArfimaParams, b: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if b == 0 {
        return Err(Error::Input("forecast horizon must be at least 1".into()));
    }
    params.validate()?;
    let y = series.values();
    let n = y.len();
    let g = acvf(params, n + b)?.gamma;
    // Column k of S12: cov(y_t, y_{n-1+k}) = gamma(n - 1 + k - t).
    let cols: Vec<Vec<f64>> = (1..=b).map(|k| (0..n).map(|t| g[n - 1 + k - t]).collect()).collect();
    let mut rhs = Vec::with_capacity(b + 1);
    rhs.push(y.to_vec());
    rhs.extend(cols.iter().cloned());
    let sol = solve(&g, &rhs)?;
    let dotv = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let mu: Vec<f64> = cols.iter().map(|c| dotv(c, &sol[0])).collect();
    let cov = DMatrix::from_fn(b, b, |i, j| g[i.abs_diff(j)] - dotv(&cols[i], &sol[j + 1]));
    // Symmetrise rounding noise.
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok((mu, cov))
}

/// One exact draw of the next `b` values given the series.
pub fn sample_forecast_path<R: Rng + ?Sized>(series: &Series, params: &ArfimaParams, b: usize, rng: &mut R) -> Result<Vec<f64>> {
    if b == 0 {
        return Err(Error::Input("forecast horizon must be at least 1".into()));
    }
    let g = acvf(params, series.len() + b)?.gamma;
    sample_continuation(&g, series.values(), b, rng)
}

/// Sampled forecast paths with per-step summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastDraws {
    pub horizon: usize,
    /// One row per posterior draw.
    pub paths: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    /// Empirical 5% and 95% quantiles per step.
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
}

impl ForecastDraws {
    pub fn from_paths(paths: Vec<Vec<f64>>) -> Result<Self> {
        let horizon = paths.first().map(Vec::len).ok_or_else(|| Error::Input("no forecast paths".into()))?;
        let mut out = ForecastDraws { horizon, paths, mean: Vec::new(), sd: Vec::new(), lb: Vec::new(), ub: Vec::new() };
        for k in 0..horizon {
            let mut col: Vec<f64> = out.paths.iter().map(|p| p[k]).collect();
            out.mean.push(mean(&col));
            out.sd.push(if col.len() > 1 { std_dev(&col) } else { 0.0 });
            col.sort_by(f64::total_cmp);
            out.lb.push(quantile_linear_sorted(&col, 0.05));
            out.ub.push(quantile_linear_sorted(&col, 0.95));
        }
        Ok(out)
    }

    /// Fraction of steps whose true value falls inside the 90% interval.
    pub fn coverage(&self, truth: &[f64]) -> f64 {
        let hits = truth.iter().enumerate().filter(|(k, v)| self.lb[*k] <= **v && **v <= self.ub[*k]).count();
        hits as f64 / truth.len() as f64
    }

    /// Root mean squared error of the per-step mean against the truth.
    pub fn rmse(&self, truth: &[f64]) -> f64 {
        (truth.iter().zip(&self.mean).map(|(t, m)| (t - m) * (t - m)).sum::<f64>() / truth.len() as f64).sqrt()
    }
}

/// One forecast path per posterior draw.
pub fn posterior_predictive_paths<R: Rng + ?Sized>(
    series: &Series,
    draws: &PosteriorDraws,
    b: usize,
    rng: &mut R,
) -> Result<ForecastDraws> {
    if draws.is_empty() {
        return Err(Error::Input("no posterior draws to forecast from".into()));
    }
    let paths = draws.draws.iter().map(|p| sample_forecast_path(series, p, b, rng)).collect::<Result<Vec<_>>>()?;
    ForecastDraws::from_paths(paths)
}
