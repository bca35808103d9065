//! Gaussian ARFIMA likelihood, the sigma2-integrated posterior and the sigma2 full conditional.
//!
//! The series is modelled as y ~ N(0, sigma2 * S) where S is the Toeplitz matrix of the
//! unit-innovation ACVF. With the conjugate prior sigma2 ~ IG(alpha, beta) and uniform priors on
//! (d, phi, theta), integrating sigma2 out gives
//! `pi(d, phi, theta | y) ∝ |S|^(-1/2) (y' S^-1 y + 2 beta)^(-n/2 - alpha)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::acvf::{acvf, convolution_unit};
use crate::error::{Error, Result};
use crate::params::{ArfimaParams, Series, ARMA_BOUNDS, D_BOUNDS};
use crate::stats::sample_inverse_gamma;
use crate::toeplitz::{innovations, Innovations};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Priors: uniform on (d, phi, theta) over their boxes, inverse-gamma on sigma2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub alpha: f64,
    pub beta: f64,
    pub d_bounds: (f64, f64),
    pub phi_bounds: (f64, f64),
    pub theta_bounds: (f64, f64),
}

impl Priors {
    /// Inverse-gamma hyperparameters with the default stationarity box.
    pub fn inverse_gamma(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::Domain(format!(
                "inverse-gamma hyperparameters must be positive (alpha={alpha}, beta={beta})"
            )));
        }
        Ok(Priors { alpha, beta, d_bounds: D_BOUNDS, phi_bounds: ARMA_BOUNDS, theta_bounds: ARMA_BOUNDS })
    }

    /// Simulation-study setting: IG(28, 30), centred near 1.
    pub fn study() -> Self {
        Self::inverse_gamma(28.0, 30.0).expect("valid constants")
    }

    /// Setting used for the quarterly GNP log-returns: IG(33, 45).
    pub fn gnp() -> Self {
        Self::inverse_gamma(33.0, 45.0).expect("valid constants")
    }

    pub fn contains(&self, d: f64, phi: Option<f64>, theta: Option<f64>) -> bool {
        let inside = |x: f64, (lo, hi): (f64, f64)| x > lo && x < hi;
        inside(d, self.d_bounds)
            && phi.is_none_or(|p| inside(p, self.phi_bounds))
            && theta.is_none_or(|t| inside(t, self.theta_bounds))
    }
}

impl Default for Priors {
    fn default() -> Self {
        Self::study()
    }
}

/// Log-density (up to an additive constant) at a (d, phi, theta) point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPosteriorValue {
    pub value: f64,
    pub d: f64,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
}

/// Log N(y; 0, Toeplitz(gamma)) from an innovations pass.
fn gaussian_log_density(inn: &Innovations, n: usize) -> f64 {
    -0.5 * (n as f64 * LN_2PI + inn.log_det + inn.quad_form)
}

fn require_demeaned(series: &Series) -> Result<()> {
    if series.is_demeaned() {
        Ok(())
    } else {
        Err(Error::Input("series must be demeaned".into()))
    }
}

/// Innovations of `y` under the unit-innovation ARFIMA covariance at (d, phi, theta).
pub(crate) fn unit_innovations(y: &[f64], d: f64, phi: f64, theta: f64) -> Result<Innovations> {
    let gamma = convolution_unit(d, phi, theta, y.len());
    innovations(&gamma, y)
}

/// Exact Gaussian log-likelihood via the Durbin-Levinson recursion, O(n^2).
pub fn log_likelihood(series: &Series, params: &ArfimaParams) -> Result<f64> {
    require_demeaned(series)?;
    params.validate()?;
    let gamma = acvf(params, series.len())?;
    let inn = innovations(&gamma.gamma, series.values())?;
    Ok(gaussian_log_density(&inn, series.len()))
}

/// Reference log-likelihood through a dense Cholesky factorisation, O(n^3).
pub fn log_likelihood_dense(series: &Series, params: &ArfimaParams) -> Result<f64> {
    params.validate()?;
    let n = series.len();
    let cov = acvf(params, n)?.toeplitz(n);
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::Numerical("covariance is not positive definite".into()))?;
    let y = nalgebra::DVector::from_column_slice(series.values());
    let log_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let quad = y.dot(&chol.solve(&y));
    Ok(-0.5 * (n as f64 * LN_2PI + log_det + quad))
}

/// Integrated posterior in closed form from an innovations pass of the unit covariance.
pub(crate) fn integrated_from(inn: &Innovations, n: usize, priors: &Priors) -> f64 {
    -0.5 * inn.log_det - (n as f64 / 2.0 + priors.alpha) * (inn.quad_form + 2.0 * priors.beta).ln()
}

/// log pi(d, phi, theta | y) up to a constant; -inf outside the prior support.
pub fn log_integrated_posterior(
    series: &Series,
    d: f64,
    phi: Option<f64>,
    theta: Option<f64>,
    priors: &Priors,
) -> LogPosteriorValue {
    let value = if !priors.contains(d, phi, theta) {
        f64::NEG_INFINITY
    } else {
        match unit_innovations(series.values(), d, phi.unwrap_or(0.0), theta.unwrap_or(0.0)) {
            Ok(inn) => integrated_from(&inn, series.len(), priors),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    LogPosteriorValue { value, d, phi, theta }
}

/// Inverse-gamma full-conditional parameters (shape, scale) of sigma2 given a quadratic form.
pub(crate) fn sigma2_conditional_params(quad_form: f64, n: usize, priors: &Priors) -> (f64, f64) {
    (n as f64 / 2.0 + priors.alpha, 0.5 * (quad_form + 2.0 * priors.beta))
}

/// Draw sigma2 ~ IG(n/2 + alpha, (y' S^-1 y + 2 beta) / 2).
pub fn sample_sigma2_conditional<R: Rng + ?Sized>(
    series: &Series,
    d: f64,
    phi: Option<f64>,
    theta: Option<f64>,
    priors: &Priors,
    rng: &mut R,
) -> Result<f64> {
    let inn = unit_innovations(series.values(), d, phi.unwrap_or(0.0), theta.unwrap_or(0.0))?;
    let (shape, scale) = sigma2_conditional_params(inn.quad_form, series.len(), priors);
    Ok(sample_inverse_gamma(shape, scale, rng))
}

/// Integrated log-posterior over a (d, phi) grid at fixed theta; rows follow `d_grid`.
pub fn log_posterior_grid(
    series: &Series,
    d_grid: &[f64],
    phi_grid: &[f64],
    theta_fixed: Option<f64>,
    priors: &Priors,
) -> Vec<Vec<f64>> {
    d_grid
        .iter()
        .map(|&d| {
            phi_grid
                .iter()
                .map(|&phi| log_integrated_posterior(series, d, Some(phi), theta_fixed, priors).value)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::simulate_arfima;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_zero_observation() {
        // One observation of white noise: -0.5 log(2 pi). The Series type needs n >= 2, so
        // check through the innovations directly.
        let inn = innovations(&[1.0], &[0.0]).unwrap();
        assert!((gaussian_log_density(&inn, 1) + 0.5 * LN_2PI).abs() < 1e-15);
    }

    #[test]
    fn durbin_levinson_matches_dense() {
        let p = ArfimaParams::new(0.35, Some(0.4), Some(-0.3), 1.4).unwrap();
        let y = simulate_arfima(&p, 64, 3).unwrap();
        let a = log_likelihood(&y, &p).unwrap();
        let b = log_likelihood_dense(&y, &p).unwrap();
        assert!((a - b).abs() < 1e-10 * b.abs());
    }

    #[test]
    fn sigma2_profile_identity() {
        let p = ArfimaParams::new(0.2, Some(0.3), None, 1.0).unwrap();
        let y = simulate_arfima(&p, 100, 4).unwrap();
        let l1 = log_likelihood(&y, &p).unwrap();
        let l2 = log_likelihood(&y, &p.with_sigma2(2.0)).unwrap();
        let inn = unit_innovations(y.values(), 0.2, 0.3, 0.0).unwrap();
        let n = 100.0;
        // Doubling sigma2 from 1: -(n/2) ln 2 + Q (1/2 - 1/4).
        let expect = -(n / 2.0) * 2f64.ln() + inn.quad_form * (1.0 / 2.0 - 1.0 / 4.0);
        assert!((l2 - l1 - expect).abs() < 1e-12 * l1.abs(), "{} vs {expect}", l2 - l1);
    }

    #[test]
    fn out_of_support_is_neg_infinity() {
        let y = simulate_arfima(&ArfimaParams::white_noise(1.0), 20, 1).unwrap();
        let pr = Priors::study();
        assert_eq!(log_integrated_posterior(&y, 0.6, None, None, &pr).value, f64::NEG_INFINITY);
        assert_eq!(log_integrated_posterior(&y, 0.1, Some(1.2), None, &pr).value, f64::NEG_INFINITY);
        let v = log_integrated_posterior(&y, 0.1, Some(0.2), None, &pr).value;
        assert!(v.is_finite());
        assert_eq!(v, log_integrated_posterior(&y, 0.1, Some(0.2), None, &pr).value);
    }

    #[test]
    fn sigma2_conditional_mean() {
        let y = simulate_arfima(&ArfimaParams::white_noise(1.0), 50, 9).unwrap();
        let pr = Priors::study();
        let yy: f64 = y.values().iter().map(|v| v * v).sum();
        let analytic = (yy / 2.0 + pr.beta) / (25.0 + pr.alpha - 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws: Vec<f64> = (0..100_000)
            .map(|_| sample_sigma2_conditional(&y, 0.0, None, None, &pr, &mut rng).unwrap())
            .collect();
        let m = crate::stats::mean(&draws);
        assert!((m - analytic).abs() / analytic < 0.01);
    }

    #[test]
    fn prior_dominance_concentrates() {
        let y = simulate_arfima(&ArfimaParams::white_noise(1.0), 50, 9).unwrap();
        let s2 = 2.5;
        let pr = Priors::inverse_gamma(1e7, 1e7 * s2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let v = sample_sigma2_conditional(&y, 0.0, None, None, &pr, &mut rng).unwrap();
            assert!((v - s2).abs() < 0.01);
        }
    }

    #[test]
    fn grid_single_cell_and_shift_invariance() {
        let p = ArfimaParams::new(0.2, Some(0.5), Some(0.5), 1.0).unwrap();
        let y = simulate_arfima(&p, 120, 5).unwrap();
        let pr = Priors::study();
        let g = log_posterior_grid(&y, &[0.1], &[0.4], Some(0.5), &pr);
        assert_eq!(g[0][0], log_integrated_posterior(&y, 0.1, Some(0.4), Some(0.5), &pr).value);
        let grid = log_posterior_grid(&y, &[0.0, 0.1, 0.2], &[0.3, 0.5, 0.7], Some(0.5), &pr);
        let argmax = |g: &Vec<Vec<f64>>| {
            let mut best = (0, 0, f64::NEG_INFINITY);
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if *v > best.2 {
                        best = (i, j, *v);
                    }
                }
            }
            (best.0, best.1)
        };
        let shifted: Vec<Vec<f64>> = grid.iter().map(|r| r.iter().map(|v| v + 123.0).collect()).collect();
        assert_eq!(argmax(&grid), argmax(&shifted));
    }
}
