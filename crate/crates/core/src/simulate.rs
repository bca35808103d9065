//! Gaussian ARFIMA series simulation.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::acvf::acvf;
use crate::error::{Error, Result};
use crate::params::{ArfimaParams, Series};
use crate::stats::standard_normal;
use crate::toeplitz::predictor_rows;

/// Draw a length-`n` series from N(0, Toeplitz(gamma)) as `L z`, with `L` the lower Cholesky
/// factor of the exact covariance. Deterministic in `seed`.
pub fn simulate_arfima(params: &ArfimaParams, n: usize, seed: u64) -> Result<Series> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_arfima_with_rng(params, n, &mut rng)
}

pub fn simulate_arfima_with_rng<R: Rng + ?Sized>(
    params: &ArfimaParams,
    n: usize,
    rng: &mut R,
) -> Result<Series> {
    if n < 2 {
        return Err(Error::Input(format!("series length must be at least 2, got {n}")));
    }
    let gamma = acvf(params, n)?;
    let cov = gamma.toeplitz(n);
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::Numerical("Cholesky factorisation of the ARFIMA covariance failed".into()))?;
    let z = DVector::from_iterator(n, (0..n).map(|_| standard_normal(rng)));
    let l: DMatrix<f64> = chol.l();
    let y = l * z;
    Ok(Series::from_zero_mean(y.iter().copied().collect()))
}

/// Exact simulation via the Durbin-Levinson predictor: y_t = yhat_t + sqrt(v_t) z_t.
pub(crate) fn simulate_innovations<R: Rng + ?Sized>(gamma: &[f64], n: usize, rng: &mut R) -> Result<Vec<f64>> {
    let (rows, vars) = predictor_rows(gamma, n)?;
    let mut y = Vec::with_capacity(n);
    for t in 0..n {
        let pred: f64 = rows[t].iter().enumerate().map(|(j, c)| c * y[t - 1 - j]).sum();
        y.push(pred + vars[t].sqrt() * standard_normal(rng));
    }
    Ok(y)
}

/// Fast exact simulator by circulant embedding of the Toeplitz covariance (Davies-Harte).
///
/// Costs two FFTs of length 2n per series. When the embedding has a materially negative
/// eigenvalue it falls back to the O(n^2) innovations simulator, so the output always has the
/// exact ARFIMA covariance.
pub struct CirculantSimulator {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
    eig: Vec<f64>,
    fallbacks: usize,
}

impl std::fmt::Debug for CirculantSimulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSimulator").field("n", &self.n).field("fallbacks", &self.fallbacks).finish()
    }
}

impl CirculantSimulator {
    pub fn new(n: usize) -> Self {
        let m = 2 * n;
        let fft = FftPlanner::new().plan_fft_forward(m);
        CirculantSimulator { n, fft, buf: vec![Complex::new(0.0, 0.0); m], eig: vec![0.0; m], fallbacks: 0 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// How many draws needed the innovations fallback.
    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }

    pub fn simulate<R: Rng + ?Sized>(&mut self, params: &ArfimaParams, rng: &mut R) -> Result<Vec<f64>> {
        let n = self.n;
        let m = 2 * n;
        let gamma = acvf(params, n + 1)?.gamma;
        for (k, slot) in self.buf.iter_mut().enumerate() {
            let lag = if k <= n { k } else { m - k };
            *slot = Complex::new(gamma[lag], 0.0);
        }
        self.fft.process(&mut self.buf);
        let max = self.buf.iter().fold(0.0f64, |a, c| a.max(c.re));
        let mut ok = true;
        for (e, c) in self.eig.iter_mut().zip(&self.buf) {
            if c.re < -1e-10 * max {
                ok = false;
                break;
            }
            *e = c.re.max(0.0);
        }
        if !ok {
            self.fallbacks += 1;
            return simulate_innovations(&gamma, n, rng);
        }
        let scale = 1.0 / m as f64;
        for (slot, e) in self.buf.iter_mut().zip(&self.eig) {
            let s = (e * scale).sqrt();
            let re = standard_normal(rng);
            let im = standard_normal(rng);
            *slot = Complex::new(s * re, s * im);
        }
        self.fft.process(&mut self.buf);
        Ok(self.buf[..n].iter().map(|c| c.re).collect())
    }
}
