//! Autocovariance functions of ARFIMA(p, d, q) processes with p, q <= 1.
//!
//! Sign convention throughout: the AR polynomial is `1 - phi B` and the MA polynomial is
//! `1 + theta B`, so `(1 - phi B)(1 - B)^d y_t = (1 + theta B) e_t`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::{ArfimaParams, D_BOUNDS};

/// Which route produced an autocovariance vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcvfMethod {
    ExactHypergeometric,
    Convolution,
    Arfima0d0,
    Arma11,
}

/// Autocovariances gamma(0..L-1) defining a symmetric Toeplitz covariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcvfVector {
    pub gamma: Vec<f64>,
    pub method: AcvfMethod,
}

impl AcvfVector {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Autocorrelations gamma(h) / gamma(0).
    pub fn acf(&self) -> Vec<f64> {
        let g0 = self.gamma[0];
        self.gamma.iter().map(|g| g / g0).collect()
    }

    /// Dense n x n Toeplitz matrix built from the first `n` lags.
    pub fn toeplitz(&self, n: usize) -> DMatrix<f64> {
        assert!(n <= self.len(), "toeplitz({n}) needs {n} lags, have {}", self.len());
        DMatrix::from_fn(n, n, |i, j| self.gamma[i.abs_diff(j)])
    }
}

fn check_d(d: f64) -> Result<()> {
    if d > D_BOUNDS.0 && d < D_BOUNDS.1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("d = {d} outside (-0.5, 0.5)")))
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 {
        Err(Error::Domain("autocovariance length must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Variance of a unit-innovation ARFIMA(0,d,0): Gamma(1-2d) / Gamma(1-d)^2.
fn fractional_noise_variance(d: f64) -> f64 {
    (ln_gamma(1.0 - 2.0 * d) - 2.0 * ln_gamma(1.0 - d)).exp()
}

/// Unit-variance-innovation fractional noise ACVF for lags 0..len-1, via the gamma ratio recursion
/// gamma(h) = gamma(h-1) (h-1+d) / (h-d).
fn fractional_noise_unit(d: f64, len: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(len);
    g.push(fractional_noise_variance(d));
    for h in 1..len {
        let hf = h as f64;
        let prev = g[h - 1];
        g.push(prev * (hf - 1.0 + d) / (hf - d));
    }
    g
}

/// ACVF of ARFIMA(0,d,0) for lags 0..len-1.
pub fn acvf_arfima0d0(d: f64, sigma2: f64, len: usize) -> Result<AcvfVector> {
    check_d(d)?;
    check_len(len)?;
    if !(sigma2 > 0.0) {
        return Err(Error::Domain(format!("sigma2 = {sigma2} must be positive")));
    }
    let gamma = if d == 0.0 {
        // Gamma(d) pole: the white-noise limit.
        let mut g = vec![0.0; len];
        g[0] = sigma2;
        g
    } else {
        fractional_noise_unit(d, len).into_iter().map(|g| g * sigma2).collect()
    };
    Ok(AcvfVector { gamma, method: AcvfMethod::Arfima0d0 })
}

/// Unit-innovation ARMA(1,1) autocovariances at lags 0 and 1.
fn arma11_head(phi: f64, theta: f64) -> (f64, f64) {
    let denom = 1.0 - phi * phi;
    (
        (1.0 + 2.0 * phi * theta + theta * theta) / denom,
        (1.0 + phi * theta) * (phi + theta) / denom,
    )
}

/// ACVF of ARMA(1,1) for lags 0..len-1.
pub fn acvf_arma11(phi: f64, theta: f64, sigma2: f64, len: usize) -> Result<AcvfVector> {
    if !(phi.abs() < 1.0) {
        return Err(Error::Domain(format!("|phi| = {} must be < 1", phi.abs())));
    }
    if !(theta.abs() < 1.0) {
        return Err(Error::Domain(format!("|theta| = {} must be < 1", theta.abs())));
    }
    check_len(len)?;
    let (g0, g1) = arma11_head(phi, theta);
    let mut gamma = Vec::with_capacity(len);
    gamma.push(sigma2 * g0);
    if len > 1 {
        gamma.push(sigma2 * g1);
    }
    for h in 2..len {
        let prev = gamma[h - 1];
        gamma.push(phi * prev);
    }
    Ok(AcvfVector { gamma, method: AcvfMethod::Arma11 })
}

const HYPERGEOMETRIC_TOL: f64 = 1e-12;
const HYPERGEOMETRIC_MAX_TERMS: usize = 100_000;

/// Gauss hypergeometric function F(a, b; c; x) by its power series, |x| < 1.
pub fn hypergeometric_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("hypergeometric series needs |x| < 1, got {x}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    // Past this index every ratio (a+k)(b+k)/((c+k)(1+k)) is monotone towards 1.
    let settle = (a.abs().max(b.abs()).max(c.abs()) + 2.0).ceil() as usize;
    for k in 0..HYPERGEOMETRIC_MAX_TERMS {
        let kf = k as f64;
        let denom = (c + kf) * (kf + 1.0);
        if denom == 0.0 {
            return Err(Error::Numerical(format!("hypergeometric pole at c = {c}")));
        }
        term *= (a + kf) * (b + kf) / denom * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if k >= settle {
            let ratio = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * x).abs();
            if ratio < 1.0 && term.abs() / (1.0 - ratio) <= HYPERGEOMETRIC_TOL * sum.abs() {
                return Ok(sum);
            }
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::Numerical(format!(
        "hypergeometric series F({a}, {b}; {c}; {x}) did not converge"
    )))
}

/// Exact ARFIMA(1,d,1) ACVF via Gauss hypergeometric functions.
///
/// With the `1 - phi B` convention the closed form reads
/// `gamma(h) = sigma2 / (phi (1 - phi^2)) [theta C(-h) + theta C(2-h) + (1 + theta^2) C(1-h)]`,
/// `C(h) = g0(h) [phi^2 F(d+h, 1; 1-d+h; phi) + F(d-h, 1; 1-d-h; phi) - 1]`,
/// where `g0` is the unit fractional-noise ACVF. The prefactor is singular at phi = 0,
/// so that case is rejected and callers use [`acvf_convolution`].
pub fn acvf_arfima_exact(params: &ArfimaParams, len: usize) -> Result<AcvfVector> {
    params.validate()?;
    check_len(len)?;
    let phi = params.phi_or_zero();
    let theta = params.theta_or_zero();
    if phi == 0.0 {
        return Err(Error::Domain(
            "exact ACVF is singular at phi = 0; use the convolution route".into(),
        ));
    }
    let d = params.d;
    if d == 0.0 {
        let mut v = acvf_arma11(phi, theta, params.sigma2, len)?;
        v.method = AcvfMethod::ExactHypergeometric;
        return Ok(v);
    }
    let g0 = fractional_noise_unit(d, len + 2);
    let unit_g0 = |h: i64| g0[h.unsigned_abs() as usize];
    let c_fn = |h: i64| -> Result<f64> {
        let hf = h as f64;
        let f1 = hypergeometric_2f1(d + hf, 1.0, 1.0 - d + hf, phi)?;
        let f2 = hypergeometric_2f1(d - hf, 1.0, 1.0 - d - hf, phi)?;
        Ok(unit_g0(h) * (phi * phi * f1 + f2 - 1.0))
    };
    let pref = params.sigma2 / (phi * (1.0 - phi * phi));
    let mut gamma = Vec::with_capacity(len);
    for h in 0..len as i64 {
        let v = theta * c_fn(-h)? + theta * c_fn(2 - h)? + (1.0 + theta * theta) * c_fn(1 - h)?;
        gamma.push(pref * v);
    }
    Ok(AcvfVector { gamma, method: AcvfMethod::ExactHypergeometric })
}

/// Number of geometric terms after which |phi|^m / (1 - |phi|) drops below 1e-17.
fn geometric_truncation(phi: f64) -> usize {
    let a = phi.abs();
    if a == 0.0 {
        return 1;
    }
    let target = 1e-17 * (1.0 - a);
    ((target.ln() / a.ln()).ceil() as usize).max(1)
}

/// ARFIMA ACVF as the convolution of the ARMA(1,1) autocovariance structure with the
/// fractional-noise ACVF: `gamma(h) = sum_m r(m) g0(h - m)` where `r` is the unit ARMA ACVF.
///
/// Because `r(m) = phi^(|m|-1) r(1)` for |m| >= 1, both one-sided sums obey first-order
/// recursions, so all `len` lags cost O(len + K) with K the geometric truncation length
/// (|phi|^K below 1e-17, equivalent to truncating the MA(inf) weights below 1e-14).
pub fn acvf_convolution(params: &ArfimaParams, len: usize) -> Result<AcvfVector> {
    params.validate()?;
    check_len(len)?;
    let gamma = convolution_unit(params.d, params.phi_or_zero(), params.theta_or_zero(), len)
        .into_iter()
        .map(|g| g * params.sigma2)
        .collect();
    Ok(AcvfVector { gamma, method: AcvfMethod::Convolution })
}

pub(crate) fn convolution_unit(d: f64, phi: f64, theta: f64, len: usize) -> Vec<f64> {
    let noise = |len: usize| {
        if d == 0.0 {
            let mut v = vec![0.0; len];
            v[0] = 1.0;
            v
        } else {
            fractional_noise_unit(d, len)
        }
    };
    if phi == 0.0 && theta == 0.0 {
        return noise(len);
    }
    let (r0, r1) = arma11_head(phi, theta);
    let tail = geometric_truncation(phi);
    let total = len + tail + 1;
    let g = noise(total);
    // forward[h] = sum_{m>=1} phi^(m-1) g(h + m), built from the top down.
    let mut forward = vec![0.0; len];
    let mut acc = 0.0;
    for h in (0..total - 1).rev() {
        acc = g[h + 1] + phi * acc;
        if h < len {
            forward[h] = acc;
        }
    }
    // backward[h] = sum_{m>=1} phi^(m-1) g(|h - m|); backward[0] == forward[0].
    let mut out = Vec::with_capacity(len);
    let mut backward = forward[0];
    for h in 0..len {
        if h > 0 {
            backward = g[h - 1] + phi * backward;
        }
        out.push(r0 * g[h] + r1 * (forward[h] + backward));
    }
    out
}

/// Default ACVF route used by the likelihood, simulation and forecasting code.
pub fn acvf(params: &ArfimaParams, len: usize) -> Result<AcvfVector> {
    acvf_convolution(params, len)
}
