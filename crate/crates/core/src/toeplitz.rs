//! Durbin-Levinson machinery for symmetric positive-definite Toeplitz systems.
//!
//! Everything here takes the autocovariance vector `gamma` whose Toeplitz matrix is the
//! covariance of a zero-mean stationary series, and runs in O(n^2) time with O(n) memory.

use crate::error::{Error, Result};

/// Output of one Durbin-Levinson pass over a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Innovations {
    /// log det of the Toeplitz matrix, accumulated as the sum of log innovation variances.
    pub log_det: f64,
    /// Quadratic form y' T^{-1} y.
    pub quad_form: f64,
}

/// Relative size below which the partial autocorrelation is treated as zero and the
/// predictor is frozen (short-memory tails converge geometrically).
const FREEZE_TOL: f64 = 1e-15;

fn pd_error(t: usize, v: f64) -> Error {
    Error::Numerical(format!(
        "Toeplitz covariance not positive definite (innovation variance {v:e} at step {t})"
    ))
}

/// Dot product with four independent accumulators.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Innovation decomposition of `y` under covariance Toeplitz(`gamma`).
///
/// Requires `gamma.len() >= y.len()`.
pub fn innovations(gamma: &[f64], y: &[f64]) -> Result<Innovations> {
    let n = y.len();
    if gamma.len() < n {
        return Err(Error::Contract(format!(
            "need {n} autocovariances, got {}",
            gamma.len()
        )));
    }
    if n == 0 {
        return Ok(Innovations { log_det: 0.0, quad_form: 0.0 });
    }
    let mut v = gamma[0];
    if !(v > 0.0) || !v.is_finite() {
        return Err(pd_error(0, v));
    }
    let mut log_det = v.ln();
    let mut quad = y[0] * y[0] / v;
    // Reversed copies turn the lagged sums into forward dot products.
    let grev: Vec<f64> = gamma[..n].iter().rev().copied().collect();
    let yrev: Vec<f64> = y.iter().rev().copied().collect();
    // coef[j-1] = phi_{t, j}
    let mut coef: Vec<f64> = Vec::with_capacity(n);
    let mut rbuf = vec![0.0; n];
    let mut frozen = false;
    let mut quiet_steps = 0usize;
    for t in 1..n {
        let k = coef.len();
        if !frozen {
            // phi_{t,t} = (gamma(t) - sum_j phi_{t-1,j} gamma(t-1-j)) / v_{t-1}
            let acc = gamma[t] - dot(&coef, &grev[n - t..n - t + k]);
            let kappa = acc / v;
            if !(kappa.abs() < 1.0) || !kappa.is_finite() {
                return Err(pd_error(t, v * (1.0 - kappa * kappa)));
            }
            // phi_{t,j} = phi_{t-1,j} - kappa phi_{t-1,t-j}; `rbuf[n-k..]` holds coef reversed.
            for (a, b) in coef.iter_mut().zip(rbuf[n - k..].iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x - kappa * y;
                *b = y - kappa * x;
            }
            rbuf[n - k - 1] = kappa;
            coef.push(kappa);
            v *= 1.0 - kappa * kappa;
            if !(v > 0.0) {
                return Err(pd_error(t, v));
            }
            if kappa.abs() < FREEZE_TOL {
                quiet_steps += 1;
                if quiet_steps >= 8 {
                    frozen = true;
                    let max = coef.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                    while coef.last().is_some_and(|c| c.abs() <= FREEZE_TOL * max) {
                        coef.pop();
                    }
                }
            } else {
                quiet_steps = 0;
            }
        }
        // y[t-1-j] = yrev[n-t+j]
        let m = coef.len();
        let pred = dot(&coef, &yrev[n - t..n - t + m]);
        let e = y[t] - pred;
        log_det += v.ln();
        quad += e * e / v;
    }
    Ok(Innovations { log_det, quad_form: quad })
}

/// Draw x_{n..n+b} from the Gaussian conditional given x_0..x_{n-1} = `y`, where `gamma`
/// (length >= n + b) is the joint autocovariance. Runs the Durbin-Levinson recursion past the
/// sample, drawing each new point from its one-step predictive distribution.
pub(crate) fn sample_continuation<R: rand::Rng + ?Sized>(
    gamma: &[f64],
    y: &[f64],
    b: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = y.len();
    let total = n + b;
    if gamma.len() < total {
        return Err(Error::Contract(format!("need {total} autocovariances, got {}", gamma.len())));
    }
    let grev: Vec<f64> = gamma[..total].iter().rev().copied().collect();
    // xrev[total-1-t] = x_t, filled as time advances.
    let mut xrev = vec![0.0; total];
    for (t, v) in y.iter().enumerate() {
        xrev[total - 1 - t] = *v;
    }
    let mut v = gamma[0];
    if !(v > 0.0) {
        return Err(pd_error(0, v));
    }
    let mut out = Vec::with_capacity(b);
    let mut coef: Vec<f64> = Vec::with_capacity(total);
    let mut rbuf = vec![0.0; total];
    let mut frozen = false;
    let mut quiet_steps = 0usize;
    if n == 0 {
        let x = v.sqrt() * crate::stats::standard_normal(rng);
        xrev[total - 1] = x;
        out.push(x);
    }
    for t in 1..total {
        let k = coef.len();
        if !frozen {
            let acc = gamma[t] - dot(&coef, &grev[total - t..total - t + k]);
            let kappa = acc / v;
            if !(kappa.abs() < 1.0) || !kappa.is_finite() {
                return Err(pd_error(t, v * (1.0 - kappa * kappa)));
            }
            for (a, c) in coef.iter_mut().zip(rbuf[total - k..].iter_mut()) {
                let (x, y) = (*a, *c);
                *a = x - kappa * y;
                *c = y - kappa * x;
            }
            rbuf[total - k - 1] = kappa;
            coef.push(kappa);
            v *= 1.0 - kappa * kappa;
            if !(v > 0.0) {
                return Err(pd_error(t, v));
            }
            if kappa.abs() < FREEZE_TOL {
                quiet_steps += 1;
                if quiet_steps >= 8 {
                    frozen = true;
                    let max = coef.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                    while coef.last().is_some_and(|c| c.abs() <= FREEZE_TOL * max) {
                        coef.pop();
                    }
                }
            } else {
                quiet_steps = 0;
            }
        }
        if t >= n {
            let m = coef.len();
            let pred = dot(&coef, &xrev[total - t..total - t + m]);
            let x = pred + v.sqrt() * crate::stats::standard_normal(rng);
            xrev[total - 1 - t] = x;
            out.push(x);
        }
    }
    Ok(out)
}

/// Prediction coefficients and innovation variances needed to simulate or whiten a series
/// of length `n`: row t holds phi_{t,1..t}. O(n^2) memory; used for exact simulation.
pub(crate) fn predictor_rows(gamma: &[f64], n: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut rows = Vec::with_capacity(n);
    let mut vars = Vec::with_capacity(n);
    let mut v = gamma[0];
    if !(v > 0.0) {
        return Err(pd_error(0, v));
    }
    rows.push(Vec::new());
    vars.push(v);
    let mut coef: Vec<f64> = Vec::new();
    for t in 1..n {
        let mut acc = gamma[t];
        for (j, c) in coef.iter().enumerate() {
            acc -= c * gamma[t - 1 - j];
        }
        let kappa = acc / v;
        if !(kappa.abs() < 1.0) {
            return Err(pd_error(t, v * (1.0 - kappa * kappa)));
        }
        let mut next: Vec<f64> = coef.iter().enumerate().map(|(j, c)| c - kappa * coef[coef.len() - 1 - j]).collect();
        next.push(kappa);
        coef = next;
        v *= 1.0 - kappa * kappa;
        rows.push(coef.clone());
        vars.push(v);
    }
    Ok((rows, vars))
}

/// Solve Toeplitz(`gamma`[..n]) X = B for several right-hand sides at once (Levinson).
pub fn solve(gamma: &[f64], rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let Some(first) = rhs.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if rhs.iter().any(|b| b.len() != n) {
        return Err(Error::Contract("right-hand sides differ in length".into()));
    }
    if gamma.len() < n {
        return Err(Error::Contract(format!("need {n} autocovariances, got {}", gamma.len())));
    }
    if n == 0 {
        return Ok(vec![Vec::new(); rhs.len()]);
    }
    let g0 = gamma[0];
    if !(g0 > 0.0) {
        return Err(pd_error(0, g0));
    }
    let r: Vec<f64> = gamma[1..n].iter().map(|g| g / g0).collect();
    let mut xs: Vec<Vec<f64>> = rhs.iter().map(|b| vec![b[0] / g0]).collect();
    if n == 1 {
        return Ok(xs);
    }
    // Durbin vector y solves T_k y = -(r_1..r_k).
    let mut y = vec![-r[0]];
    let mut beta = 1.0;
    let mut alpha = -r[0];
    let mut scratch = Vec::with_capacity(n);
    for k in 1..n {
        beta *= 1.0 - alpha * alpha;
        if !(beta > 0.0) {
            return Err(pd_error(k, beta * g0));
        }
        for (x, b) in xs.iter_mut().zip(rhs) {
            let mut dot = 0.0;
            for i in 0..k {
                dot += r[i] * x[k - 1 - i];
            }
            let mu = (b[k] / g0 - dot) / beta;
            for i in 0..k {
                x[i] += mu * y[k - 1 - i];
            }
            x.push(mu);
        }
        if k < n - 1 {
            let mut dot = 0.0;
            for i in 0..k {
                dot += r[i] * y[k - 1 - i];
            }
            alpha = (-r[k] - dot) / beta;
            scratch.clear();
            scratch.extend((0..k).map(|i| y[i] + alpha * y[k - 1 - i]));
            scratch.push(alpha);
            std::mem::swap(&mut y, &mut scratch);
        }
    }
    Ok(xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acvf::{acvf_arma11, acvf_convolution};
    use crate::params::ArfimaParams;
    use nalgebra::{DMatrix, DVector};

    fn dense(gamma: &[f64], n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)])
    }

    #[test]
    fn innovations_match_dense_cholesky() {
        let p = ArfimaParams::new(0.3, Some(-0.4), Some(0.5), 1.3).unwrap();
        let n = 80;
        let g = acvf_convolution(&p, n).unwrap().gamma;
        let y: Vec<f64> = (0..n).map(|t| ((t * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let inn = innovations(&g, &y).unwrap();
        let m = dense(&g, n);
        let chol = m.clone().cholesky().unwrap();
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let yv = DVector::from_vec(y.clone());
        let q = yv.dot(&chol.solve(&yv));
        assert!((inn.log_det - logdet).abs() < 1e-10 * logdet.abs().max(1.0));
        assert!((inn.quad_form - q).abs() < 1e-10 * q);
    }

    #[test]
    fn frozen_predictor_matches_full_recursion() {
        // A short-memory covariance triggers the freeze after a few dozen steps.
        let g = acvf_arma11(0.6, 0.3, 1.0, 600).unwrap().gamma;
        let y: Vec<f64> = (0..600).map(|t| ((t * 7919 % 101) as f64 - 50.0) / 29.0).collect();
        let inn = innovations(&g, &y).unwrap();
        let m = dense(&g, 600);
        let chol = m.cholesky().unwrap();
        let yv = DVector::from_vec(y);
        let q = yv.dot(&chol.solve(&yv));
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        assert!((inn.quad_form - q).abs() < 1e-10 * q);
        assert!((inn.log_det - logdet).abs() < 1e-10 * logdet.abs().max(1.0));
    }

    #[test]
    fn levinson_solve_matches_dense() {
        let p = ArfimaParams::new(0.2, Some(0.5), None, 2.0).unwrap();
        let n = 50;
        let g = acvf_convolution(&p, n).unwrap().gamma;
        let b1: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let b2: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let xs = solve(&g, &[b1.clone(), b2.clone()]).unwrap();
        let m = dense(&g, n);
        for (x, b) in xs.iter().zip([b1, b2]) {
            let expect = m.clone().lu().solve(&DVector::from_vec(b)).unwrap();
            for i in 0..n {
                assert!((x[i] - expect[i]).abs() < 1e-9 * expect.amax());
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        let g = [1.0, 1.2, 0.3];
        assert!(matches!(innovations(&g, &[1.0, 0.0, 1.0]), Err(Error::Numerical(_))));
    }
}
