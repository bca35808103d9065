//! Periodogram-based summaries: raw periodogram, pooled log-periodogram, the GPH
//! log-periodogram regression estimate of d, and the Whittle approximation to the likelihood.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::params::Series;

/// Periodogram ordinates I(k_j) = |sum_t y_t e^{-i t k_j}|^2 / n at k_j = 2 pi (j - 1) / n,
/// for j = 1..floor(n/2) (stored zero-based, so `ordinates[0]` is the zero frequency).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub ordinates: Vec<f64>,
    pub frequencies: Vec<f64>,
}

impl Periodogram {
    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }
}

/// Reusable FFT plan for periodograms of a fixed length.
pub struct PeriodogramPlan {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
}

impl std::fmt::Debug for PeriodogramPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodogramPlan").field("n", &self.n).finish()
    }
}

impl PeriodogramPlan {
    pub fn new(n: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(n);
        PeriodogramPlan { n, fft, buf: vec![Complex::new(0.0, 0.0); n] }
    }

    /// All n ordinates (both halves of the spectrum).
    pub fn full(&mut self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.n, "periodogram plan length mismatch");
        for (b, v) in self.buf.iter_mut().zip(y) {
            *b = Complex::new(*v, 0.0);
        }
        self.fft.process(&mut self.buf);
        let n = self.n as f64;
        self.buf.iter().map(|c| c.norm_sqr() / n).collect()
    }

    /// The first floor(n/2) ordinates.
    pub fn half(&mut self, y: &[f64]) -> Vec<f64> {
        let mut all = self.full(y);
        all.truncate(self.n / 2);
        all
    }
}

pub fn fourier_frequencies(n: usize) -> Vec<f64> {
    (0..n / 2).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Periodogram of a series. Odd lengths use floor(n/2) ordinates.
pub fn periodogram(series: &Series) -> Periodogram {
    let n = series.len();
    let ordinates = PeriodogramPlan::new(n).half(series.values());
    Periodogram { ordinates, frequencies: fourier_frequencies(n) }
}

/// Pooled log-periodogram P_i = log sum_{j=1..J} I(k_{i+j-J}) for i in {l+J, l+2J, ..., m}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledLogPeriodogram {
    /// The (1-based) pooling indices i that were kept.
    pub index: Vec<usize>,
    pub value: Vec<f64>,
}

/// Pool the ordinates (zero-based storage of I(k_1), I(k_2), ...). Indices whose pooled sum is
/// zero are dropped with a warning.
pub fn pool_log_ordinates(ordinates: &[f64], pool: usize, trim: usize, m: usize) -> PooledLogPeriodogram {
    assert!(pool >= 1, "pooling factor must be positive");
    let m = m.min(ordinates.len());
    let mut index = Vec::new();
    let mut value = Vec::new();
    let mut i = trim + pool;
    while i <= m {
        // j = 1..J  ->  I(k_{i+j-J}), 1-based  ->  zero-based i + j - J - 1
        let s: f64 = (1..=pool).map(|j| ordinates[i + j - pool - 1]).sum();
        if s > 0.0 {
            index.push(i);
            value.push(s.ln());
        } else {
            log::warn!("pooled periodogram at index {i} is zero; excluded");
        }
        i += pool;
    }
    PooledLogPeriodogram { index, value }
}

/// Pooled log-periodogram of a series with pooling factor `pool` (J), trimming `trim` (l) and
/// `m` frequencies.
pub fn pooled_log_periodogram(series: &Series, pool: usize, trim: usize, m: usize) -> PooledLogPeriodogram {
    pool_log_ordinates(&periodogram(series).ordinates, pool, trim, m)
}

/// Defaults J = 2, l = 0, m = n/2.
pub fn pooled_log_periodogram_default(series: &Series) -> PooledLogPeriodogram {
    pooled_log_periodogram(series, 2, 0, series.len() / 2)
}

/// GPH log-periodogram regression estimate of d with bandwidth floor(sqrt(n)).
///
/// Regresses log I(lambda_j) on -2 log(2 sin(lambda_j / 2)) over the first Fourier
/// frequencies, excluding zero.
pub fn gph_estimate(ordinates: &[f64], n: usize) -> f64 {
    let bandwidth = ((n as f64).sqrt().floor() as usize).clamp(2, ordinates.len().saturating_sub(1).max(2));
    let mut xs = Vec::with_capacity(bandwidth);
    let mut ys = Vec::with_capacity(bandwidth);
    for j in 1..=bandwidth.min(ordinates.len() - 1) {
        let lambda = 2.0 * PI * j as f64 / n as f64;
        if ordinates[j] > 0.0 {
            xs.push(-2.0 * (2.0 * (lambda / 2.0).sin()).ln());
            ys.push(ordinates[j].ln());
        }
    }
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = crate::stats::mean(&xs);
    let my = crate::stats::mean(&ys);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Concentrated Whittle objective over the Fourier frequencies strictly between 0 and pi.
///
/// The objective is `ln mean(I_j / g_j) + mean(ln g_j)` with
/// `g(l) = |2 sin(l/2)|^(-2d) |1 + theta e^(-il)|^2 / |1 - phi e^(-il)|^2`. The ARMA part of
/// `mean(ln g)` has a closed form over the Fourier grid, so one evaluation costs a single
/// `exp` per frequency.
#[derive(Debug, Clone)]
pub struct Whittle {
    n: usize,
    ordinates: Vec<f64>,
    log_2sin: Vec<f64>,
    cos: Vec<f64>,
    mean_log_2sin: f64,
    /// cos of interior frequencies missing from `ordinates` (odd n drops the last one).
    excluded: Vec<f64>,
}

/// Fitted Whittle estimates. Absent components are reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittleFit {
    pub d: f64,
    pub phi: f64,
    pub theta: f64,
    pub sigma2: f64,
    pub objective: f64,
    pub iterations: usize,
}

/// Which components a Whittle fit estimates; a `None` entry is held at the given value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittleSpec {
    pub d: Option<f64>,
    pub phi: bool,
    pub theta: bool,
}

const D_EDGE: f64 = 0.499;
const ARMA_EDGE: f64 = 0.995;

impl Whittle {
    /// Build from half-spectrum ordinates (`ordinates[0]` at frequency zero) of a length-`n` series.
    pub fn new(ordinates: &[f64], n: usize) -> Self {
        let interior = (n - 1) / 2;
        let used = ordinates.len().saturating_sub(1).min(interior);
        let freq = |j: usize| 2.0 * PI * j as f64 / n as f64;
        let ords = ordinates[1..=used].to_vec();
        let log_2sin: Vec<f64> = (1..=used).map(|j| (2.0 * (freq(j) / 2.0).sin()).ln()).collect();
        let cos = (1..=used).map(|j| freq(j).cos()).collect();
        let excluded = (used + 1..=interior).map(|j| freq(j).cos()).collect();
        let mean_log_2sin = crate::stats::mean(&log_2sin);
        Whittle { n, ordinates: ords, log_2sin, cos, mean_log_2sin, excluded }
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Sum of ln|1 + theta e^(-il)|^2 over the used frequencies.
    fn ma_log_sum(&self, theta: f64) -> f64 {
        let n = self.n as i32;
        let total = 2.0 * (1.0 - (-theta).powi(n)).abs().ln();
        let mut ends = 2.0 * (1.0 + theta).ln();
        if self.n % 2 == 0 {
            ends += 2.0 * (1.0 - theta).ln();
        }
        let mut s = 0.5 * (total - ends);
        for c in &self.excluded {
            s -= (1.0 + 2.0 * theta * c + theta * theta).ln();
        }
        s
    }

    /// Sum of ln|1 - phi e^(-il)|^2 over the used frequencies.
    fn ar_log_sum(&self, phi: f64) -> f64 {
        self.ma_log_sum(-phi)
    }

    /// Returns (objective, sigma2_hat).
    pub fn evaluate(&self, d: f64, phi: f64, theta: f64) -> (f64, f64) {
        let m = self.ordinates.len() as f64;
        let (t2, p2) = (1.0 + theta * theta, 1.0 + phi * phi);
        let mut s = 0.0;
        for ((i, l), c) in self.ordinates.iter().zip(&self.log_2sin).zip(&self.cos) {
            s += i * (2.0 * d * l).exp() * (p2 - 2.0 * phi * c) / (t2 + 2.0 * theta * c);
        }
        let s2 = s / m;
        let mean_log_g = -2.0 * d * self.mean_log_2sin + (self.ma_log_sum(theta) - self.ar_log_sum(phi)) / m;
        (s2.ln() + mean_log_g, s2)
    }

    /// Objective with gradient and Hessian over (d, phi, theta).
    fn derivatives(&self, x: [f64; 3]) -> (f64, [f64; 3], [[f64; 3]; 3]) {
        let [d, phi, theta] = x;
        let m = self.ordinates.len() as f64;
        let (t2, p2) = (1.0 + theta * theta, 1.0 + phi * phi);
        let mut s = 0.0;
        let mut g = [0.0; 3];
        let mut h = [[0.0; 3]; 3];
        for ((i, l), c) in self.ordinates.iter().zip(&self.log_2sin).zip(&self.cos) {
            let a = p2 - 2.0 * phi * c;
            let mm = t2 + 2.0 * theta * c;
            let t = i * (2.0 * d * l).exp() * a / mm;
            let dl = [2.0 * l, 2.0 * (phi - c) / a, -2.0 * (theta + c) / mm];
            let curv = [0.0, 2.0 / a - dl[1] * dl[1], -2.0 / mm + dl[2] * dl[2]];
            s += t;
            for r in 0..3 {
                g[r] += t * dl[r];
                for k in 0..3 {
                    h[r][k] += t * dl[r] * dl[k];
                }
                h[r][r] += t * curv[r];
            }
        }
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        for r in 0..3 {
            grad[r] = g[r] / s;
        }
        for r in 0..3 {
            for k in 0..3 {
                hess[r][k] = h[r][k] / s - grad[r] * grad[k];
            }
        }
        // ARMA log terms: closed form, differentiated numerically.
        let e = 1e-5;
        let f_ma = |t: f64| self.ma_log_sum(t) / m;
        let f_ar = |p: f64| -self.ar_log_sum(p) / m;
        let (m0, mp, mn) = (f_ma(theta), f_ma(theta + e), f_ma(theta - e));
        let (a0, ap, an) = (f_ar(phi), f_ar(phi + e), f_ar(phi - e));
        grad[0] -= 2.0 * self.mean_log_2sin;
        grad[1] += (ap - an) / (2.0 * e);
        grad[2] += (mp - mn) / (2.0 * e);
        hess[1][1] += (ap - 2.0 * a0 + an) / (e * e);
        hess[2][2] += (mp - 2.0 * m0 + mn) / (e * e);
        let f = (s / m).ln() - 2.0 * d * self.mean_log_2sin + m0 + a0;
        (f, grad, hess)
    }

    /// Minimise the objective by damped Newton steps inside the stationarity box.
    pub fn fit(&self, spec: WhittleSpec, start: [f64; 3]) -> WhittleFit {
        let free: Vec<usize> =
            [spec.d.is_none(), spec.phi, spec.theta].iter().enumerate().filter(|(_, f)| **f).map(|(i, _)| i).collect();
        let mut x = start;
        if let Some(d) = spec.d {
            x[0] = d;
        }
        if !spec.phi {
            x[1] = 0.0;
        }
        if !spec.theta {
            x[2] = 0.0;
        }
        x[0] = x[0].clamp(-D_EDGE, D_EDGE);
        x[1] = x[1].clamp(-ARMA_EDGE, ARMA_EDGE);
        x[2] = x[2].clamp(-ARMA_EDGE, ARMA_EDGE);
        let inside = |x: &[f64; 3]| x[0].abs() < D_EDGE && x[1].abs() < ARMA_EDGE && x[2].abs() < ARMA_EDGE;
        let objective = |x: &[f64; 3]| self.evaluate(x[0], x[1], x[2]).0;
        let mut iterations = 0;
        let mut f = objective(&x);
        while iterations < 60 && !free.is_empty() {
            iterations += 1;
            let (_, grad, hess) = self.derivatives(x);
            let k = free.len();
            let gs: Vec<f64> = free.iter().map(|&i| grad[i]).collect();
            let mut step = None;
            let mut mu = 0.0;
            for _ in 0..30 {
                let hs: Vec<Vec<f64>> = free
                    .iter()
                    .map(|&i| free.iter().map(|&j| hess[i][j] + if i == j { mu } else { 0.0 }).collect())
                    .collect();
                if let Some(l) = crate::stats::cholesky_small(&hs) {
                    step = Some(cholesky_solve(&l, &gs.iter().map(|g| -g).collect::<Vec<_>>()));
                    break;
                }
                mu = if mu == 0.0 { 1e-6 * (1.0 + hess[free[0]][free[0]].abs()) } else { mu * 10.0 };
            }
            let Some(delta) = step else { break };
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let mut trial = x;
                for (s, &i) in delta.iter().zip(&free) {
                    trial[i] += alpha * s;
                }
                if inside(&trial) {
                    let ft = objective(&trial);
                    if ft <= f {
                        let change = delta.iter().fold(0.0f64, |a, s| a.max((alpha * s).abs()));
                        x = trial;
                        let gain = f - ft;
                        f = ft;
                        moved = true;
                        if change < 1e-9 || gain < 1e-15 * (1.0 + f.abs()) {
                            return self.finish(x, iterations);
                        }
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved || k == 0 {
                break;
            }
        }
        self.finish(x, iterations)
    }

    fn finish(&self, x: [f64; 3], iterations: usize) -> WhittleFit {
        let (objective, sigma2) = self.evaluate(x[0], x[1], x[2]);
        WhittleFit { d: x[0], phi: x[1], theta: x[2], sigma2, objective, iterations }
    }
}

fn cholesky_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let k = b.len();
    let mut y = vec![0.0; k];
    for i in 0..k {
        let s: f64 = (0..i).map(|j| l[i][j] * y[j]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| l[j][i] * x[j]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_impulse_is_flat() {
        let s = Series::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let p = periodogram(&s);
        assert_eq!(p.len(), 2);
        for v in &p.ordinates {
            assert!((v - 0.25).abs() < 1e-15);
        }
        let full = PeriodogramPlan::new(4).full(s.values());
        assert!(full.iter().all(|v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn pooled_indices_and_log_identity() {
        let ord: Vec<f64> = (1..=50).map(|j| j as f64).collect();
        let p = pool_log_ordinates(&ord, 2, 0, 50);
        assert_eq!(p.index, (1..=25).map(|k| 2 * k).collect::<Vec<_>>());
        assert!((p.value[0] - (1.0f64 + 2.0).ln()).abs() < 1e-15);
        let p1 = pool_log_ordinates(&ord, 1, 0, 50);
        for (k, v) in p1.value.iter().enumerate() {
            assert!((v - ord[k].ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pool_is_dropped() {
        let ord = vec![0.0, 0.0, 1.0, 2.0];
        let p = pool_log_ordinates(&ord, 2, 0, 4);
        assert_eq!(p.index, vec![4]);
    }

    fn whittle_of(n: usize, seed: u64, p: &crate::params::ArfimaParams) -> Whittle {
        let y = crate::simulate::simulate_arfima(p, n, seed).unwrap();
        Whittle::new(&periodogram(&y).ordinates, n)
    }

    #[test]
    fn arma_log_sums_match_direct_sums() {
        for n in [64usize, 65] {
            let ord = vec![1.0; n / 2];
            let w = Whittle::new(&ord, n);
            for theta in [-0.7, 0.0, 0.4, 0.95] {
                let direct: f64 = w.cos.iter().map(|c| (1.0 + 2.0 * theta * c + theta * theta).ln()).sum();
                assert!((w.ma_log_sum(theta) - direct).abs() < 1e-10, "n={n} theta={theta}");
                let direct_ar: f64 = w.cos.iter().map(|c| (1.0 - 2.0 * theta * c + theta * theta).ln()).sum();
                assert!((w.ar_log_sum(theta) - direct_ar).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn newton_agrees_with_nelder_mead() {
        let p = crate::params::ArfimaParams::new(0.25, Some(0.3), Some(-0.2), 1.0).unwrap();
        let w = whittle_of(512, 4, &p);
        let spec = WhittleSpec { d: None, phi: true, theta: true };
        let fit = w.fit(spec, [0.0, 0.0, 0.0]);
        let nm = crate::optim::NelderMead { ftol: 1e-14, max_iter: 5000, xtol: 1e-9, step: 0.1 }.minimize(
            |x| {
                if x[0].abs() >= 0.5 || x[1].abs() >= 1.0 || x[2].abs() >= 1.0 {
                    f64::INFINITY
                } else {
                    w.evaluate(x[0], x[1], x[2]).0
                }
            },
            &[fit.d, fit.phi, fit.theta],
        );
        assert!(fit.objective <= nm.value + 1e-9, "{} vs {}", fit.objective, nm.value);
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let p = crate::params::ArfimaParams::new(0.2, Some(0.5), Some(0.3), 1.0).unwrap();
        let w = whittle_of(256, 9, &p);
        let x = [0.1, 0.2, -0.3];
        let (f, g, h) = w.derivatives(x);
        assert!((f - w.evaluate(x[0], x[1], x[2]).0).abs() < 1e-12);
        let e = 1e-5;
        for i in 0..3 {
            let mut xp = x;
            let mut xn = x;
            xp[i] += e;
            xn[i] -= e;
            let num = (w.evaluate(xp[0], xp[1], xp[2]).0 - w.evaluate(xn[0], xn[1], xn[2]).0) / (2.0 * e);
            assert!((num - g[i]).abs() < 1e-6, "grad {i}: {num} vs {}", g[i]);
            let (_, gp, _) = w.derivatives(xp);
            let (_, gn, _) = w.derivatives(xn);
            for k in 0..3 {
                let num = (gp[k] - gn[k]) / (2.0 * e);
                assert!((num - h[i][k]).abs() < 1e-4 * (1.0 + num.abs()), "hess {i}{k}: {num} vs {}", h[i][k]);
            }
        }
    }

    #[test]
    fn recovers_d_for_long_series() {
        let p = crate::params::ArfimaParams::new(0.3, None, None, 1.0).unwrap();
        let w = whittle_of(2048, 11, &p);
        let fit = w.fit(WhittleSpec { d: None, phi: false, theta: false }, [0.0; 3]);
        assert!((fit.d - 0.3).abs() < 0.06, "{}", fit.d);
        assert!((fit.sigma2 - 1.0).abs() < 0.1);
    }

    #[test]
    fn odd_length_uses_floor() {
        let s = Series::new(vec![1.0, 2.0, -1.0, 0.5, 3.0]).unwrap();
        assert_eq!(periodogram(&s).len(), 2);
    }
}
