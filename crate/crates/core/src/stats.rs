//! Small statistical helpers shared by the samplers, the ABC driver and the study harness.

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample variance with the n - 1 denominator.
pub fn variance(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64
}

pub fn std_dev(x: &[f64]) -> f64 {
    variance(x).sqrt()
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    s
}

/// Nearest-rank (type 1) quantile: the smallest order statistic whose empirical CDF reaches `p`.
pub fn quantile_nearest_rank(x: &[f64], p: f64) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let s = sorted(x);
    let rank = (p * s.len() as f64).ceil() as usize;
    s[rank.clamp(1, s.len()) - 1]
}

/// Linearly interpolated (type 7) quantile.
pub fn quantile_linear(x: &[f64], p: f64) -> f64 {
    quantile_linear_sorted(&sorted(x), p)
}

pub fn quantile_linear_sorted(s: &[f64], p: f64) -> f64 {
    if s.is_empty() {
        return f64::NAN;
    }
    let h = (s.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    s[lo] + (h - lo as f64) * (s[hi] - s[lo])
}

/// Sample autocorrelation at lags 0..=max_lag (biased, 1/n normalisation).
pub fn autocorrelation(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let m = mean(x);
    let c0: f64 = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|k| {
            if c0 == 0.0 {
                return if k == 0 { 1.0 } else { 0.0 };
            }
            let ck: f64 = (0..n - k).map(|t| (x[t] - m) * (x[t + k] - m)).sum::<f64>() / n as f64;
            ck / c0
        })
        .collect()
}

/// Sample autocovariance at lags 0..=max_lag (1/n normalisation, mean removed).
pub fn autocovariance(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let m = mean(x);
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|k| (0..n - k).map(|t| (x[t] - m) * (x[t + k] - m)).sum::<f64>() / n as f64)
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

fn std_normal() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).expect("standard normal"))
}

pub fn normal_cdf(x: f64) -> f64 {
    std_normal().cdf(x)
}

pub fn normal_quantile(p: f64) -> f64 {
    std_normal().inverse_cdf(p)
}

/// Draw from the inverse-gamma distribution with shape `alpha` and scale `beta`
/// (density proportional to x^(-alpha-1) exp(-beta/x)).
pub fn sample_inverse_gamma<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    let g = Gamma::new(alpha, 1.0 / beta).expect("inverse-gamma parameters must be positive");
    1.0 / g.sample(rng)
}

pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Probability mass of N(mean, sd^2) inside the open interval (lo, hi).
pub fn normal_interval_mass(mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    normal_cdf((hi - mean) / sd) - normal_cdf((lo - mean) / sd)
}

/// Gauss-Legendre nodes and weights on [0, 1].
fn gauss_legendre_unit() -> &'static (Vec<f64>, Vec<f64>) {
    const POINTS: usize = 48;
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| {
        let n = POINTS;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Newton iteration on P_n starting from the Chebyshev-like guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes.push(0.5 * (1.0 - x));
            weights.push(1.0 / ((1.0 - x * x) * dp * dp));
        }
        (nodes, weights)
    })
}

/// Probability that X ~ N(mean, cov) lies in the box (lo, hi), for dimension 1 to 3.
///
/// Uses the sequential-conditioning transform of the Cholesky factor and tensor
/// Gauss-Legendre quadrature over the resulting unit cube, so the result is deterministic.
pub fn mvn_box_probability(mean: &[f64], chol: &[Vec<f64>], lo: &[f64], hi: &[f64]) -> f64 {
    let k = mean.len();
    assert!((1..=3).contains(&k), "box probability supports dimension 1..=3");
    let (nodes, weights) = gauss_legendre_unit();

    // Recursive integration over w_1..w_{k-1}.
    fn level(
        j: usize,
        y: &mut [f64; 3],
        mean: &[f64],
        chol: &[Vec<f64>],
        lo: &[f64],
        hi: &[f64],
        nodes: &[f64],
        weights: &[f64],
    ) -> f64 {
        let k = mean.len();
        let shift: f64 = (0..j).map(|i| chol[j][i] * y[i]).sum();
        let ljj = chol[j][j];
        let a = normal_cdf((lo[j] - mean[j] - shift) / ljj);
        let b = normal_cdf((hi[j] - mean[j] - shift) / ljj);
        let e = (b - a).max(0.0);
        if j + 1 == k || e == 0.0 {
            return e;
        }
        let mut acc = 0.0;
        for (w, wt) in nodes.iter().zip(weights) {
            let u = (a + w * e).clamp(1e-300, 1.0 - 1e-16);
            y[j] = normal_quantile(u);
            acc += wt * level(j + 1, y, mean, chol, lo, hi, nodes, weights);
        }
        e * acc
    }

    let mut y = [0.0; 3];
    level(0, &mut y, mean, chol, lo, hi, nodes, weights)
}

/// Lower Cholesky factor of a small dense symmetric matrix, `None` if not positive definite.
pub fn cholesky_small(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = m.len();
    let mut l = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (0..j).map(|p| l[i][p] * l[j][p]).sum();
            if i == j {
                let v = m[i][i] - s;
                if !(v > 0.0) || !v.is_finite() {
                    return None;
                }
                l[i][j] = v.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Some(l)
}

/// Kolmogorov distribution tail with the Stephens small-sample correction.
fn kolmogorov_p(d: f64, n_eff: f64) -> f64 {
    let sq = n_eff.sqrt();
    let lambda = (sq + 0.12 + 0.11 / sq) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov-Smirnov test; returns (statistic, p-value).
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let s = sorted(x);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, v) in s.iter().enumerate() {
        let f = cdf(*v);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    (d, kolmogorov_p(d, n))
}

/// Two-sample Kolmogorov-Smirnov test; returns (statistic, p-value).
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (a, b) = (sorted(x), sorted(y));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let n_eff = (n * m) as f64 / (n + m) as f64;
    (d, kolmogorov_p(d, n_eff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quantiles() {
        let x = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(quantile_nearest_rank(&x, 0.2), 1.0);
        assert_eq!(quantile_nearest_rank(&x, 0.21), 2.0);
        assert_eq!(quantile_nearest_rank(&x, 1.0), 5.0);
        assert_eq!(quantile_nearest_rank(&x, 0.0), 1.0);
        assert!((quantile_linear(&x, 0.5) - 3.0).abs() < 1e-15);
        assert!((quantile_linear(&x, 0.1) - 1.4).abs() < 1e-12);
    }

    #[test]
    fn box_probability_diagonal_matches_product() {
        let chol = vec![vec![0.3, 0.0, 0.0], vec![0.0, 0.5, 0.0], vec![0.0, 0.0, 0.2]];
        let mean = [0.4, -0.7, 0.1];
        let lo = [-0.5, -1.0, -1.0];
        let hi = [0.5, 1.0, 1.0];
        let p = mvn_box_probability(&mean, &chol, &lo, &hi);
        let expect: f64 = (0..3)
            .map(|i| normal_interval_mass(mean[i], chol[i][i], lo[i], hi[i]))
            .product();
        assert!((p - expect).abs() < 1e-12, "{p} vs {expect}");
    }

    #[test]
    fn box_probability_correlated_matches_monte_carlo() {
        let cov = vec![
            vec![0.04, -0.03, 0.01],
            vec![-0.03, 0.09, 0.02],
            vec![0.01, 0.02, 0.0625],
        ];
        let chol = cholesky_small(&cov).unwrap();
        let mean = [0.35, 0.8, -0.85];
        let lo = [-0.5, -1.0, -1.0];
        let hi = [0.5, 1.0, 1.0];
        let p = mvn_box_probability(&mean, &chol, &lo, &hi);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 400_000;
        let mut hits = 0usize;
        for _ in 0..trials {
            let z: Vec<f64> = (0..3).map(|_| standard_normal(&mut rng)).collect();
            let x: Vec<f64> = (0..3)
                .map(|i| mean[i] + (0..=i).map(|j| chol[i][j] * z[j]).sum::<f64>())
                .collect();
            if (0..3).all(|i| x[i] > lo[i] && x[i] < hi[i]) {
                hits += 1;
            }
        }
        let phat = hits as f64 / trials as f64;
        let se = (phat * (1.0 - phat) / trials as f64).sqrt();
        assert!((p - phat).abs() < 4.0 * se, "quadrature {p} vs MC {phat} (se {se})");
    }

    #[test]
    fn ks_uniform_accepts_uniform_rejects_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let (_, p) = ks_one_sample(&u, |x| x.clamp(0.0, 1.0));
        assert!(p > 0.01);
        let shifted: Vec<f64> = u.iter().map(|v| v * 0.9).collect();
        let (_, p2) = ks_one_sample(&shifted, |x| x.clamp(0.0, 1.0));
        assert!(p2 < 1e-6);
        let (_, p3) = ks_two_sample(&u[..1000], &u[1000..]);
        assert!(p3 > 0.01);
    }

    #[test]
    fn inverse_gamma_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws: Vec<f64> = (0..100_000).map(|_| sample_inverse_gamma(28.0, 30.0, &mut rng)).collect();
        let m = mean(&draws);
        assert!((m - 30.0 / 27.0).abs() / (30.0 / 27.0) < 0.01);
    }

    #[test]
    fn spearman_monotone() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 4.0, 9.0, 16.0];
        assert!((spearman(&x, &y) - 1.0).abs() < 1e-12);
    }
}
