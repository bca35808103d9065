//! Fractional differencing and ARMA(1,1) filtering with zero pre-sample values.

use crate::params::Series;

/// Coefficients pi_0..pi_{len-1} of the binomial expansion of (1 - B)^d.
pub fn frac_diff_weights(d: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    if len == 0 {
        return w;
    }
    w.push(1.0);
    for k in 1..len {
        let kf = k as f64;
        let prev = w[k - 1];
        w.push(prev * (kf - 1.0 - d) / kf);
    }
    w
}

pub(crate) fn frac_diff_values(y: &[f64], d: f64) -> Vec<f64> {
    let n = y.len();
    if d == 0.0 {
        return y.to_vec();
    }
    let w = frac_diff_weights(d, n);
    // y[t-k] = yrev[n-1-t+k]
    let yrev: Vec<f64> = y.iter().rev().copied().collect();
    (0..n).map(|t| crate::toeplitz::dot(&w[..=t], &yrev[n - 1 - t..])).collect()
}

/// Apply (1 - B)^d truncated at the series start: u_t = sum_{k<=t} pi_k y_{t-k}.
pub fn frac_diff(series: &Series, d: f64) -> Series {
    Series::from_zero_mean(frac_diff_values(series.values(), d))
}

pub(crate) fn arma_filter_values(y: &[f64], phi: f64, theta: f64) -> Vec<f64> {
    let mut z = Vec::with_capacity(y.len());
    let (mut y_prev, mut z_prev) = (0.0, 0.0);
    for &yt in y {
        let zt = yt - phi * y_prev - theta * z_prev;
        z.push(zt);
        y_prev = yt;
        z_prev = zt;
    }
    z
}

/// Filter y into z_t = y_t - phi y_{t-1} - theta z_{t-1}, i.e. z = (1 - phi B)/(1 + theta B) y.
pub fn arma_filter(series: &Series, phi: f64, theta: f64) -> Series {
    Series::from_zero_mean(arma_filter_values(series.values(), phi, theta))
}

/// Inverse of [`arma_filter`]: y_t = z_t + phi y_{t-1} + theta z_{t-1}.
pub fn arma_unfilter(series: &Series, phi: f64, theta: f64) -> Series {
    let z = series.values();
    let mut y = Vec::with_capacity(z.len());
    let (mut y_prev, mut z_prev) = (0.0, 0.0);
    for &zt in z {
        let yt = zt + phi * y_prev + theta * z_prev;
        y.push(yt);
        y_prev = yt;
        z_prev = zt;
    }
    Series::from_zero_mean(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Series {
        Series::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_order_is_identity() {
        let y = s(&[0.3, -1.2, 2.0, 0.1]);
        assert_eq!(frac_diff(&y, 0.0).values(), y.values());
        assert_eq!(arma_filter(&y, 0.0, 0.0).values(), y.values());
    }

    #[test]
    fn unit_difference() {
        let u = frac_diff(&s(&[1.0, 2.0, 3.0, 4.0]), 1.0);
        assert_eq!(u.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn weights_recursion() {
        let w = frac_diff_weights(0.4, 4);
        assert_eq!(w[0], 1.0);
        assert!((w[1] + 0.4).abs() < 1e-15);
        assert!((w[2] - 0.4 * (0.4 - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn arma_round_trip() {
        let y = s(&[0.5, -0.25, 1.5, 2.0, -3.0, 0.75]);
        let back = arma_unfilter(&arma_filter(&y, 0.6, -0.4), 0.6, -0.4);
        for (a, b) in y.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
