use serde::{Deserialize, Serialize};

use super::{ArmaSummary, SummaryVariant};
use crate::error::{Error, Result};
use crate::params::ModelOrder;
use crate::spectral::{fourier_frequencies, gph_estimate, pool_log_ordinates, Periodogram, PooledLogPeriodogram, Whittle, WhittleSpec};
use crate::stats::variance;

/// Per-series summaries compared by the rejection sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub periodogram: Periodogram,
    pub pooled: PooledLogPeriodogram,
    /// Estimated ARMA coefficients, (phi, theta) restricted to the model order.
    pub arma: Vec<f64>,
    pub sample_variance: f64,
}

/// Settings shared by observed and simulated summaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummarySettings {
    pub order: ModelOrder,
    pub pool: usize,
    pub trim: usize,
    pub arma: ArmaSummary,
}

/// Whittle estimate of the order's ARMA coefficients; `fixed_d` pins d (filtered variant).
pub(crate) fn arma_estimate(ordinates: &[f64], n: usize, order: ModelOrder, fixed_d: Option<f64>) -> Vec<f64> {
    if order.arma_dim() == 0 {
        return Vec::new();
    }
    let w = Whittle::new(ordinates, n);
    let d0 = fixed_d.unwrap_or_else(|| gph_estimate(ordinates, n).clamp(-0.4, 0.4));
    let fit = w.fit(WhittleSpec { d: fixed_d, phi: order.has_phi(), theta: order.has_theta() }, [d0, 0.0, 0.0]);
    let mut out = Vec::with_capacity(2);
    if order.has_phi() {
        out.push(fit.phi);
    }
    if order.has_theta() {
        out.push(fit.theta);
    }
    out
}

/// Summaries from a demeaned series and its half periodogram. `d_for_filter` is the d used by
/// the filtered ARMA summary (the proposal for simulated series, an estimate for the observed).
pub(crate) fn summarize_ordinates(
    y: &[f64],
    ordinates: Vec<f64>,
    settings: &SummarySettings,
    d_for_filter: f64,
) -> SummaryStats {
    let n = y.len();
    let pooled = pool_log_ordinates(&ordinates, settings.pool, settings.trim, n / 2);
    let fixed_d = match settings.arma {
        ArmaSummary::Arfima => None,
        ArmaSummary::Filtered => Some(d_for_filter),
    };
    let arma = arma_estimate(&ordinates, n, settings.order, fixed_d);
    SummaryStats {
        periodogram: Periodogram { ordinates, frequencies: fourier_frequencies(n) },
        pooled,
        arma,
        sample_variance: variance(y),
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

const FIRST_ORDINATES: usize = 20;

/// (H_h, H_ARMA, H_sigma2) between observed and simulated summaries.
pub fn abc_distances(obs: &SummaryStats, sim: &SummaryStats, variant: SummaryVariant) -> Result<[f64; 3]> {
    let (a, b) = (&obs.periodogram.ordinates, &sim.periodogram.ordinates);
    if a.len() != b.len() || obs.arma.len() != sim.arma.len() {
        return Err(Error::Contract("summaries come from series of different lengths or orders".into()));
    }
    let h = match variant {
        SummaryVariant::Full => euclid(a, b),
        SummaryVariant::First20 => {
            let k = FIRST_ORDINATES.min(a.len());
            euclid(&a[..k], &b[..k])
        }
        SummaryVariant::PooledLog => {
            if obs.pooled.index != sim.pooled.index {
                return Err(Error::Contract("pooled log-periodograms cover different indices".into()));
            }
            euclid(&obs.pooled.value, &sim.pooled.value)
        }
    };
    Ok([h, euclid(&obs.arma, &sim.arma), (obs.sample_variance - sim.sample_variance).abs()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(ord: Vec<f64>, arma: Vec<f64>, var: f64) -> SummaryStats {
        let n = 2 * ord.len();
        let pooled = pool_log_ordinates(&ord, 2, 0, n / 2);
        SummaryStats { periodogram: Periodogram { frequencies: fourier_frequencies(n), ordinates: ord }, pooled, arma, sample_variance: var }
    }

    #[test]
    fn identical_summaries_are_at_zero() {
        let s = stats((1..=30).map(|j| j as f64).collect(), vec![0.3], 1.2);
        for v in [SummaryVariant::Full, SummaryVariant::First20, SummaryVariant::PooledLog] {
            assert_eq!(abc_distances(&s, &s, v).unwrap(), [0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn hand_computed_distances() {
        let a = stats(vec![0.0, 1.0, 2.0, 3.0], vec![0.1, 0.2], 1.0);
        let b = stats(vec![0.0, 2.0, 4.0, 3.0], vec![0.4, -0.2], 1.5);
        let [h, arma, s2] = abc_distances(&a, &b, SummaryVariant::Full).unwrap();
        assert!((h - 5f64.sqrt()).abs() < 1e-15);
        assert!((arma - 0.5).abs() < 1e-15);
        assert_eq!(s2, 0.5);
        // Pooled pairs: ln(0+1) vs ln(0+2), ln(2+3) vs ln(4+3).
        let [h3, _, _] = abc_distances(&a, &b, SummaryVariant::PooledLog).unwrap();
        let expect = ((2f64.ln()).powi(2) + (7f64.ln() - 5f64.ln()).powi(2)).sqrt();
        assert!((h3 - expect).abs() < 1e-15);
    }

    #[test]
    fn first_twenty_never_exceeds_full() {
        let a = stats((0..40).map(|j| (j as f64).sin().abs()).collect(), vec![], 1.0);
        let b = stats((0..40).map(|j| (j as f64 * 0.7).cos().abs()).collect(), vec![], 1.0);
        let h1 = abc_distances(&a, &b, SummaryVariant::Full).unwrap()[0];
        let h2 = abc_distances(&a, &b, SummaryVariant::First20).unwrap()[0];
        assert!(h2 <= h1);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let a = stats(vec![1.0; 10], vec![], 1.0);
        let b = stats(vec![1.0; 12], vec![], 1.0);
        assert!(matches!(abc_distances(&a, &b, SummaryVariant::Full), Err(Error::Contract(_))));
    }
}
