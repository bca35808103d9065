use serde::{Deserialize, Serialize};

use crate::draws::PosteriorDraws;
use crate::error::{Error, Result};
use crate::likelihood::log_likelihood;
use crate::params::{ArfimaParams, Series, ARMA_BOUNDS, D_BOUNDS};

/// Effective sample size M / (1 + 2 sum rho_k), truncating the sum with Geyer's initial
/// positive sequence. A constant chain has ESS 1.
pub fn effective_sample_size(x: &[f64]) -> f64 {
    let m = x.len();
    if m < 2 {
        return m as f64;
    }
    let mean = crate::stats::mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0: f64 = c.iter().map(|v| v * v).sum::<f64>() / m as f64;
    if !(c0 > 0.0) {
        return 1.0;
    }
    let rho = |k: usize| -> f64 { c[..m - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / m as f64 / c0 };
    // Pairs Gamma_j = rho_{2j} + rho_{2j+1}, summed while positive.
    let mut tau = -1.0;
    let mut j = 0;
    while 2 * j + 1 < m {
        let g = if j == 0 { 1.0 + rho(1) } else { rho(2 * j) + rho(2 * j + 1) };
        if g <= 0.0 {
            break;
        }
        tau += 2.0 * g;
        j += 1;
    }
    (m as f64 / tau).min(m as f64 * 10.0)
}

/// Deviance information criterion and its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dic {
    pub dic: f64,
    /// Posterior mean deviance.
    pub mean_deviance: f64,
    /// Effective number of parameters, mean deviance minus deviance at the posterior mean.
    pub p_d: f64,
}

fn clamp_interior(p: ArfimaParams) -> ArfimaParams {
    let pull = |x: f64, (lo, hi): (f64, f64)| x.clamp(lo + 1e-6, hi - 1e-6);
    let q = ArfimaParams {
        d: pull(p.d, D_BOUNDS),
        phi: p.phi.map(|v| pull(v, ARMA_BOUNDS)),
        theta: p.theta.map(|v| pull(v, ARMA_BOUNDS)),
        sigma2: p.sigma2.max(f64::MIN_POSITIVE),
    };
    if q != p {
        log::warn!("posterior mean outside the support; clamped to the interior");
    }
    q
}

/// DIC = mean deviance + p_D with deviance -2 log L.
pub fn dic(series: &Series, draws: &PosteriorDraws) -> Result<Dic> {
    let mean_params = draws.posterior_mean().ok_or_else(|| Error::Input("no posterior draws".into()))?;
    let mut total = 0.0;
    for p in &draws.draws {
        total += -2.0 * log_likelihood(series, p)?;
    }
    let mean_deviance = total / draws.len() as f64;
    let at_mean = -2.0 * log_likelihood(series, &clamp_interior(mean_params))?;
    let p_d = mean_deviance - at_mean;
    Ok(Dic { dic: mean_deviance + p_d, mean_deviance, p_d })
}
