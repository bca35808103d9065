use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::simultaneous::clamp_inside;
use super::{arma_setup, box_of, free_components, require_demeaned, setup, Recorder, TruncatedNormal};
use crate::draws::{BlockAcceptance, PosteriorDraws, Provenance};
use crate::error::Result;
use crate::filter::{arma_filter_values, frac_diff_values};
use crate::likelihood::{integrated_from, sigma2_conditional_params, unit_innovations, Priors};
use crate::mcmc::McmcConfig;
use crate::params::{Component, Series};
use crate::stats::sample_inverse_gamma;

fn integrated(y: &[f64], d: f64, phi: f64, theta: f64, priors: &Priors) -> f64 {
    match unit_innovations(y, d, phi, theta) {
        Ok(inn) => integrated_from(&inn, y.len(), priors),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// One Metropolis-Hastings decision; returns true on acceptance.
fn accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    let u: f64 = rng.random();
    u.ln() < log_ratio
}

/// Filtered Metropolis-within-Gibbs sampler.
///
/// d is updated against the long-memory posterior of the ARMA-filtered series, (phi, theta)
/// against the ARMA posterior of the fractionally differenced series, and sigma2 is drawn from
/// its full conditional under the complete ARFIMA covariance.
pub fn run_filtered_mcmc(series: &Series, config: &McmcConfig) -> Result<PosteriorDraws> {
    config.validate()?;
    require_demeaned(series)?;
    let y = series.values();
    let n = y.len();
    let priors = &config.priors;
    let flat = config.flat_likelihood;
    let comps = free_components(config.order);
    let arma_comps: Vec<Component> = comps.iter().copied().filter(|c| *c != Component::D).collect();
    let s = setup(series, config, comps.clone())?;
    let d0 = clamp_inside(s.center[0], priors, Component::D);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let d_prop = TruncatedNormal::new(&[vec![config.sigma_d * config.sigma_d]], vec![priors.d_bounds.0], vec![priors.d_bounds.1])?;
    let arma_prop = if arma_comps.is_empty() {
        None
    } else {
        let cov = arma_setup(series, config, d0, &arma_comps)?;
        let (lo, hi) = box_of(priors, &arma_comps);
        Some(TruncatedNormal::new(&cov, lo, hi)?)
    };
    let arma_center: Vec<f64> =
        s.center[1..].iter().zip(&arma_comps).map(|(x, c)| clamp_inside(*x, priors, *c)).collect();

    let mut d = d_prop.sample(&[d0], &mut rng)?[0];
    let mut arma = match (&arma_prop, config.arma_block) {
        (Some(p), true) => p.sample(&arma_center, &mut rng)?,
        _ => arma_center,
    };
    let phi_theta = |a: &[f64]| {
        let mut pt = (0.0, 0.0);
        for (c, v) in arma_comps.iter().zip(a) {
            match c {
                Component::Phi => pt.0 = *v,
                Component::Theta => pt.1 = *v,
                _ => {}
            }
        }
        pt
    };
    let arma_in_support = |a: &[f64]| {
        let (phi, theta) = phi_theta(a);
        priors.contains(0.0, config.order.has_phi().then_some(phi), config.order.has_theta().then_some(theta))
    };

    // Caches keyed on the state they depend on.
    let mut z: Vec<f64> = Vec::new();
    let mut z_key: Option<Vec<f64>> = None;
    let mut u_series: Vec<f64> = Vec::new();
    let mut u_key: Option<f64> = None;
    let mut lp_d: Option<f64> = None;
    let mut lp_arma: Option<f64> = None;
    let mut quad_key: Option<(f64, Vec<f64>)> = None;
    let mut quad = f64::NAN;

    let mut accepted_d = 0usize;
    let mut accepted_arma = 0usize;
    let mut recorder = Recorder::new(config);
    let total = config.burn_in + config.iterations;
    for it in 1..=total {
        // (i) d given (phi, theta) through the ARMA-filtered series.
        if z_key.as_deref() != Some(&arma[..]) {
            let (phi, theta) = phi_theta(&arma);
            z = if arma_comps.is_empty() { y.to_vec() } else { arma_filter_values(y, phi, theta) };
            z_key = Some(arma.clone());
            lp_d = None;
        }
        let d_target = |d: f64| {
            if !priors.contains(d, None, None) {
                f64::NEG_INFINITY
            } else if flat {
                0.0
            } else {
                integrated(&z, d, 0.0, 0.0, priors)
            }
        };
        let cur = *lp_d.get_or_insert_with(|| d_target(d));
        let d_new = d_prop.sample(&[d], &mut rng)?[0];
        let lp_new = d_target(d_new);
        if accept(lp_new - cur + d_prop.log_mass(&[d]) - d_prop.log_mass(&[d_new]), &mut rng) {
            d = d_new;
            lp_d = Some(lp_new);
            accepted_d += 1;
        }

        // (ii) (phi, theta) given d through the fractionally differenced series.
        if let (Some(prop), true) = (&arma_prop, config.arma_block) {
            if u_key != Some(d) {
                u_series = frac_diff_values(y, d);
                u_key = Some(d);
                lp_arma = None;
            }
            let arma_target = |a: &[f64]| {
                if !arma_in_support(a) {
                    f64::NEG_INFINITY
                } else if flat {
                    0.0
                } else {
                    let (phi, theta) = phi_theta(a);
                    integrated(&u_series, 0.0, phi, theta, priors)
                }
            };
            let cur = *lp_arma.get_or_insert_with(|| arma_target(&arma));
            let a_new = prop.sample(&arma, &mut rng)?;
            let lp_new = arma_target(&a_new);
            if accept(lp_new - cur + prop.log_mass(&arma) - prop.log_mass(&a_new), &mut rng) {
                arma = a_new;
                lp_arma = Some(lp_new);
                accepted_arma += 1;
                z_key = None;
            }
        }

        // (iii) sigma2 under the full covariance of y.
        let sigma2 = if flat {
            sample_inverse_gamma(priors.alpha, priors.beta, &mut rng)
        } else {
            let key_matches = quad_key.as_ref().is_some_and(|(kd, ka)| *kd == d && ka[..] == arma[..]);
            if !key_matches {
                let (phi, theta) = phi_theta(&arma);
                quad = unit_innovations(y, d, phi, theta)?.quad_form;
                quad_key = Some((d, arma.clone()));
            }
            let (shape, scale) = sigma2_conditional_params(quad, n, priors);
            sample_inverse_gamma(shape, scale, &mut rng)
        };
        let (phi, theta) = phi_theta(&arma);
        recorder.offer(it, d, phi, theta, sigma2)?;
    }
    let mut acceptance = vec![BlockAcceptance { block: "d".into(), rate: accepted_d as f64 / total as f64 }];
    if arma_prop.is_some() && config.arma_block {
        acceptance.push(BlockAcceptance { block: "arma".into(), rate: accepted_arma as f64 / total as f64 });
    }
    Ok(PosteriorDraws {
        order: config.order,
        draws: recorder.draws,
        index: recorder.index,
        acceptance,
        provenance: Provenance::McmcFiltered,
    })
}
