use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{box_of, free_components, require_demeaned, setup, Recorder, TruncatedNormal};
use crate::draws::{BlockAcceptance, PosteriorDraws, Provenance};
use crate::error::Result;
use crate::likelihood::{integrated_from, sigma2_conditional_params, unit_innovations, Priors};
use crate::mcmc::McmcConfig;
use crate::params::{Component, Series};
use crate::stats::sample_inverse_gamma;

/// Log target and the unit-covariance quadratic form at a (d, phi, theta) point.
struct Target<'a> {
    y: &'a [f64],
    comps: &'a [Component],
    priors: &'a Priors,
    flat: bool,
}

impl Target<'_> {
    fn dpt(&self, x: &[f64]) -> (f64, f64, f64) {
        let mut v = [0.0; 3];
        for (c, x) in self.comps.iter().zip(x) {
            v[super::component_slot(*c)] = *x;
        }
        (v[0], v[1], v[2])
    }

    fn eval(&self, x: &[f64]) -> (f64, f64) {
        let (d, phi, theta) = self.dpt(x);
        let order = crate::params::ModelOrder::from_flags(
            self.comps.contains(&Component::Phi),
            self.comps.contains(&Component::Theta),
        );
        let inside = self.priors.contains(
            d,
            order.has_phi().then_some(phi),
            order.has_theta().then_some(theta),
        );
        if !inside {
            return (f64::NEG_INFINITY, f64::NAN);
        }
        if self.flat {
            return (0.0, f64::NAN);
        }
        match unit_innovations(self.y, d, phi, theta) {
            Ok(inn) => (integrated_from(&inn, self.y.len(), self.priors), inn.quad_form),
            Err(_) => (f64::NEG_INFINITY, f64::NAN),
        }
    }
}

/// Simultaneous Metropolis-within-Gibbs sampler.
///
/// Each iteration proposes (d, phi, theta) jointly from a box-truncated normal random walk,
/// accepts against the sigma2-integrated posterior, then draws sigma2 from its inverse-gamma
/// full conditional.
pub fn run_simultaneous_mcmc(series: &Series, config: &McmcConfig) -> Result<PosteriorDraws> {
    config.validate()?;
    require_demeaned(series)?;
    let comps = free_components(config.order);
    let s = setup(series, config, comps)?;
    let (lo, hi) = box_of(&config.priors, &s.comps);
    let proposal = TruncatedNormal::new(&s.cov, lo, hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let target = Target { y: series.values(), comps: &s.comps, priors: &config.priors, flat: config.flat_likelihood };

    let center: Vec<f64> = s.center.iter().zip(&s.comps).map(|(x, c)| clamp_inside(*x, &config.priors, *c)).collect();
    let mut x = proposal.sample(&center, &mut rng)?;
    let (mut lp, mut quad) = target.eval(&x);
    let mut log_z = proposal.log_mass(&x);
    let n = series.len();
    let mut accepted = 0usize;
    let mut recorder = Recorder::new(config);
    let total = config.burn_in + config.iterations;
    for it in 1..=total {
        let prop = proposal.sample(&x, &mut rng)?;
        let (lp_prop, quad_prop) = target.eval(&prop);
        let log_z_prop = proposal.log_mass(&prop);
        let log_ratio = lp_prop - lp + log_z - log_z_prop;
        let u: f64 = rng.random();
        if u.ln() < log_ratio {
            x = prop;
            lp = lp_prop;
            quad = quad_prop;
            log_z = log_z_prop;
            accepted += 1;
        }
        let sigma2 = if config.flat_likelihood {
            sample_inverse_gamma(config.priors.alpha, config.priors.beta, &mut rng)
        } else {
            let (shape, scale) = sigma2_conditional_params(quad, n, &config.priors);
            sample_inverse_gamma(shape, scale, &mut rng)
        };
        let (d, phi, theta) = target.dpt(&x);
        recorder.offer(it, d, phi, theta, sigma2)?;
    }
    Ok(PosteriorDraws {
        order: config.order,
        draws: recorder.draws,
        index: recorder.index,
        acceptance: vec![BlockAcceptance { block: "joint".into(), rate: accepted as f64 / total as f64 }],
        provenance: Provenance::McmcSimultaneous,
    })
}

/// Pull a starting value strictly inside the prior box.
pub(super) fn clamp_inside(x: f64, priors: &Priors, c: Component) -> f64 {
    let (lo, hi) = super::bounds_of(priors, c);
    let margin = 1e-3 * (hi - lo);
    x.clamp(lo + margin, hi - margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmc::ProposalCov;
    use crate::params::{ArfimaParams, ModelOrder};
    use crate::simulate::simulate_arfima;

    fn short_config(seed: u64) -> McmcConfig {
        McmcConfig {
            order: ModelOrder::Arfima0d1,
            iterations: 400,
            thin: 4,
            seed,
            ..McmcConfig::default()
        }
    }

    #[test]
    fn same_seed_same_chain() {
        let p = ArfimaParams::new(0.2, None, Some(0.2), 1.0).unwrap();
        let y = simulate_arfima(&p, 200, 1).unwrap();
        let a = run_simultaneous_mcmc(&y, &short_config(3)).unwrap();
        let b = run_simultaneous_mcmc(&y, &short_config(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(a.draws.iter().all(|d| d.in_support()));
    }

    #[test]
    fn flat_likelihood_targets_prior() {
        let y = simulate_arfima(&ArfimaParams::white_noise(1.0), 100, 2).unwrap();
        let cfg = McmcConfig {
            order: ModelOrder::Arfima0d0,
            iterations: 20_000,
            thin: 10,
            seed: 5,
            flat_likelihood: true,
            proposal: ProposalCov::Fixed { cov: vec![vec![0.09]] },
            start: Some(ArfimaParams::white_noise(1.0)),
            ..McmcConfig::default()
        };
        let draws = run_simultaneous_mcmc(&y, &cfg).unwrap();
        let d = draws.component(Component::D);
        let (_, p) = crate::stats::ks_one_sample(&d, |x| (x + 0.5).clamp(0.0, 1.0));
        assert!(p > 0.01, "KS p = {p}");
    }
}
