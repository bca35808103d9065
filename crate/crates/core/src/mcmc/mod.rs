//! Exact posterior samplers: the simultaneous and the filtered Metropolis-within-Gibbs chains.

mod diagnostics;
mod filtered;
mod proposal;
mod simultaneous;

use serde::{Deserialize, Serialize};

pub use diagnostics::{dic, effective_sample_size, Dic};
pub use filtered::run_filtered_mcmc;
pub use proposal::TruncatedNormal;
pub use simultaneous::run_simultaneous_mcmc;

use crate::draws::PosteriorDraws;
use crate::error::{Error, Result};
use crate::filter::frac_diff;
use crate::likelihood::Priors;
use crate::mle::{fit_arma_mle, fit_mle, MleFit};
use crate::params::{ArfimaParams, Component, ModelOrder, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[default]
    Simultaneous,
    Filtered,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simultaneous" => Ok(Algorithm::Simultaneous),
            "filtered" => Ok(Algorithm::Filtered),
            _ => Err(Error::Input(format!("unknown sampler `{s}` (expected simultaneous or filtered)"))),
        }
    }
}

/// Source of the random-walk proposal covariance over the free (d, phi, theta) components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ProposalCov {
    /// Asymptotic covariance of the maximum-likelihood fit.
    #[default]
    Mle,
    /// Explicit covariance in component order (d, phi, theta), restricted to the model order.
    Fixed { cov: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    pub algorithm: Algorithm,
    pub order: ModelOrder,
    pub iterations: usize,
    pub thin: usize,
    pub burn_in: usize,
    pub priors: Priors,
    pub seed: u64,
    /// Standard deviation of the d random walk in the filtered sampler.
    pub sigma_d: f64,
    pub proposal: ProposalCov,
    /// Centre of the initial draw; defaults to the maximum-likelihood estimate.
    pub start: Option<ArfimaParams>,
    /// Replace the likelihood by a constant so the chain targets the prior.
    pub flat_likelihood: bool,
    /// Filtered sampler only: update (phi, theta). Disabling it freezes them at the start.
    pub arma_block: bool,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            algorithm: Algorithm::Simultaneous,
            order: ModelOrder::Arfima1d1,
            iterations: 50_000,
            thin: 50,
            burn_in: 0,
            priors: Priors::study(),
            seed: 0,
            sigma_d: 0.025,
            proposal: ProposalCov::Mle,
            start: None,
            flat_likelihood: false,
            arma_block: true,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 || self.iterations < self.thin {
            return Err(Error::Input(format!(
                "need iterations >= thin >= 1 (iterations={}, thin={})",
                self.iterations, self.thin
            )));
        }
        if !(self.sigma_d > 0.0) {
            return Err(Error::Input("sigma_d must be positive".into()));
        }
        Ok(())
    }
}

/// Run whichever sampler the configuration names.
pub fn run_mcmc(series: &Series, config: &McmcConfig) -> Result<PosteriorDraws> {
    match config.algorithm {
        Algorithm::Simultaneous => run_simultaneous_mcmc(series, config),
        Algorithm::Filtered => run_filtered_mcmc(series, config),
    }
}

const FALLBACK_SD: [f64; 3] = [0.02, 0.05, 0.05];

fn free_components(order: ModelOrder) -> Vec<Component> {
    Component::for_order(order).into_iter().filter(|c| *c != Component::Sigma2).collect()
}

fn component_slot(c: Component) -> usize {
    match c {
        Component::D => 0,
        Component::Phi => 1,
        Component::Theta => 2,
        Component::Sigma2 => unreachable!("sigma2 is not a random-walk component"),
    }
}

fn bounds_of(priors: &Priors, c: Component) -> (f64, f64) {
    match c {
        Component::D => priors.d_bounds,
        Component::Phi => priors.phi_bounds,
        Component::Theta => priors.theta_bounds,
        Component::Sigma2 => unreachable!(),
    }
}

fn fallback_cov(comps: &[Component]) -> Vec<Vec<f64>> {
    let k = comps.len();
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { FALLBACK_SD[component_slot(comps[i])].powi(2) } else { 0.0 }).collect())
        .collect()
}

/// Restrict a (d, phi, theta)-ordered covariance (or one already matching `comps`) to `comps`.
fn restrict_fixed(cov: &[Vec<f64>], full: &[Component], comps: &[Component]) -> Result<Vec<Vec<f64>>> {
    let idx: Vec<usize> = if cov.len() == comps.len() {
        (0..comps.len()).collect()
    } else if cov.len() == 3 {
        comps.iter().map(|c| component_slot(*c)).collect()
    } else if cov.len() == full.len() {
        comps.iter().map(|c| full.iter().position(|f| f == c).expect("sub-component")).collect()
    } else {
        return Err(Error::Input(format!(
            "proposal covariance is {}x{}, expected {} or 3",
            cov.len(),
            cov.len(),
            comps.len()
        )));
    };
    Ok(idx.iter().map(|&i| idx.iter().map(|&j| cov[i][j]).collect()).collect())
}

/// The MLE's covariance over `comps`, if it is usable as a proposal.
fn mle_cov(fit: &MleFit, comps: &[Component]) -> Option<Vec<Vec<f64>>> {
    let idx: Option<Vec<usize>> = comps.iter().map(|c| fit.components.iter().position(|f| f == c)).collect();
    let idx = idx?;
    let m: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| fit.cov[(i, j)]).collect()).collect();
    crate::stats::cholesky_small(&m).map(|_| m)
}

/// Starting centre and the proposal covariance over the free components.
struct Setup {
    comps: Vec<Component>,
    center: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

fn point_of(p: &ArfimaParams, comps: &[Component]) -> Vec<f64> {
    comps.iter().map(|c| c.get(p).unwrap_or(0.0)).collect()
}

fn setup(series: &Series, config: &McmcConfig, comps: Vec<Component>) -> Result<Setup> {
    let all = free_components(config.order);
    let need_mle = config.start.is_none() || config.proposal == ProposalCov::Mle;
    let fit = if need_mle {
        match fit_mle(series, config.order) {
            Ok(f) => Some(f),
            Err(e) => {
                log::warn!("maximum-likelihood fit failed ({e}); using default proposal scales");
                None
            }
        }
    } else {
        None
    };
    let center = match (&config.start, &fit) {
        (Some(p), _) => point_of(p, &comps),
        (None, Some(f)) => point_of(&f.params, &comps),
        (None, None) => vec![0.0; comps.len()],
    };
    let cov = match &config.proposal {
        ProposalCov::Fixed { cov } => restrict_fixed(cov, &all, &comps)?,
        ProposalCov::Mle => match fit.as_ref().and_then(|f| mle_cov(f, &comps)) {
            Some(c) => c,
            None => {
                log::warn!("maximum-likelihood covariance unusable; using default proposal scales");
                fallback_cov(&comps)
            }
        },
    };
    Ok(Setup { comps, center, cov })
}

/// ARMA proposal covariance for the filtered sampler, from the ARMA fit of the series
/// fractionally differenced at `d0`.
fn arma_setup(series: &Series, config: &McmcConfig, d0: f64, comps: &[Component]) -> Result<Vec<Vec<f64>>> {
    let all = free_components(config.order);
    match &config.proposal {
        ProposalCov::Fixed { cov } => restrict_fixed(cov, &all, comps),
        ProposalCov::Mle => {
            let u = frac_diff(series, d0).demean();
            let fit = fit_arma_mle(&u, config.order);
            match fit.ok().as_ref().and_then(|f| mle_cov(f, comps)) {
                Some(c) => Ok(c),
                None => {
                    log::warn!("ARMA fit of the differenced series unusable; using default proposal scales");
                    Ok(fallback_cov(comps))
                }
            }
        }
    }
}

fn box_of(priors: &Priors, comps: &[Component]) -> (Vec<f64>, Vec<f64>) {
    comps.iter().map(|c| bounds_of(priors, *c)).unzip()
}

fn require_demeaned(series: &Series) -> Result<()> {
    if series.is_demeaned() {
        Ok(())
    } else {
        Err(Error::Input("series must be demeaned".into()))
    }
}

/// Collects thinned draws after burn-in.
struct Recorder {
    burn_in: usize,
    thin: usize,
    order: ModelOrder,
    draws: Vec<ArfimaParams>,
    index: Vec<usize>,
}

impl Recorder {
    fn new(config: &McmcConfig) -> Self {
        let cap = config.iterations / config.thin;
        Recorder {
            burn_in: config.burn_in,
            thin: config.thin,
            order: config.order,
            draws: Vec::with_capacity(cap),
            index: Vec::with_capacity(cap),
        }
    }

    /// `iteration` counts from 1 and includes burn-in.
    fn offer(&mut self, iteration: usize, d: f64, phi: f64, theta: f64, sigma2: f64) -> Result<()> {
        if iteration > self.burn_in && (iteration - self.burn_in) % self.thin == 0 {
            self.draws.push(ArfimaParams::with_order(self.order, d, phi, theta, sigma2)?);
            self.index.push(iteration - self.burn_in);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_covariance_restriction() {
        let full = vec![vec![1.0, 0.1, 0.2], vec![0.1, 2.0, 0.3], vec![0.2, 0.3, 3.0]];
        let all = free_components(ModelOrder::Arfima1d1);
        let sub = restrict_fixed(&full, &all, &[Component::D, Component::Theta]).unwrap();
        assert_eq!(sub, vec![vec![1.0, 0.2], vec![0.2, 3.0]]);
        let arma = restrict_fixed(&full, &all, &[Component::Phi, Component::Theta]).unwrap();
        assert_eq!(arma, vec![vec![2.0, 0.3], vec![0.3, 3.0]]);
    }

    #[test]
    fn config_rejects_thin_above_iterations() {
        let c = McmcConfig { iterations: 10, thin: 50, ..McmcConfig::default() };
        assert!(c.validate().is_err());
    }
}
