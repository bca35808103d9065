//! Posterior samples and their summaries.

use serde::{Deserialize, Serialize};

use crate::params::{ArfimaParams, Component, ModelOrder};
use crate::stats::{mean, quantile_linear, std_dev};

/// Where a set of draws came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    McmcSimultaneous,
    McmcFiltered,
    Abc { variant: u8 },
    PointMass,
}

impl Provenance {
    pub fn label(self) -> String {
        match self {
            Provenance::McmcSimultaneous => "mcmc-simultaneous".into(),
            Provenance::McmcFiltered => "mcmc-filtered".into(),
            Provenance::Abc { variant } => format!("abc-h{variant}"),
            Provenance::PointMass => "point-mass".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockAcceptance {
    pub block: String,
    pub rate: f64,
}

/// Ordered posterior draws. `index` holds the chain iteration (MCMC) or the simulation index
/// (ABC) of each draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorDraws {
    pub order: ModelOrder,
    pub draws: Vec<ArfimaParams>,
    pub index: Vec<usize>,
    pub acceptance: Vec<BlockAcceptance>,
    pub provenance: Provenance,
}

/// Mean, standard deviation and equal-tailed 90% interval of one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub mean: f64,
    pub sd: f64,
    pub lb: f64,
    pub ub: f64,
}

impl ComponentSummary {
    pub fn covers(&self, truth: f64) -> bool {
        self.lb <= truth && truth <= self.ub
    }
}

impl PosteriorDraws {
    /// `count` copies of one parameter point.
    pub fn point_mass(params: ArfimaParams, count: usize) -> Self {
        PosteriorDraws {
            order: params.order(),
            draws: vec![params; count],
            index: (0..count).collect(),
            acceptance: Vec::new(),
            provenance: Provenance::PointMass,
        }
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Values of one component across draws (empty if the order lacks it).
    pub fn component(&self, c: Component) -> Vec<f64> {
        self.draws.iter().filter_map(|p| c.get(p)).collect()
    }

    pub fn summary(&self, c: Component) -> Option<ComponentSummary> {
        let x = self.component(c);
        if x.is_empty() {
            return None;
        }
        Some(ComponentSummary {
            mean: mean(&x),
            sd: if x.len() > 1 { std_dev(&x) } else { 0.0 },
            lb: quantile_linear(&x, 0.05),
            ub: quantile_linear(&x, 0.95),
        })
    }

    /// Componentwise posterior mean, or `None` if there are no draws.
    pub fn posterior_mean(&self) -> Option<ArfimaParams> {
        if self.draws.is_empty() {
            return None;
        }
        let m = |c: Component| mean(&self.component(c));
        Some(ArfimaParams {
            d: m(Component::D),
            phi: self.order.has_phi().then(|| m(Component::Phi)),
            theta: self.order.has_theta().then(|| m(Component::Theta)),
            sigma2: m(Component::Sigma2),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_summary() {
        let p = ArfimaParams::new(0.1, None, Some(0.3), 2.0).unwrap();
        let draws = PosteriorDraws::point_mass(p, 5);
        let s = draws.summary(Component::Theta).unwrap();
        assert_eq!((s.mean, s.sd, s.lb, s.ub), (0.3, 0.0, 0.3, 0.3));
        assert!(draws.summary(Component::Phi).is_none());
        assert_eq!(draws.posterior_mean().unwrap(), p);
    }
}
