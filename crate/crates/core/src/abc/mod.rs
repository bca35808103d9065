//! Rejection ABC with periodogram-based summaries.
//!
//! Every simulation draws parameters from the prior, simulates a series of the observed length
//! and records three distances to the observed summaries: a long-memory distance (full
//! periodogram, its first 20 ordinates, or the pooled log-periodogram), an ARMA-estimate
//! distance and a sample-variance distance. After all simulations each distance gets a
//! quantile threshold and a record is accepted when all three fall strictly below theirs.

mod driver;
mod scratch;
mod summaries;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use driver::CHUNK;
pub use scratch::{read_scratch, read_scratch_at, ScratchWriter, RECORD_BYTES};
pub use summaries::{abc_distances, SummarySettings, SummaryStats};

use crate::draws::{PosteriorDraws, Provenance};
use crate::error::{Error, Result};
use crate::filter::frac_diff;
use crate::likelihood::Priors;
use crate::mle::{fit_arma_mle, fit_mle};
use crate::params::{ArfimaParams, ModelOrder, Series};
use crate::spectral::PeriodogramPlan;
use crate::stats::quantile_nearest_rank;

/// Long-memory summary used for the first distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SummaryVariant {
    /// Every periodogram ordinate below pi.
    #[serde(rename = "h1")]
    Full,
    /// The first 20 ordinates, starting at frequency zero.
    #[default]
    #[serde(rename = "h2")]
    First20,
    /// The pooled log-periodogram.
    #[serde(rename = "h3")]
    PooledLog,
}

impl SummaryVariant {
    pub fn number(self) -> u8 {
        match self {
            SummaryVariant::Full => 1,
            SummaryVariant::First20 => 2,
            SummaryVariant::PooledLog => 3,
        }
    }
}

impl std::str::FromStr for SummaryVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "h1" => Ok(SummaryVariant::Full),
            "2" | "h2" => Ok(SummaryVariant::First20),
            "3" | "h3" => Ok(SummaryVariant::PooledLog),
            _ => Err(Error::Input(format!("unknown summary variant `{s}` (expected 1, 2 or 3)"))),
        }
    }
}

/// How the ARMA coefficients entering the second distance are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ArmaSummary {
    /// Joint ARFIMA estimate, reporting (phi, theta).
    #[default]
    Arfima,
    /// ARMA estimate after fractional differencing at the proposed (or estimated) d.
    Filtered,
}

/// Estimator applied to the observed series for the ARMA distance. Simulated series always use
/// the Whittle estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ObservedArma {
    #[default]
    Whittle,
    /// Exact Gaussian maximum likelihood.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AbcConfig {
    pub order: ModelOrder,
    /// Number of simulations M.
    pub simulations: usize,
    /// Quantile for the long-memory and ARMA thresholds.
    pub q: f64,
    /// Quantile for the variance threshold.
    pub q_sigma2: f64,
    pub variant: SummaryVariant,
    pub priors: Priors,
    pub seed: u64,
    pub worker_count: usize,
    pub arma_summary: ArmaSummary,
    pub observed_arma: ObservedArma,
    /// Pooling factor J and trimming l of the pooled log-periodogram.
    pub pool: usize,
    pub trim: usize,
    /// Spill records to this file instead of keeping parameters in memory.
    pub scratch: Option<PathBuf>,
}

impl Default for AbcConfig {
    fn default() -> Self {
        AbcConfig {
            order: ModelOrder::Arfima1d1,
            simulations: 100_000,
            q: 0.01,
            q_sigma2: 0.5,
            variant: SummaryVariant::First20,
            priors: Priors::study(),
            seed: 0,
            worker_count: 1,
            arma_summary: ArmaSummary::Arfima,
            observed_arma: ObservedArma::Whittle,
            pool: 2,
            trim: 0,
            scratch: None,
        }
    }
}

impl AbcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::Input(format!("q = {} must lie in (0, 1]", self.q)));
        }
        if !(self.q_sigma2 > 0.0 && self.q_sigma2 <= 1.0) {
            return Err(Error::Input(format!("q_sigma2 = {} must lie in (0, 1]", self.q_sigma2)));
        }
        if self.simulations < 1000 {
            return Err(Error::Input(format!("need at least 1000 simulations, got {}", self.simulations)));
        }
        if self.pool == 0 {
            return Err(Error::Input("pooling factor must be positive".into()));
        }
        Ok(())
    }

    pub fn summary_settings(&self) -> SummarySettings {
        SummarySettings { order: self.order, pool: self.pool, trim: self.trim, arma: self.arma_summary }
    }
}

/// One simulation: the prior draw and its three distances (H_h, H_ARMA, H_sigma2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcRecord {
    pub params: ArfimaParams,
    pub distances: [f64; 3],
}

/// Acceptance thresholds (epsilon_h, epsilon_ARMA, epsilon_sigma2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub h: f64,
    pub arma: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcRun {
    pub draws: PosteriorDraws,
    pub thresholds: Thresholds,
    pub simulations: usize,
    /// Simulations where circulant embedding failed and the exact fallback was used.
    pub simulator_fallbacks: usize,
}

impl AbcRun {
    pub fn accepted(&self) -> usize {
        self.draws.len()
    }
}

/// Summaries of the observed (demeaned) series.
pub fn observed_summaries(series: &Series, config: &AbcConfig) -> Result<SummaryStats> {
    if !series.is_demeaned() {
        return Err(Error::Input("series must be demeaned".into()));
    }
    let y = series.values();
    let n = y.len();
    let ordinates = PeriodogramPlan::new(n).half(y);
    let settings = config.summary_settings();
    let order = config.order;
    match config.observed_arma {
        ObservedArma::Whittle => {
            let d_hat = crate::mle::fit_whittle(series, order)?.d;
            Ok(summaries::summarize_ordinates(y, ordinates, &settings, d_hat))
        }
        ObservedArma::Exact => {
            let fit = fit_mle(series, order)?;
            let mut s = summaries::summarize_ordinates(y, ordinates, &SummarySettings { order: ModelOrder::Arfima0d0, ..settings }, 0.0);
            let arma_params = match config.arma_summary {
                ArmaSummary::Arfima => fit.params,
                ArmaSummary::Filtered => fit_arma_mle(&frac_diff(series, fit.params.d).demean(), order)?.params,
            };
            s.arma = [arma_params.phi, arma_params.theta].into_iter().flatten().collect();
            Ok(s)
        }
    }
}

/// Run every simulation and return the records in global simulation order.
pub fn abc_parallel_driver(series: &Series, config: &AbcConfig) -> Result<Vec<AbcRecord>> {
    if config.simulations == 0 {
        return Ok(Vec::new());
    }
    let observed = observed_summaries(series, config)?;
    let mut out = Vec::with_capacity(config.simulations);
    driver::drive(series.len(), &observed, config, |mut chunk| {
        out.append(&mut chunk);
        Ok(())
    })?;
    Ok(out)
}

fn threshold(x: &[f64], q: f64) -> f64 {
    if q >= 1.0 {
        f64::INFINITY
    } else {
        quantile_nearest_rank(x, q)
    }
}

/// Nearest-rank quantile thresholds. With no ARMA coefficients the ARMA distance is ignored.
pub fn thresholds(distances: &[[f64; 3]], q: f64, q_sigma2: f64, use_arma: bool) -> Thresholds {
    let col = |k: usize| distances.iter().map(|d| d[k]).collect::<Vec<_>>();
    Thresholds {
        h: threshold(&col(0), q),
        arma: if use_arma { threshold(&col(1), q) } else { f64::INFINITY },
        sigma2: threshold(&col(2), q_sigma2),
    }
}

/// Positions of records whose three distances are all strictly below the thresholds.
pub fn accepted_positions(distances: &[[f64; 3]], t: &Thresholds) -> Vec<usize> {
    distances
        .iter()
        .enumerate()
        .filter(|(_, d)| d[0] < t.h && d[1] < t.arma && d[2] < t.sigma2)
        .map(|(i, _)| i)
        .collect()
}

/// Threshold an existing record set.
pub fn accept_records(records: &[AbcRecord], order: ModelOrder, variant: SummaryVariant, q: f64, q_sigma2: f64) -> AbcRun {
    let distances: Vec<[f64; 3]> = records.iter().map(|r| r.distances).collect();
    let t = thresholds(&distances, q, q_sigma2, order.arma_dim() > 0);
    let pos = accepted_positions(&distances, &t);
    AbcRun {
        draws: PosteriorDraws {
            order,
            draws: pos.iter().map(|&i| records[i].params).collect(),
            index: pos,
            acceptance: Vec::new(),
            provenance: Provenance::Abc { variant: variant.number() },
        },
        thresholds: t,
        simulations: records.len(),
        simulator_fallbacks: 0,
    }
}

/// Rejection ABC. An empty acceptance set is returned as empty draws, with a warning.
pub fn run_abc(series: &Series, config: &AbcConfig) -> Result<AbcRun> {
    config.validate()?;
    let observed = observed_summaries(series, config)?;
    let mut distances: Vec<[f64; 3]> = Vec::with_capacity(config.simulations);
    let mut params: Vec<ArfimaParams> = Vec::new();
    let mut writer = match &config.scratch {
        Some(path) => Some(ScratchWriter::create(path)?),
        None => {
            params.reserve(config.simulations);
            None
        }
    };
    let fallbacks = driver::drive(series.len(), &observed, config, |chunk| {
        for r in &chunk {
            distances.push(r.distances);
            match writer.as_mut() {
                Some(w) => w.push(r)?,
                None => params.push(r.params),
            }
        }
        Ok(())
    })?;
    if let Some(w) = writer {
        w.finish()?;
    }
    let t = thresholds(&distances, config.q, config.q_sigma2, config.order.arma_dim() > 0);
    let pos = accepted_positions(&distances, &t);
    let accepted: Vec<ArfimaParams> = match &config.scratch {
        Some(path) => read_scratch_at(path, &pos)?.into_iter().map(|r| r.params).collect(),
        None => pos.iter().map(|&i| params[i]).collect(),
    };
    if accepted.is_empty() {
        log::warn!("no simulation fell inside all three thresholds");
    }
    if fallbacks > 0 {
        log::info!("{fallbacks} simulations used the exact fallback simulator");
    }
    Ok(AbcRun {
        draws: PosteriorDraws {
            order: config.order,
            draws: accepted,
            index: pos,
            acceptance: Vec::new(),
            provenance: Provenance::Abc { variant: config.variant.number() },
        },
        thresholds: t,
        simulations: distances.len(),
        simulator_fallbacks: fallbacks,
    })
}
