//! Simulation-study harness: replicate series over a parameter grid, fit every estimator and
//! aggregate Mean / LB / UB / Coverage / SD / RMSE / ESS per parameter, plus forecast metrics.

use std::fmt::Write as _;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abc::{run_abc, AbcConfig, SummaryVariant};
use crate::draws::{ComponentSummary, PosteriorDraws};
use crate::error::{Error, Result};
use crate::forecast::posterior_predictive_paths;
use crate::mcmc::{effective_sample_size, run_mcmc, Algorithm, McmcConfig};
use crate::mle::fit_mle;
use crate::params::{ArfimaParams, Component, Series};
use crate::simulate::simulate_arfima;

/// 5% / 95% normal quantile used for the frequentist 90% intervals.
const Z90: f64 = 1.644_853_626_951_472_2;
/// A cell is flagged when more than this fraction of its rep-estimator fits failed.
const SKIP_FLAG_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    McmcSimultaneous,
    McmcFiltered,
    AbcH1,
    AbcH2,
    AbcH3,
    Mle,
}

impl Estimator {
    /// Row label in the Markdown tables.
    pub fn label(self) -> &'static str {
        match self {
            Estimator::McmcSimultaneous => "MCMC",
            Estimator::McmcFiltered => "MCMC Filter",
            Estimator::AbcH1 => "ABC FP",
            Estimator::AbcH2 => "ABC 20P",
            Estimator::AbcH3 => "ABC LogP",
            Estimator::Mle => "Frequentist",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Estimator::McmcSimultaneous => "mcmc-simultaneous",
            Estimator::McmcFiltered => "mcmc-filtered",
            Estimator::AbcH1 => "abc-h1",
            Estimator::AbcH2 => "abc-h2",
            Estimator::AbcH3 => "abc-h3",
            Estimator::Mle => "mle",
        }
    }

    fn abc_variant(self) -> Option<SummaryVariant> {
        match self {
            Estimator::AbcH1 => Some(SummaryVariant::Full),
            Estimator::AbcH2 => Some(SummaryVariant::First20),
            Estimator::AbcH3 => Some(SummaryVariant::PooledLog),
            _ => None,
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Estimator::McmcSimultaneous,
            Estimator::McmcFiltered,
            Estimator::AbcH1,
            Estimator::AbcH2,
            Estimator::AbcH3,
            Estimator::Mle,
        ]
        .into_iter()
        .find(|e| e.key() == s)
        .ok_or_else(|| Error::Input(format!("unknown estimator `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    /// True parameter points; the model order of each cell is implied by its coefficients.
    pub grid: Vec<ArfimaParams>,
    pub reps: usize,
    pub n: usize,
    /// Forecast horizon b; each replicate is simulated with length n + b.
    pub horizon: usize,
    pub seed: u64,
    /// Number of replicate jobs run concurrently.
    pub workers: usize,
    pub estimators: Vec<Estimator>,
    /// Sampler settings; order, algorithm and seed are set per job.
    pub mcmc: McmcConfig,
    /// ABC settings; order, variant and seed are set per job.
    pub abc: AbcConfig,
    /// Number of plug-in forecast paths for the maximum-likelihood estimator.
    pub mle_forecast_paths: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            grid: vec![ArfimaParams { d: 0.2, phi: None, theta: Some(0.2), sigma2: 1.0 }],
            reps: 20,
            n: 1000,
            horizon: 15,
            seed: 0,
            workers: 1,
            estimators: vec![Estimator::McmcSimultaneous],
            mcmc: McmcConfig { iterations: 10_000, thin: 10, ..McmcConfig::default() },
            abc: AbcConfig::default(),
            mle_forecast_paths: 1000,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Input("reps must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Input(format!("series length n = {} is below 2", self.n)));
        }
        if self.grid.is_empty() || self.estimators.is_empty() {
            return Err(Error::Input("grid and estimator list must be non-empty".into()));
        }
        for (i, cell) in self.grid.iter().enumerate() {
            cell.validate().map_err(|e| Error::Input(format!("grid cell {i}: {e}")))?;
        }
        if self.estimators.iter().any(|e| matches!(e, Estimator::McmcSimultaneous | Estimator::McmcFiltered)) {
            self.mcmc.validate()?;
        }
        if self.estimators.iter().any(|e| e.abc_variant().is_some()) {
            self.abc.validate()?;
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `rep` in grid cell `cell`: depends on nothing else, so any cell or rep
/// can be re-run in isolation.
pub fn rep_seed(seed: u64, cell: usize, rep: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ cell as u64) ^ rep as u64)
}

fn sub_seed(rep_seed: u64, stream: u64) -> u64 {
    splitmix64(rep_seed ^ splitmix64(stream.wrapping_add(1)))
}

/// Per-rep, per-estimator, per-component summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepSummary {
    pub cell: usize,
    pub rep: usize,
    pub estimator: Estimator,
    pub component: Component,
    pub mean: f64,
    pub sd: f64,
    pub lb: f64,
    pub ub: f64,
    pub ess: Option<f64>,
    pub accepted: Option<usize>,
}

/// Forecast errors of one rep-estimator fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepForecast {
    pub cell: usize,
    pub rep: usize,
    pub estimator: Estimator,
    /// Per-step (mean - truth).
    pub errors: Vec<f64>,
    /// Per-step predictive standard deviation.
    pub sd: Vec<f64>,
    /// Per-step interval coverage of the true value.
    pub covered: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFit {
    pub cell: usize,
    pub rep: usize,
    pub estimator: Estimator,
    pub reason: String,
}

/// One line of the parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub cell: usize,
    pub truth: ArfimaParams,
    pub component: Component,
    pub estimator: Estimator,
    pub mean: f64,
    pub lb: f64,
    pub ub: f64,
    pub coverage: f64,
    pub sd: f64,
    pub rmse: f64,
    /// Mean effective sample size (MCMC) or mean accepted count (ABC).
    pub ess_or_accepted: Option<f64>,
    pub reps_used: usize,
    pub skipped: usize,
    /// More than 10% of the reps failed for this estimator.
    pub flagged: bool,
}

/// One line of the forecast table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRow {
    pub cell: usize,
    pub truth: ArfimaParams,
    pub estimator: Estimator,
    pub rmse: f64,
    pub sd: f64,
    pub coverage: f64,
    pub reps_used: usize,
    pub skipped: usize,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub rows: Vec<MetricsRow>,
    pub forecasts: Vec<ForecastRow>,
    pub reps: Vec<RepSummary>,
    pub rep_forecasts: Vec<RepForecast>,
    pub skipped: Vec<SkippedFit>,
}

struct FitOutcome {
    summaries: Vec<RepSummary>,
    forecast: Option<RepForecast>,
}

/// Map `f` over `0..jobs` on up to `workers` threads; results come back in job order.
fn parallel_map<T: Send>(jobs: usize, workers: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let workers = workers.clamp(1, jobs.max(1));
    if workers == 1 {
        return (0..jobs).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                if j >= jobs {
                    break;
                }
                let out = f(j);
                slots.lock().expect("result slots")[j] = Some(out);
            });
        }
    });
    slots.into_inner().expect("result slots").into_iter().map(|o| o.expect("every job ran")).collect()
}

/// Simulate replicate `rep` of `cell`: the demeaned fitting series (first n points) and the
/// following `horizon` points on the same centring.
pub fn replicate(config: &StudyConfig, cell: usize, rep: usize) -> Result<(Series, Vec<f64>)> {
    let truth = &config.grid[cell];
    let full = simulate_arfima(truth, config.n + config.horizon, rep_seed(config.seed, cell, rep))?;
    let values = full.values();
    let m = crate::stats::mean(&values[..config.n]);
    let fit = Series::new(values[..config.n].to_vec())?.demean();
    let future = values[config.n..].iter().map(|v| v - m).collect();
    Ok((fit, future))
}

fn summarize_draws(
    draws: &PosteriorDraws,
    cell: usize,
    rep: usize,
    estimator: Estimator,
    accepted: Option<usize>,
) -> Vec<RepSummary> {
    Component::for_order(draws.order)
        .into_iter()
        .filter_map(|c| {
            let s = draws.summary(c)?;
            let ess = accepted.is_none().then(|| effective_sample_size(&draws.component(c)));
            Some(rep_summary(cell, rep, estimator, c, s, ess, accepted))
        })
        .collect()
}

fn rep_summary(
    cell: usize,
    rep: usize,
    estimator: Estimator,
    component: Component,
    s: ComponentSummary,
    ess: Option<f64>,
    accepted: Option<usize>,
) -> RepSummary {
    RepSummary { cell, rep, estimator, component, mean: s.mean, sd: s.sd, lb: s.lb, ub: s.ub, ess, accepted }
}

fn fit_one(
    config: &StudyConfig,
    cell: usize,
    rep: usize,
    k: usize,
    series: &Series,
    future: &[f64],
    want_forecast: bool,
) -> Result<FitOutcome> {
    let estimator = config.estimators[k];
    let order = config.grid[cell].order();
    let seed = sub_seed(rep_seed(config.seed, cell, rep), k as u64);
    let (draws, summaries) = match estimator {
        Estimator::McmcSimultaneous | Estimator::McmcFiltered => {
            let algorithm =
                if estimator == Estimator::McmcFiltered { Algorithm::Filtered } else { Algorithm::Simultaneous };
            let mc = McmcConfig { algorithm, order, seed, start: None, ..config.mcmc.clone() };
            let draws = run_mcmc(series, &mc)?;
            let s = summarize_draws(&draws, cell, rep, estimator, None);
            (draws, s)
        }
        Estimator::AbcH1 | Estimator::AbcH2 | Estimator::AbcH3 => {
            let variant = estimator.abc_variant().expect("abc estimator");
            let ac = AbcConfig { order, variant, seed, scratch: None, ..config.abc.clone() };
            let run = run_abc(series, &ac)?;
            if run.draws.is_empty() {
                return Err(Error::Numerical("no ABC acceptances".into()));
            }
            let s = summarize_draws(&run.draws, cell, rep, estimator, Some(run.accepted()));
            (run.draws, s)
        }
        Estimator::Mle => {
            let fit = fit_mle(series, order)?;
            let s = Component::for_order(order)
                .into_iter()
                .map(|c| {
                    let est = c.get(&fit.params).expect("component of the fitted order");
                    let se = fit.std_error(c).unwrap_or(f64::NAN);
                    let (lb, ub) = (est - Z90 * se, est + Z90 * se);
                    rep_summary(cell, rep, estimator, c, ComponentSummary { mean: est, sd: se, lb, ub }, None, None)
                })
                .collect();
            (PosteriorDraws::point_mass(fit.params, config.mle_forecast_paths.max(1)), s)
        }
    };
    let forecast = if want_forecast && config.horizon > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, u64::MAX));
        let fd = posterior_predictive_paths(series, &draws, config.horizon, &mut rng)?;
        Some(RepForecast {
            cell,
            rep,
            estimator,
            errors: fd.mean.iter().zip(future).map(|(m, t)| m - t).collect(),
            sd: fd.sd.clone(),
            covered: future.iter().enumerate().map(|(i, t)| fd.lb[i] <= *t && *t <= fd.ub[i]).collect(),
        })
    } else {
        None
    };
    Ok(FitOutcome { summaries, forecast })
}

fn run(config: &StudyConfig, want_forecast: bool) -> Result<StudyReport> {
    config.validate()?;
    if want_forecast && config.horizon == 0 {
        return Err(Error::Input("forecast horizon must be at least 1".into()));
    }
    let jobs = config.grid.len() * config.reps;
    let outcomes = parallel_map(jobs, config.workers, |j| {
        let (cell, rep) = (j / config.reps, j % config.reps);
        let per_estimator: Vec<std::result::Result<FitOutcome, String>> = match replicate(config, cell, rep) {
            Ok((series, future)) => (0..config.estimators.len())
                .map(|k| fit_one(config, cell, rep, k, &series, &future, want_forecast).map_err(|e| e.to_string()))
                .collect(),
            Err(e) => config.estimators.iter().map(|_| Err(format!("simulation failed: {e}"))).collect(),
        };
        (cell, rep, per_estimator)
    });

    let mut report =
        StudyReport { rows: Vec::new(), forecasts: Vec::new(), reps: Vec::new(), rep_forecasts: Vec::new(), skipped: Vec::new() };
    for (cell, rep, per_estimator) in outcomes {
        for (k, outcome) in per_estimator.into_iter().enumerate() {
            match outcome {
                Ok(o) => {
                    report.reps.extend(o.summaries);
                    report.rep_forecasts.extend(o.forecast);
                }
                Err(reason) => {
                    let estimator = config.estimators[k];
                    log::warn!("cell {cell} rep {rep} {}: skipped ({reason})", estimator.key());
                    report.skipped.push(SkippedFit { cell, rep, estimator, reason });
                }
            }
        }
    }
    aggregate(config, &mut report);
    Ok(report)
}

fn aggregate(config: &StudyConfig, report: &mut StudyReport) {
    for (cell, truth) in config.grid.iter().enumerate() {
        for &estimator in &config.estimators {
            let skipped = report.skipped.iter().filter(|s| s.cell == cell && s.estimator == estimator).count();
            let flagged = skipped as f64 > SKIP_FLAG_FRACTION * config.reps as f64;
            if flagged {
                log::warn!("cell {cell} {}: {skipped} of {} reps skipped", estimator.key(), config.reps);
            }
            for c in Component::for_order(truth.order()) {
                let t = c.get(truth).expect("component of the cell order");
                let rs: Vec<&RepSummary> = report
                    .reps
                    .iter()
                    .filter(|r| r.cell == cell && r.estimator == estimator && r.component == c)
                    .collect();
                if rs.is_empty() {
                    continue;
                }
                let m = rs.len() as f64;
                let avg = |f: &dyn Fn(&RepSummary) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / m;
                let ess_or_accepted = if rs.iter().all(|r| r.accepted.is_some()) {
                    Some(avg(&|r| r.accepted.unwrap_or(0) as f64))
                } else if rs.iter().all(|r| r.ess.is_some()) {
                    Some(avg(&|r| r.ess.unwrap_or(0.0)))
                } else {
                    None
                };
                report.rows.push(MetricsRow {
                    cell,
                    truth: *truth,
                    component: c,
                    estimator,
                    mean: avg(&|r| r.mean),
                    lb: avg(&|r| r.lb),
                    ub: avg(&|r| r.ub),
                    coverage: avg(&|r| (r.lb <= t && t <= r.ub) as u8 as f64),
                    sd: avg(&|r| r.sd),
                    rmse: avg(&|r| (r.mean - t) * (r.mean - t)).sqrt(),
                    ess_or_accepted,
                    reps_used: rs.len(),
                    skipped,
                    flagged,
                });
            }
            let fs: Vec<&RepForecast> =
                report.rep_forecasts.iter().filter(|f| f.cell == cell && f.estimator == estimator).collect();
            if !fs.is_empty() {
                let steps = fs.iter().map(|f| f.errors.len()).sum::<usize>() as f64;
                report.forecasts.push(ForecastRow {
                    cell,
                    truth: *truth,
                    estimator,
                    rmse: (fs.iter().flat_map(|f| f.errors.iter()).map(|e| e * e).sum::<f64>() / steps).sqrt(),
                    sd: fs.iter().flat_map(|f| f.sd.iter()).sum::<f64>() / steps,
                    coverage: fs.iter().flat_map(|f| f.covered.iter()).filter(|c| **c).count() as f64 / steps,
                    reps_used: fs.len(),
                    skipped,
                    flagged,
                });
            }
        }
    }
}

/// Fit every estimator on every replicate and aggregate the parameter metrics.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    run(config, false)
}

/// As [`run_study`], additionally forecasting the held-out `horizon` points of each replicate.
pub fn forecast_study(config: &StudyConfig) -> Result<StudyReport> {
    run(config, true)
}

fn cell_label(p: &ArfimaParams) -> String {
    let mut s = format!("ARFIMA({}): d={}", p.order().label().replace('d', ",d,"), p.d);
    if let Some(phi) = p.phi {
        let _ = write!(s, ", phi={phi}");
    }
    if let Some(theta) = p.theta {
        let _ = write!(s, ", theta={theta}");
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Parameter table as CSV. Floats use the shortest representation that parses back exactly.
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "cell", "d", "phi", "theta", "sigma2", "parameter", "estimator", "mean", "lb", "ub", "coverage", "sd", "rmse",
        "ess_or_accepted", "reps_used", "skipped", "flagged",
    ])?;
    for r in rows {
        w.write_record([
            r.cell.to_string(),
            r.truth.d.to_string(),
            opt(r.truth.phi),
            opt(r.truth.theta),
            r.truth.sigma2.to_string(),
            r.component.name().to_string(),
            r.estimator.key().to_string(),
            r.mean.to_string(),
            r.lb.to_string(),
            r.ub.to_string(),
            r.coverage.to_string(),
            r.sd.to_string(),
            r.rmse.to_string(),
            opt(r.ess_or_accepted),
            r.reps_used.to_string(),
            r.skipped.to_string(),
            r.flagged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_forecast_csv<W: Write>(rows: &[ForecastRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cell", "d", "phi", "theta", "sigma2", "estimator", "rmse", "sd", "coverage", "reps_used", "skipped", "flagged"])?;
    for r in rows {
        w.write_record([
            r.cell.to_string(),
            r.truth.d.to_string(),
            opt(r.truth.phi),
            opt(r.truth.theta),
            r.truth.sigma2.to_string(),
            r.estimator.key().to_string(),
            r.rmse.to_string(),
            r.sd.to_string(),
            r.coverage.to_string(),
            r.reps_used.to_string(),
            r.skipped.to_string(),
            r.flagged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parameter table in the appendix layout, one section per cell.
pub fn metrics_markdown(rows: &[MetricsRow]) -> String {
    let mut s = String::new();
    let mut last = None;
    for r in rows {
        if last != Some(r.cell) {
            if last.is_some() {
                s.push('\n');
            }
            let _ = writeln!(s, "### {}\n", cell_label(&r.truth));
            s.push_str("| Par | Model | Mean | LB | UB | Coverage | SD | RMSE | ESS/m |\n");
            s.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|\n");
            last = Some(r.cell);
        }
        let flag = if r.flagged { " (!)" } else { "" };
        let _ = writeln!(
            s,
            "| {} | {}{} | {:.5} | {:.5} | {:.5} | {:.0}% | {:.5} | {:.5} | {} |",
            r.component.name(),
            r.estimator.label(),
            flag,
            r.mean,
            r.lb,
            r.ub,
            100.0 * r.coverage,
            r.sd,
            r.rmse,
            r.ess_or_accepted.map(|v| format!("{v:.0}")).unwrap_or_else(|| "-".into()),
        );
    }
    s
}

pub fn forecast_markdown(rows: &[ForecastRow]) -> String {
    let mut s = String::from("| Method | RMSE | SD | Coverage |\n|---|---:|---:|---:|\n");
    let mut last = None;
    for r in rows {
        if last != Some(r.cell) {
            let _ = writeln!(s, "| **{}** | | | |", cell_label(&r.truth));
            last = Some(r.cell);
        }
        let flag = if r.flagged { " (!)" } else { "" };
        let _ = writeln!(s, "| {}{} | {:.5} | {:.5} | {:.5} |", r.estimator.label(), flag, r.rmse, r.sd, r.coverage);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(estimators: Vec<Estimator>) -> StudyConfig {
        StudyConfig {
            grid: vec![ArfimaParams::new(0.2, None, Some(0.2), 1.0).unwrap()],
            reps: 2,
            n: 200,
            horizon: 5,
            seed: 11,
            estimators,
            mcmc: McmcConfig { iterations: 400, thin: 4, ..McmcConfig::default() },
            mle_forecast_paths: 50,
            ..StudyConfig::default()
        }
    }

    #[test]
    fn single_rep_mle_row_is_the_estimate() {
        let cfg = StudyConfig { reps: 1, ..tiny(vec![Estimator::Mle]) };
        let report = run_study(&cfg).unwrap();
        let (series, _) = replicate(&cfg, 0, 0).unwrap();
        let fit = fit_mle(&series, cfg.grid[0].order()).unwrap();
        let row = report.rows.iter().find(|r| r.component == Component::D).unwrap();
        assert_eq!(row.mean, fit.params.d);
        assert_eq!(row.rmse, (fit.params.d - 0.2).abs());
    }

    #[test]
    fn rmse_dominates_bias_and_interval_brackets_mean() {
        let report = run_study(&tiny(vec![Estimator::Mle, Estimator::McmcSimultaneous])).unwrap();
        assert_eq!(report.rows.len(), 2 * 3);
        for r in &report.rows {
            let t = r.component.get(&r.truth).unwrap();
            assert!(r.rmse + 1e-15 >= (r.mean - t).abs());
            assert!(r.lb <= r.mean && r.mean <= r.ub);
            assert!((0.0..=1.0).contains(&r.coverage));
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let a = forecast_study(&tiny(vec![Estimator::Mle])).unwrap();
        let b = forecast_study(&StudyConfig { workers: 3, ..tiny(vec![Estimator::Mle]) }).unwrap();
        let bytes = |r: &StudyReport| {
            let mut v = Vec::new();
            write_metrics_csv(&r.rows, &mut v).unwrap();
            write_forecast_csv(&r.forecasts, &mut v).unwrap();
            v
        };
        assert_eq!(bytes(&a), bytes(&b));
        assert_eq!(a.forecasts.len(), 1);
    }

    #[test]
    fn rep_seeds_are_independent_of_grid_size() {
        assert_eq!(rep_seed(5, 2, 3), rep_seed(5, 2, 3));
        assert_ne!(rep_seed(5, 2, 3), rep_seed(5, 3, 2));
    }

    #[test]
    fn estimator_keys_parse() {
        for e in [Estimator::McmcFiltered, Estimator::AbcH3, Estimator::Mle] {
            assert_eq!(e.key().parse::<Estimator>().unwrap(), e);
        }
        let json = serde_json::to_string(&Estimator::AbcH2).unwrap();
        assert_eq!(json, "\"abc-h2\"");
    }
}
