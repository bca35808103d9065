use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::summaries::{abc_distances, summarize_ordinates, SummaryStats};
use super::{AbcConfig, AbcRecord};
use crate::error::{Error, Result};
use crate::likelihood::Priors;
use crate::params::{ArfimaParams, ModelOrder};
use crate::simulate::CirculantSimulator;
use crate::spectral::PeriodogramPlan;
use crate::stats::sample_inverse_gamma;

/// Simulations per chunk. Each chunk has its own random stream, so the records do not depend
/// on how chunks are spread over workers.
pub const CHUNK: usize = 1000;

/// Draw (d, phi, theta, sigma2) from the priors, components in that order.
pub(crate) fn draw_prior<R: Rng + ?Sized>(priors: &Priors, order: ModelOrder, rng: &mut R) -> ArfimaParams {
    loop {
        let d = rng.random_range(priors.d_bounds.0..priors.d_bounds.1);
        let phi = order.has_phi().then(|| rng.random_range(priors.phi_bounds.0..priors.phi_bounds.1));
        let theta = order.has_theta().then(|| rng.random_range(priors.theta_bounds.0..priors.theta_bounds.1));
        let sigma2 = sample_inverse_gamma(priors.alpha, priors.beta, rng);
        let p = ArfimaParams { d, phi, theta, sigma2 };
        // The half-open ranges can return the lower edge, which the open support excludes.
        if p.in_support() && priors.contains(d, phi, theta) {
            return p;
        }
    }
}

pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

struct Workspace {
    sim: CirculantSimulator,
    plan: PeriodogramPlan,
}

fn simulate_chunk(
    chunk: usize,
    count: usize,
    n: usize,
    observed: &SummaryStats,
    config: &AbcConfig,
    ws: &mut Workspace,
) -> Result<Vec<AbcRecord>> {
    let mut rng = chunk_rng(config.seed, chunk);
    let settings = config.summary_settings();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let params = draw_prior(&config.priors, config.order, &mut rng);
        let mut y = ws.sim.simulate(&params, &mut rng)?;
        let m = y.iter().sum::<f64>() / n as f64;
        y.iter_mut().for_each(|v| *v -= m);
        let ordinates = ws.plan.half(&y);
        let s = summarize_ordinates(&y, ordinates, &settings, params.d);
        let distances = abc_distances(observed, &s, config.variant)?;
        out.push(AbcRecord { params, distances });
    }
    Ok(out)
}

/// Run all simulations on `config.worker_count` threads and hand the records to `sink` in
/// global simulation order, one chunk at a time. Returns the number of circulant fallbacks.
pub(crate) fn drive(
    n: usize,
    observed: &SummaryStats,
    config: &AbcConfig,
    mut sink: impl FnMut(Vec<AbcRecord>) -> Result<()>,
) -> Result<usize> {
    let total = config.simulations;
    let chunks = total.div_ceil(CHUNK);
    if chunks == 0 {
        return Ok(0);
    }
    let workers = config.worker_count.max(1).min(chunks);
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let fallbacks = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Result<Vec<AbcRecord>>)>();
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, stop, fallbacks) = (&next, &stop, &fallbacks);
            handles.push(scope.spawn(move || {
                let mut ws = Workspace { sim: CirculantSimulator::new(n), plan: PeriodogramPlan::new(n) };
                while !stop.load(Ordering::Relaxed) {
                    let c = next.fetch_add(1, Ordering::Relaxed);
                    if c >= chunks {
                        break;
                    }
                    let count = CHUNK.min(total - c * CHUNK);
                    let res = simulate_chunk(c, count, n, observed, config, &mut ws);
                    let failed = res.is_err();
                    if tx.send((c, res)).is_err() || failed {
                        break;
                    }
                }
                fallbacks.fetch_add(ws.sim.fallbacks(), Ordering::Relaxed);
            }));
        }
        drop(tx);

        let mut pending: BTreeMap<usize, Vec<AbcRecord>> = BTreeMap::new();
        let mut next_out = 0usize;
        let mut completed = 0usize;
        let mut error: Option<Error> = None;
        for (c, res) in rx {
            match res {
                Ok(records) => {
                    pending.insert(c, records);
                    while let Some(records) = pending.remove(&next_out) {
                        next_out += 1;
                        if error.is_none() {
                            completed += records.len();
                            if let Err(e) = sink(records) {
                                error = Some(e);
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                }
                Err(e) => {
                    error.get_or_insert(e);
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
        let panicked = handles.into_iter().map(|h| h.join()).filter(|r| r.is_err()).count();
        if panicked > 0 {
            return Err(Error::WorkerPanic { completed });
        }
        match error {
            Some(e) => Err(e),
            None => Ok(fallbacks.load(Ordering::Relaxed)),
        }
    })
}
