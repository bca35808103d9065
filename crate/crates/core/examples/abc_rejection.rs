//! ABC rejection with each of the three periodogram distances. Simulations run on
//! `ARFIMA_WORKERS` threads (default 1); the result does not depend on the count.

use arfima::abc::{run_abc, AbcConfig, SummaryVariant};
use arfima::simulate::simulate_arfima;
use arfima::{ArfimaParams, Component, ModelOrder};

fn main() -> arfima::Result<()> {
    let truth = ArfimaParams::new(0.2, None, Some(0.2), 1.0)?;
    let y = simulate_arfima(&truth, 1000, 31)?;
    let workers = std::env::var("ARFIMA_WORKERS").ok().and_then(|w| w.parse().ok()).unwrap_or(1);
    for variant in [SummaryVariant::Full, SummaryVariant::First20, SummaryVariant::PooledLog] {
        let config = AbcConfig {
            order: ModelOrder::Arfima0d1,
            variant,
            simulations: 50_000,
            q: 0.05,
            seed: 4,
            worker_count: workers,
            ..AbcConfig::default()
        };
        let run = run_abc(&y, &config)?;
        print!("H{}: {} accepted", variant.number(), run.accepted());
        for c in [Component::D, Component::Theta, Component::Sigma2] {
            if let Some(s) = run.draws.summary(c) {
                print!(", {} {:.3}", c.name(), s.mean);
            }
        }
        println!();
    }
    Ok(())
}
