//! A small simulation study: two cells, three estimators, Markdown tables on stdout.
//! The checked-in `configs/` file runs the full desk-scale cell through the CLI.

use arfima::mcmc::McmcConfig;
use arfima::study::{forecast_markdown, forecast_study, metrics_markdown, Estimator, StudyConfig};
use arfima::ArfimaParams;

fn main() -> arfima::Result<()> {
    let config = StudyConfig {
        grid: vec![ArfimaParams::new(0.2, None, Some(0.2), 1.0)?, ArfimaParams::new(0.4, None, Some(0.2), 1.0)?],
        reps: 4,
        n: 500,
        seed: 1,
        workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        estimators: vec![Estimator::McmcSimultaneous, Estimator::McmcFiltered, Estimator::Mle],
        mcmc: McmcConfig { iterations: 4000, thin: 10, ..McmcConfig::default() },
        ..StudyConfig::default()
    };
    let report = forecast_study(&config)?;
    println!("{}", metrics_markdown(&report.rows));
    println!("{}", forecast_markdown(&report.forecasts));
    for s in &report.skipped {
        eprintln!("skipped: cell {} rep {} {}: {}", s.cell, s.rep, s.estimator.key(), s.reason);
    }
    Ok(())
}
