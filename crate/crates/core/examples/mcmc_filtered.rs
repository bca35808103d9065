//! Filtered sampler: d is updated on the ARMA-filtered series, (phi, theta) on the
//! fractionally differenced one. Compared with the simultaneous chain on the same series.

use arfima::mcmc::{run_mcmc, Algorithm, McmcConfig};
use arfima::simulate::simulate_arfima;
use arfima::{ArfimaParams, Component, ModelOrder};

fn main() -> arfima::Result<()> {
    let truth = ArfimaParams::new(0.3, Some(0.2), None, 1.0)?;
    let y = simulate_arfima(&truth, 1000, 21)?;
    for algorithm in [Algorithm::Simultaneous, Algorithm::Filtered] {
        let config = McmcConfig { algorithm, order: ModelOrder::Arfima1d0, iterations: 10_000, thin: 10, seed: 2, ..McmcConfig::default() };
        let draws = run_mcmc(&y, &config)?;
        let d = draws.summary(Component::D).unwrap();
        let phi = draws.summary(Component::Phi).unwrap();
        println!("{algorithm:?}: d {:.4} (sd {:.4}), phi {:.4} (sd {:.4})", d.mean, d.sd, phi.mean, phi.sd);
    }
    Ok(())
}
