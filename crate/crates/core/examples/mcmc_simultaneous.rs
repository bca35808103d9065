//! Simultaneous Metropolis-within-Gibbs: (d, phi, theta) jointly by a truncated-normal random
//! walk, sigma2 by its inverse-gamma full conditional.

use arfima::mcmc::{effective_sample_size, run_mcmc, Algorithm, McmcConfig};
use arfima::simulate::simulate_arfima;
use arfima::{ArfimaParams, Component, ModelOrder};

fn main() -> arfima::Result<()> {
    let truth = ArfimaParams::new(0.2, None, Some(0.2), 1.0)?;
    let y = simulate_arfima(&truth, 1000, 11)?;
    let config = McmcConfig {
        algorithm: Algorithm::Simultaneous,
        order: ModelOrder::Arfima0d1,
        iterations: 10_000,
        thin: 10,
        seed: 1,
        ..McmcConfig::default()
    };
    let draws = run_mcmc(&y, &config)?;
    for a in &draws.acceptance {
        println!("acceptance {}: {:.3}", a.block, a.rate);
    }
    println!("param      mean      sd      5%     95%    ESS");
    for c in Component::for_order(config.order) {
        let s = draws.summary(c).unwrap();
        let ess = effective_sample_size(&draws.component(c));
        println!("{:>6} {:8.4} {:7.4} {:7.4} {:7.4} {:6.0}", c.name(), s.mean, s.sd, s.lb, s.ub, ess);
    }
    Ok(())
}
