//! Exact Gaussian maximum likelihood with Wald 90% intervals.

use arfima::mle::fit_mle;
use arfima::simulate::simulate_arfima;
use arfima::{ArfimaParams, Component, ModelOrder};

fn main() -> arfima::Result<()> {
    let truth = ArfimaParams::new(0.3, Some(0.2), None, 1.0)?;
    let y = simulate_arfima(&truth, 1000, 3)?;
    let fit = fit_mle(&y, ModelOrder::Arfima1d0)?;
    println!("log-likelihood {:.3}, converged: {}", fit.loglik, fit.converged);
    for c in Component::for_order(ModelOrder::Arfima1d0) {
        let (lo, hi) = fit.wald_interval(c, 1.645).unwrap();
        println!("{:>6}: {:8.4}  [{lo:.4}, {hi:.4}]  truth {}", c.name(), c.get(&fit.params).unwrap(), c.get(&truth).unwrap());
    }
    Ok(())
}
