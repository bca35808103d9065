//! ARFIMA(1,d,0) fit to quarterly GNP log-returns with the IG(33, 45) variance prior, plus DIC.
//! Reads `data/gnp.csv` (see scripts/fetch_gnp.sh) or falls back to the synthetic fixture,
//! which only matches the real data in length and variance.
//!
//!     cargo run --release --example gnp -- [path.csv] [column]

use std::path::PathBuf;

use arfima::io::{gnp_transform, read_column};
use arfima::likelihood::Priors;
use arfima::mcmc::{dic, run_mcmc, McmcConfig};
use arfima::{Component, ModelOrder};

fn main() -> arfima::Result<()> {
    let mut args = std::env::args().skip(1);
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/gnp_synthetic.csv");
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        let real = PathBuf::from("data/gnp.csv");
        if real.exists() { real } else { fixture }
    });
    let column = args.next().unwrap_or_else(|| "gnp_level".into());
    let y = gnp_transform(&read_column(&path, &column)?)?;
    println!("{}: n = {}, variance {:.3}", path.display(), y.len(), arfima::stats::variance(y.values()));

    for order in [ModelOrder::Arfima1d0, ModelOrder::Arfima1d1] {
        let config = McmcConfig { order, iterations: 20_000, thin: 20, priors: Priors::gnp(), seed: 5, ..McmcConfig::default() };
        let draws = run_mcmc(&y, &config)?;
        print!("{order}:");
        for c in Component::for_order(order) {
            let s = draws.summary(c).unwrap();
            print!("  {} {:.4} ({:.4})", c.name(), s.mean, s.sd);
        }
        println!("  DIC {:.2}", dic(&y, &draws)?.dic);
    }
    Ok(())
}
