//! Periodogram, pooled log-periodogram and the GPH estimate of d for a simulated series.

use arfima::simulate::simulate_arfima;
use arfima::spectral::{gph_estimate, periodogram, pooled_log_periodogram_default};
use arfima::ArfimaParams;

fn main() -> arfima::Result<()> {
    let y = simulate_arfima(&ArfimaParams::new(0.3, None, None, 1.0)?, 1024, 5)?;
    let pg = periodogram(&y);
    println!("first ordinates:");
    for (w, i) in pg.frequencies.iter().zip(&pg.ordinates).skip(1).take(6) {
        println!("  lambda={w:.4}  I={i:.4}");
    }
    let pooled = pooled_log_periodogram_default(&y);
    println!("pooled log-periodogram: {} points", pooled.index.len());
    println!("GPH d estimate: {:.4} (truth 0.3)", gph_estimate(&pg.ordinates, y.len()));
    Ok(())
}
