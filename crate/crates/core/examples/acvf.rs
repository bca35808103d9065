//! Autocovariances of an ARFIMA(1,d,1): closed form against the convolution route.
//!
//!     cargo run --example acvf -- 0.3 0.5 0.5

use arfima::acvf::{acvf_arfima_exact, acvf_convolution};
use arfima::ArfimaParams;

fn main() -> arfima::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (d, phi, theta) = match args[..] {
        [d, phi, theta] => (d, phi, theta),
        _ => (0.3, 0.5, 0.5),
    };
    let p = ArfimaParams::new(d, Some(phi), Some(theta), 1.0)?;
    let exact = acvf_arfima_exact(&p, 21)?;
    let conv = acvf_convolution(&p, 21)?;
    println!("lag,exact,convolution,rel_diff");
    for h in 0..21 {
        let (a, b) = (exact.gamma[h], conv.gamma[h]);
        println!("{h},{a:.12},{b:.12},{:.2e}", ((a - b) / b).abs());
    }
    Ok(())
}
