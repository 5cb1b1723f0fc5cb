//! Values of a₀, aₙ and âₙ and their interpolation property at √m.
use fourier_interp::basis::{a0, shared_engine};

fn main() -> fourier_interp::error::Result<()> {
    println!("a0(0) = {:.15}, a0(1) = {:.2e}, a0(sqrt 5) = {:.2e}", a0(0.0, 1e-12)?, a0(1.0, 1e-12)?, a0(5f64.sqrt(), 1e-12)?);
    let engine = shared_engine()?;
    println!("a_n(sqrt m), rows n = 0..5, columns m = 0..5");
    for n in 0..=5 {
        let row: Vec<String> =
            (0..=5).map(|m| format!("{:+.6}", engine.value(n, false, (m as f64).sqrt()).unwrap().value)).collect();
        println!("  {}", row.join(" "));
    }
    println!("ahat_n(sqrt m)");
    for n in 0..=5 {
        let row: Vec<String> =
            (0..=5).map(|m| format!("{:+.6}", engine.value(n, true, (m as f64).sqrt()).unwrap().value)).collect();
        println!("  {}", row.join(" "));
    }
    for n in [10, 20, 30] {
        let v = engine.value(n, false, 0.5)?;
        println!("a_{n}(0.5) = {:+.8e} +- {:.1e}", v.value, v.error_estimate);
    }
    Ok(())
}
