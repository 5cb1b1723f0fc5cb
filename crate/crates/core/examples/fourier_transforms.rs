//! Built-in transform pairs and the numerical cosine transform.
use fourier_interp::fourier::{builtin_fixtures, complex_gaussian, numeric_transform};
use fourier_interp::modular::UpperHalfPoint;

fn main() -> fourier_interp::error::Result<()> {
    for pair in builtin_fixtures() {
        let mut worst: f64 = 0.0;
        for y in [0.0, 0.5, 1.0, 1.5] {
            let num = numeric_transform(&pair.f, y, 1e-10)?;
            worst = worst.max((num - pair.f_hat.eval(y)).norm());
        }
        println!("{:14} numeric vs closed-form transform: {worst:.1e}", pair.label());
    }
    let g = complex_gaussian(UpperHalfPoint::new(0.4, 1.2)?);
    let y = 0.7;
    println!(
        "complex gaussian at y={y}: closed form {:.12}, numeric {:.12}",
        g.exact_transform(y).expect("closed form"),
        numeric_transform(&g, y, 1e-12)?
    );
    Ok(())
}
