//! Lagrange, Hermite and Shannon interpolation, and the partial sine product.
use fourier_interp::classical::{
    hermite_interpolate, lagrange_basis, sample_symmetric, shannon_reconstruct, sinc_limit, sinc_product_partial,
    NodeSet,
};
use std::f64::consts::PI;

fn main() -> fourier_interp::error::Result<()> {
    let nodes = NodeSet::lagrange(vec![0.0, 1.0, 2.0])?;
    let p: f64 = (0..3).map(|k| lagrange_basis(&nodes, k, 3.0).unwrap() * (k as f64 * k as f64 + 1.0)).sum();
    println!("x^2 + 1 at 3 from three samples: {p}");

    let hn = NodeSet::new(vec![0.0, 1.0], vec![2, 2])?;
    let cubic = hermite_interpolate(&hn, &[vec![0.0, 0.0], vec![1.0, 3.0]])?;
    println!("Hermite data of x^3 at 0 and 1 gives coefficients {:?}", cubic.coefficients);

    let f = |x: f64| if x == 0.0 { 0.4 } else { (2.0 * PI * 0.2 * x).sin() / (PI * x) };
    let (samples, _tail) = sample_symmetric(f, 1.0, 200, 100_000);
    for x in [0.37, 2.5, 10.1] {
        let s = shannon_reconstruct(&samples, 1.0, x)?;
        println!("Shannon at x={x}: {s:.10} vs {:.10}", f(x));
    }
    for j in [10, 100, 1000, 10_000] {
        let v = sinc_product_partial(0.5, j);
        println!("prod_(j<={j}) (1 - 1/(4j^2)) = {v:.10}, error {:.2e}", (v - sinc_limit(0.5)).abs());
    }
    Ok(())
}
