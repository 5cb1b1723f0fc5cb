//! Adaptive Gauss–Legendre quadrature along the standard contours.
use fourier_interp::contours::{circle_around, integrate, polygon_contour, semicircle};
use fourier_interp::modular::{UpperHalfPoint, C64};
use std::f64::consts::PI;

fn main() -> fourier_interp::error::Result<()> {
    // an entire integrand: every path from −1 to 1 gives the same value
    let f = |z: C64| (C64::i() * PI * z * 1.7).exp() * z * z;
    for (name, path) in [("semicircle", semicircle()), ("polygon", polygon_contour())] {
        let q = integrate(f, &path, 1e-13)?;
        println!("{name:10} {:.15}  (error estimate {:.1e}, {} nodes)", q.value, q.error_estimate, q.nodes_used);
    }
    let rev = integrate(f, &semicircle().reversed(), 1e-13)?;
    println!("reversed semicircle {:.15}", rev.value);

    // residue of 1/(z − p) is 1 for every circle radius
    let p = UpperHalfPoint::new(0.2, 0.7)?;
    for r in [0.05, 0.1, 0.2] {
        let q = integrate(|z| 1.0 / (z - p.z()), &circle_around(p, r)?, 1e-13)?;
        println!("radius {r}: residue {:.14}", q.value / C64::new(0.0, 2.0 * PI));
    }
    Ok(())
}
