//! θ, λ, h and J at a few points, with their transformation laws.
use fourier_interp::modular::{
    gamma_theta_orbit, hauptmodul_j, lambda_modular, sqrt_neg_iz, theta, theta3, SeriesTolerance, UpperHalfPoint,
};

fn main() -> fourier_interp::error::Result<()> {
    for (re, im) in [(0.0, 1.0), (0.3, 0.8), (0.5, 0.2), (-0.9, 0.05)] {
        let z = UpperHalfPoint::new(re, im)?;
        let w = z.neg_inv();
        println!(
            "z = {re:+.2}{im:+.2}i  theta = {:.12}  lambda = {:.12}  J = {:.6e}",
            theta(z),
            lambda_modular(z),
            hauptmodul_j(z)
        );
        println!(
            "    |theta(-1/z) - (-iz)^(1/2) theta(z)| = {:.2e}",
            (theta(w) - sqrt_neg_iz(z) * theta(z)).norm()
        );
    }
    // the direct q-series agrees with the reduced evaluation where both apply
    let z = UpperHalfPoint::new(0.2, 0.6)?;
    let direct = theta3(z, SeriesTolerance::default())?;
    println!("direct series vs reduced: {:.2e}", (direct - theta(z)).norm());

    let tau = UpperHalfPoint::imag(3.0)?;
    let orbit = gamma_theta_orbit(tau, 2);
    let spread = orbit.iter().map(|w| (hauptmodul_j(*w) - hauptmodul_j(tau)).norm()).fold(0.0, f64::max);
    println!("J varies by {spread:.2e} over {} orbit points of 3i", orbit.len());
    Ok(())
}
