//! The generating function F, its functional equation and the residue mechanism.
use fourier_interp::basis::{gaussian_functional_equation_residual, generating_f, residue_demonstration, shared_engine};
use fourier_interp::modular::{UpperHalfPoint, C64};

fn main() -> fourier_interp::error::Result<()> {
    let engine = shared_engine()?;
    for (re, im) in [(0.0, 1.5), (0.0, 2.0), (0.4, 1.6)] {
        let tau = UpperHalfPoint::new(re, im)?;
        for x in [0.0, 0.5, 1.0] {
            let r = gaussian_functional_equation_residual(&engine, tau, x, 30)?;
            println!("tau={re}+{im}i x={x}: F + (-i tau)^(-1/2) Fhat(-1/tau) - e^(pi i tau x^2) = {r:.1e}");
        }
    }
    let tau = UpperHalfPoint::imag(1.8)?;
    let a = generating_f(false, tau, 0.7, 1e-12)?;
    let b = generating_f(false, tau.shift(2.0), 0.7, 1e-12)?;
    println!("F(tau+2) - F(tau) = {:.1e}", (a - b).norm());
    let d = residue_demonstration(UpperHalfPoint::from_complex(C64::from_polar(0.92, 1.2))?, 0.6)?;
    println!("below - above = {:.12}, e^(pi i tau x^2) = {:.12}", d.below - d.above, d.expected);
    Ok(())
}
