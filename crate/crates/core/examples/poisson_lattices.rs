//! Poisson summation on lattices, including the theta transformation replay.
use fourier_interp::lattice::{
    e8_lattice, hexagonal_lattice, integer_lattice, poisson_check, theta_replay, PoissonPair,
};
use fourier_interp::modular::UpperHalfPoint;

fn main() -> fourier_interp::error::Result<()> {
    for (l, radius) in [(integer_lattice(1), 7.0), (integer_lattice(2), 7.0), (hexagonal_lattice(), 6.0), (e8_lattice(), 3.6)] {
        let r = poisson_check(&PoissonPair::gaussian(l.dimension, 1.0), &l, radius)?;
        println!(
            "{:4} sum f = {:.15}  covol^-1 sum fhat = {:.15}  residual {:.1e}  ({} + {} terms)",
            l.label, r.lhs.re, r.rhs.re, r.residual, r.lhs_terms, r.rhs_terms
        );
    }
    for t in [0.5, 1.3, 2.0] {
        let r = theta_replay(UpperHalfPoint::imag(t)?)?;
        println!("z = {t}i: theta(-1/z) via Poisson {:.15}, direct {:.15}", r.via_poisson.re, r.direct.re);
    }
    Ok(())
}
