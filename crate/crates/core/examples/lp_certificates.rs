//! Linear-programming certificates: sampled checks and the sharpness gap.
use fourier_interp::lattice::{hexagonal_lattice, integer_lattice};
use fourier_interp::lp::{
    gaussian_certificate, lp_bound_sharpness_gap, lp_certificate_check, product_triangle_certificate,
    triangle_certificate,
};

fn main() -> fourier_interp::error::Result<()> {
    let tri = triangle_certificate();
    println!("triangle, r=1: {:?}", lp_certificate_check(&tri));
    let mut short = tri.clone();
    short.r = 0.9;
    println!("triangle, r=0.9: {:?}", lp_certificate_check(&short));
    println!("gaussian in 8d, r=sqrt 2: {:?}", lp_certificate_check(&gaussian_certificate(8, 2f64.sqrt())));
    println!("gap on z1: {:?}", lp_bound_sharpness_gap(&integer_lattice(1), &tri, 50.0)?);
    let prod = product_triangle_certificate();
    println!("product triangle: {:?}", lp_certificate_check(&prod));
    println!("gap on z2: {:?}", lp_bound_sharpness_gap(&integer_lattice(2), &prod, 8.0)?);
    println!("gap on hex: {:?}", lp_bound_sharpness_gap(&hexagonal_lattice(), &prod, 8.0)?);
    Ok(())
}
