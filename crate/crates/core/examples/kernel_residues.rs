//! The kernels K and K̂: values, transformation laws, residues and pole classification.
use fourier_interp::kernels::{
    expected_poles, growth_profile, kernel, residue_at, verify_tau_transformations, verify_z_transformations,
    KernelKind,
};
use fourier_interp::modular::UpperHalfPoint;

fn main() -> fourier_interp::error::Result<()> {
    let tau = UpperHalfPoint::new(0.3, 1.1)?;
    let z = UpperHalfPoint::new(-0.2, 0.9)?;
    for kind in [KernelKind::Plain, KernelKind::Hat] {
        println!("{kind:?}: K(tau, z) = {:.12}", kernel(kind, tau, z)?);
        let (a, b) = verify_z_transformations(kind, tau, z)?;
        let (c, d) = verify_tau_transformations(kind, tau, z)?;
        println!("  law residuals: {a:.1e} {b:.1e} {c:.1e} {d:.1e}");
    }
    for r in [0.05, 0.1] {
        let res = residue_at(KernelKind::Plain, tau, tau, r)?;
        println!("residue of K at tau (radius {r}): {:.12}", res.residue);
    }
    println!("residue of K at -1/tau: {:.2e}", residue_at(KernelKind::Plain, tau, tau.neg_inv(), 0.05)?.residue.norm());
    println!("residue of Khat at tau: {:.2e}", residue_at(KernelKind::Hat, tau, tau, 0.05)?.residue.norm());
    for kind in [KernelKind::Plain, KernelKind::Hat] {
        let poles = expected_poles(kind, tau, 2);
        println!("{kind:?}: {} expected poles at depth 2, e.g. {:?}", poles.len(), poles.iter().take(3).collect::<Vec<_>>());
    }
    // growth of |K| as tau approaches the real axis
    for s in growth_profile(KernelKind::Plain, z, 0.45, &[1.0, 0.5, 0.25, 0.1]) {
        println!("Im tau = {:5.2}: |K| = {:.3e}", s.tau_im, s.magnitude);
    }
    Ok(())
}
