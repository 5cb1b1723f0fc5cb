//! Reconstructs Gaussians from their values and transform values at √n.
use fourier_interp::basis::{reconstruct, shared_engine, SeminormEnvelope};
use fourier_interp::fourier::dilated_gaussian;

fn main() -> fourier_interp::error::Result<()> {
    let engine = shared_engine()?;
    let env = SeminormEnvelope::fit(&engine)?;
    println!("basis envelope max|a_n| <= {:.3} (n+1)^{:.3}", env.c, env.p);
    for t in [1.0, 2.0, 0.5] {
        let pair = dilated_gaussian(t);
        for x in [0.0, 0.3, 0.8, 1.4, 2.1] {
            let r = reconstruct(&engine, &env, &pair, x, 40)?;
            println!(
                "{:12} x={x:.1}  f={:.15}  sum={:.15}  error {:.1e}",
                pair.label(),
                r.reference,
                r.reconstructed,
                r.abs_error
            );
        }
    }
    Ok(())
}
