//! Short vectors and packing densities of the fixture lattices, or of a lattice file.
use fourier_interp::lattice::{lattice_fixture, lattice_packing_density, short_vectors, Lattice};

fn main() -> fourier_interp::error::Result<()> {
    let mut lattices: Vec<Lattice> = ["z1", "z2", "hex", "e8"].iter().filter_map(|l| lattice_fixture(l)).collect();
    if let Some(path) = std::env::args().nth(1) {
        lattices.push(Lattice::load(std::path::Path::new(&path))?);
    }
    for l in &lattices {
        let d = lattice_packing_density(l)?;
        let shells = short_vectors(l, 2.0 + 1e-9)?;
        println!(
            "{:4} n={} covolume={:.6} vectors with |v|<=2: {:5} density={:.10} density^(1/n)={:.8}",
            l.label,
            l.dimension,
            l.covolume(),
            shells.len(),
            d,
            d.powf(1.0 / l.dimension as f64)
        );
    }
    Ok(())
}
