//! Builds a basis table and writes it as CSV and JSON.
use fourier_interp::basis::{BasisEngine, BasisTable};

fn main() -> fourier_interp::error::Result<()> {
    let engine = BasisEngine::new(6)?;
    let grid: Vec<f64> = (0..=25).map(|k| k as f64 * 0.1).collect();
    let table = BasisTable::build(&engine, 6, &grid)?;
    let dir = std::env::temp_dir();
    let csv = dir.join("basis_table.csv");
    std::fs::write(&csv, table.to_csv())?;
    std::fs::write(dir.join("basis_table.json"), table.to_json())?;
    let back = BasisTable::from_csv(&std::fs::read_to_string(&csv)?)?;
    println!("wrote {} ({} rows x {} columns), round trip exact: {}", csv.display(), table.max_n + 1, grid.len(), back.values_a == table.values_a);
    println!("largest discarded imaginary part: {:.1e}", table.max_imag.iter().cloned().fold(0.0, f64::max));
    Ok(())
}
