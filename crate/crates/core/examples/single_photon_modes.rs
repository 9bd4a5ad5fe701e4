// Temporal modes of a single photon heralded by a Gaussian-jitter detector.
//
// ```text
// cargo run --release --example single_photon_modes
// ```

use heralded_modes::herald::build_kernel1;
use heralded_modes::modes::decompose;
use heralded_modes::temporal::{JitterShape, TimeGrid};

pub fn run_example() -> heralded_modes::Result<Vec<(f64, f64, f64)>> {
    let grid = TimeGrid::new(10.0, 400)?;
    let mut rows = Vec::new();
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>10}",
        "B", "lambda1", "lambda2", "purity", "<f1|r>^2"
    );
    for b in [0.05, 0.25, 1.0] {
        let kernel = build_kernel1(grid, JitterShape::Gaussian, b, 0.0)?;
        let d = decompose(&kernel)?;
        let overlap = d.overlap_with_envelope();
        println!(
            "{b:>6} {:>9.6} {:>9.6} {:>9.6} {:>10.6}",
            d.eigenvalues()[0],
            d.eigenvalues()[1],
            d.purity(),
            overlap * overlap
        );
        rows.push((b, d.purity(), overlap * overlap));
    }

    // f2 is odd about the detection time
    let d = decompose(&build_kernel1(grid, JitterShape::Gaussian, 1.0, 0.0)?)?;
    let f2 = d.mode(1).values();
    let mid = grid.divisions() / 2;
    println!("f2 around t_c: {:+.4} {:+.4}", f2[mid - 20], f2[mid + 19]);
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
