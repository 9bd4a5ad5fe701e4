// Two photons heralded by a coincidence: the autocorrelation matrix and
// how its spectrum follows from the single-photon one.
//
// ```text
// cargo run --release --example two_photon_state
// ```

use heralded_modes::herald::build_kernel1;
use heralded_modes::modes::decompose;
use heralded_modes::temporal::{JitterShape, TimeGrid};
use heralded_modes::two_photon::{autocorr2, two_photon_metrics, two_photon_modes};

pub fn run_example() -> heralded_modes::Result<f64> {
    let grid = TimeGrid::new(4.0, 100)?;
    let p = build_kernel1(grid, JitterShape::Gaussian, 0.15, 0.0)?;

    let (metrics, _) = two_photon_metrics(&p)?;
    println!(
        "B = 0.15: purity {:.6}, fidelity {:.6}",
        metrics.purity, metrics.fidelity
    );

    // E shares P's eigenvectors; its weights are p + p², renormalized
    let single = decompose(&p)?;
    let e = two_photon_modes(&autocorr2(&p)?)?;
    let mapped: Vec<f64> = single.eigenvalues().iter().map(|x| x + x * x).collect();
    let total: f64 = mapped.iter().sum();
    let mut worst = 0.0f64;
    for k in 0..4 {
        let predicted = mapped[k] / total;
        println!(
            "  k={k}: lambda_E {:.8e}  from P {:.8e}",
            e.eigenvalues()[k],
            predicted
        );
        worst = worst.max((e.eigenvalues()[k] - predicted).abs());
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
