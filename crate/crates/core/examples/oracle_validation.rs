// Closed forms against independent references: adaptive quadrature for the
// kernel and the dense tensor contraction for two photons.
//
// ```text
// cargo run --release --example oracle_validation
// ```

use heralded_modes::experiment::{validate_oracles, InjectedFault, ValidationOptions};
use heralded_modes::herald::{rho1_gaussian_analytic, rho1_quadrature};
use heralded_modes::temporal::{JitterKernel, SourceKernel};

pub fn run_example() -> heralded_modes::Result<bool> {
    let gamma = SourceKernel::default().gamma();
    let g = JitterKernel::gaussian(0.25)?;
    let closed = rho1_gaussian_analytic(0.1, -0.05, 0.25, gamma);
    let quad = rho1_quadrature(0.1, -0.05, &g, gamma, 1e-12)?;
    println!("rho(0.1, -0.05): closed {closed:.15} quadrature {quad:.15}");

    let opts = ValidationOptions {
        kernel_points: 400,
        oracle_divisions: vec![8, 12],
        ..Default::default()
    };
    let report = validate_oracles(&opts)?;
    for c in &report.checks {
        println!(
            "{:<5} {:<48} {:.2e}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.max_error
        );
    }

    // a broken kernel must be caught
    let broken = validate_oracles(&ValidationOptions {
        fault: Some(InjectedFault::GaussianErfSign),
        ..opts
    })?;
    for c in broken.failures() {
        println!("injected fault caught by: {}", c.name);
    }
    Ok(report.all_passed() && !broken.all_passed())
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
