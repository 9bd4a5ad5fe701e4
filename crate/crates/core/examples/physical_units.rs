// From laboratory numbers to B, and why only B matters.
//
// ```text
// cargo run --release --example physical_units
// ```

use heralded_modes::herald::HeraldedKernel1;
use heralded_modes::modes::decompose;
use heralded_modes::temporal::units::PhysicalSetup;
use heralded_modes::temporal::JitterShape;

pub fn run_example() -> heralded_modes::Result<f64> {
    // 10 MHz source, 40 ps jitter is far inside the ideal regime;
    // a 100 MHz source with 1 ns jitter is not
    let cases = [(10e6, 40e-12), (100e6, 1e-9), (25e6, 4e-9), (250e6, 0.4e-9)];
    let mut purities = Vec::new();
    for (bandwidth, resolution) in cases {
        let setup = PhysicalSetup {
            bandwidth,
            resolution,
            span: 10.0 / bandwidth,
            detection_time: 0.0,
        };
        let kernel = HeraldedKernel1::build_physical(&setup, JitterShape::Gaussian, 400, 1.0)?;
        let d = decompose(&kernel)?;
        println!(
            "df = {:>6.1} MHz, dt = {:>7.1} ps: B = {:.4}, purity {:.10}",
            bandwidth / 1e6,
            resolution / 1e-12,
            kernel.b(),
            d.purity()
        );
        purities.push(d.purity());
    }
    // the last two share B = 0.1
    Ok((purities[2] - purities[3]).abs())
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
