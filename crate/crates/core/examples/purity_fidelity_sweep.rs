// Purity and fidelity against B, and where each drops below 0.9.
//
// ```text
// cargo run --release --example purity_fidelity_sweep
// ```

use heralded_modes::experiment::{parse_b_values, run_sweep, RunConfig, SweepRecord};
use heralded_modes::temporal::JitterShape;

fn first_below(records: &[SweepRecord], key: impl Fn(&SweepRecord) -> f64) -> Option<f64> {
    records.iter().find(|r| key(r) < 0.9).map(|r| r.b)
}

pub fn run_example() -> heralded_modes::Result<Vec<(u8, JitterShape, Option<f64>, Option<f64>)>> {
    let mut out = Vec::new();
    for photons in [1, 2] {
        for jitter in [JitterShape::Gaussian, JitterShape::Rectangular] {
            let mut cfg = RunConfig::standard(photons);
            cfg.jitter = jitter;
            cfg.b_values = parse_b_values("0:0.02:0.3")?;
            // a coarser grid keeps the example quick
            cfg.divisions = cfg.divisions.min(300);
            let result = run_sweep(&cfg)?;
            let p = first_below(&result.records, |r| r.purity);
            let f = first_below(&result.records, |r| r.fidelity);
            println!(
                "{photons} photon(s), {jitter:>8}: P < 0.9 from B = {p:?}, F < 0.9 from B = {f:?}"
            );
            out.push((photons, jitter, p, f));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
