// Writing sweep and mode tables as CSV and JSON, and reading a sweep back.
//
// ```text
// cargo run --release --example output_files
// ```

use heralded_modes::experiment::{
    read_sweep_csv, run_sweep_with_modes, write_json, write_modes_csv, write_sweep_csv, RunConfig,
};

pub fn run_example() -> heralded_modes::Result<bool> {
    let mut cfg = RunConfig::standard(1);
    cfg.b_values = vec![0.0, 0.1, 0.5];
    cfg.divisions = 120;
    let result = run_sweep_with_modes(&cfg)?;

    let mut csv = Vec::new();
    write_sweep_csv(&result, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    let mut modes = Vec::new();
    write_modes_csv(&result.modes[1], &cfg, &mut modes)?;
    let text = String::from_utf8_lossy(&modes);
    for line in text.lines().skip(1).take(4) {
        println!("{line}");
    }

    let mut json = Vec::new();
    write_json(&result, &mut json)?;
    println!("json: {} bytes", json.len());

    let (echo, records) = read_sweep_csv(csv.as_slice())?;
    Ok(echo == cfg && records == result.records)
}

#[allow(dead_code)]
fn main() -> heralded_modes::Result<()> {
    run_example().map(|_| ())
}
