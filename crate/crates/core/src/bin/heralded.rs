use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heralded_modes::experiment::{
    emit_modes, emit_sweep, parse_b_values, run_sweep, run_sweep_with_modes, validate_oracles,
    InjectedFault, OutputFormat, RunRequest, ValidationOptions,
};
use heralded_modes::{Error, Result};

#[derive(Parser)]
#[command(
    name = "heralded",
    version,
    about = "Temporal modes of heralded Fock states"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Leading eigenmodes and the source envelope for each B
    Modes(RunArgs),
    /// Purity, fidelity and spectrum against B
    Sweep(RunArgs),
    /// Check closed forms against quadrature and the tensor oracle
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    photons: Option<u8>,
    /// gaussian, rect or delta
    #[arg(long)]
    jitter: Option<String>,
    /// Comma list (0.05,0.1) or inclusive range start:step:stop
    #[arg(long = "B")]
    b: Option<String>,
    #[arg(long = "grid-m")]
    grid_m: Option<usize>,
    #[arg(long = "span-t")]
    span_t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tc: Option<f64>,
    /// fig3, fig4, fig5a, fig5b, fig6a or fig6b
    #[arg(long)]
    preset: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Grid sizes for the tensor oracle
    #[arg(long = "oracle-m", value_delimiter = ',', default_values_t = [8, 16, 20])]
    oracle_m: Vec<usize>,
    #[arg(long = "kernel-points", default_value_t = 2000)]
    kernel_points: usize,
    /// csv prints one line per check; json prints the report
    #[arg(long)]
    format: Option<String>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

impl RunArgs {
    fn request(self) -> Result<RunRequest> {
        Ok(RunRequest {
            preset: self.preset.as_deref().map(str::parse).transpose()?,
            photons: self.photons,
            jitter: self.jitter.as_deref().map(str::parse).transpose()?,
            b_values: self.b.as_deref().map(parse_b_values).transpose()?,
            divisions: self.grid_m,
            span: self.span_t,
            detection_time: self.tc,
            format: self.format.as_deref().map(str::parse).transpose()?,
            output: self.out,
        })
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!(
                "{}: {}",
                record.level().as_str().to_lowercase(),
                record.args()
            );
        }
    }

    fn flush(&self) {}
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Cmd::Modes(args) => {
            let cfg = args.request()?.resolve_modes()?;
            emit_modes(&run_sweep_with_modes(&cfg)?)?;
        }
        Cmd::Sweep(args) => {
            let cfg = args.request()?.resolve()?;
            emit_sweep(&run_sweep(&cfg)?)?;
        }
        Cmd::Validate(args) => {
            let format: OutputFormat = args.format.as_deref().unwrap_or("csv").parse()?;
            let report = validate_oracles(&ValidationOptions {
                kernel_points: args.kernel_points,
                oracle_divisions: args.oracle_m,
                fault: args.inject_fault.then_some(InjectedFault::GaussianErfSign),
                ..Default::default()
            })?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            let io = |source| Error::Io {
                path: "<stdout>".into(),
                source,
            };
            match format {
                OutputFormat::Json => {
                    let text = serde_json::to_string_pretty(&report).expect("report serializes");
                    writeln!(out, "{text}").map_err(io)?;
                }
                OutputFormat::Csv => {
                    for c in &report.checks {
                        writeln!(
                            out,
                            "{} {}: max error {:e} (tolerance {:e}, {} samples)",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.max_error,
                            c.tolerance,
                            c.samples
                        )
                        .map_err(io)?;
                    }
                }
            }
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    log::set_logger(&StderrLogger).expect("logger installed once");
    log::set_max_level(log::LevelFilter::Warn);
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: validation failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
