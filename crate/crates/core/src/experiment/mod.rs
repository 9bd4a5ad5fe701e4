//! Run configuration, B sweeps, output files and oracle validation.

mod config;
pub mod output;
mod run;
pub mod validate;

pub use config::{
    parse_b_values, sweep_grid, Command, OutputFormat, Preset, RunConfig, RunRequest, MAX_DIVISIONS,
};
pub use output::{
    emit_modes, emit_sweep, read_sweep_csv, write_json, write_modes_csv, write_sweep_csv,
};
pub use run::{
    run_modes, run_sweep, run_sweep_with_modes, ModeTable, Provenance, SpotCheck, SweepRecord,
    SweepResult, SPOT_CHECK_TOL,
};
pub use validate::{
    validate_oracles, CheckResult, InjectedFault, ValidationOptions, ValidationReport,
};
