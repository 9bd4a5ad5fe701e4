//! CSV and JSON writers.
//!
//! Every CSV file opens with a `# config: {...}` comment line holding the
//! resolved configuration as JSON. Floats use the shortest representation
//! that parses back to the same bits.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::config::{OutputFormat, RunConfig};
use super::run::{ModeTable, SweepRecord, SweepResult};
use crate::error::{Error, Result};

pub const SWEEP_HEADER: [&str; 9] = [
    "B",
    "purity",
    "fidelity",
    "lambda1",
    "lambda2",
    "lambda3",
    "lambda4",
    "lambda5",
    "overlap_r",
];

const CONFIG_PREFIX: &str = "# config: ";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn stdout_path() -> PathBuf {
    PathBuf::from("<stdout>")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn write_config_line(cfg: &RunConfig, w: &mut impl Write) -> std::io::Result<()> {
    let json = serde_json::to_string(cfg).expect("config serializes");
    writeln!(w, "{CONFIG_PREFIX}{json}")
}

pub fn write_sweep_csv(result: &SweepResult, mut w: impl Write) -> Result<()> {
    let path = stdout_path();
    write_config_line(&result.config, &mut w).map_err(io_err(&path))?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)
        .map_err(|e| csv_err(&path, e))?;
    for r in &result.records {
        let mut row = vec![r.b, r.purity, r.fidelity];
        row.extend(r.lambda_top5);
        row.push(r.overlap_with_r);
        out.write_record(row.iter().map(|x| format!("{x:?}")))
            .map_err(|e| csv_err(&path, e))?;
    }
    out.flush().map_err(io_err(&path))
}

/// Header is `t,f1,f2,r_norm`; with more than two modes the extra columns
/// follow `f2`.
pub fn write_modes_csv(table: &ModeTable, cfg: &RunConfig, mut w: impl Write) -> Result<()> {
    let path = stdout_path();
    write_config_line(cfg, &mut w).map_err(io_err(&path))?;
    writeln!(w, "# B: {}", table.b).map_err(io_err(&path))?;
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    header.extend((1..=table.modes.len()).map(|k| format!("f{k}")));
    header.push("r_norm".into());
    out.write_record(&header).map_err(|e| csv_err(&path, e))?;
    for (j, t) in table.t.iter().enumerate() {
        let mut row = vec![format!("{t:?}")];
        row.extend(table.modes.iter().map(|f| format!("{:?}", f[j])));
        row.push(format!("{:?}", table.r_norm[j]));
        out.write_record(&row).map_err(|e| csv_err(&path, e))?;
    }
    out.flush().map_err(io_err(&path))
}

pub fn write_json(result: &SweepResult, mut w: impl Write) -> Result<()> {
    let path = stdout_path();
    serde_json::to_writer_pretty(&mut w, result).map_err(|e| Error::Io {
        path: path.clone(),
        source: e.into(),
    })?;
    writeln!(w).map_err(io_err(&path))
}

/// Reads back the configuration echo and records of a sweep CSV.
pub fn read_sweep_csv(r: impl Read) -> Result<(RunConfig, Vec<SweepRecord>)> {
    let path = PathBuf::from("<input>");
    let mut text = String::new();
    let mut r = r;
    r.read_to_string(&mut text).map_err(io_err(&path))?;
    let first = text.lines().next().unwrap_or_default();
    let json = first
        .strip_prefix(CONFIG_PREFIX)
        .ok_or_else(|| Error::invalid("csv", "missing config line"))?;
    let cfg: RunConfig = serde_json::from_str(json)
        .map_err(|e| Error::invalid("csv", format!("bad config line: {e}")))?;

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_err(&path, e))?;
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::invalid("csv", "unexpected sweep header"));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(&path, e))?;
        let v = row
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::invalid("csv", format!("`{s}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if v.len() != SWEEP_HEADER.len() {
            return Err(Error::invalid("csv", "wrong column count"));
        }
        records.push(SweepRecord {
            b: v[0],
            purity: v[1],
            fidelity: v[2],
            lambda_top5: [v[3], v[4], v[5], v[6], v[7]],
            overlap_with_r: v[8],
        });
    }
    Ok((cfg, records))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Moves I/O failures of a writer onto the real destination path.
fn retarget(r: Result<()>, path: &Path) -> Result<()> {
    r.map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Path of the mode table for one `B` when several are written; a single
/// table goes to `base` itself.
pub fn modes_path(base: &Path, b: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("modes");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_B{b}.{ext}"),
        None => format!("{stem}_B{b}"),
    };
    base.with_file_name(name)
}

/// Writes a sweep to `cfg.output` or stdout in the configured format.
pub fn emit_sweep(result: &SweepResult) -> Result<()> {
    let write = |w: &mut dyn Write| match result.config.format {
        OutputFormat::Csv => write_sweep_csv(result, w),
        OutputFormat::Json => write_json(result, w),
    };
    match &result.config.output {
        Some(path) => {
            let mut f = create(path)?;
            retarget(write(&mut f), path)?;
            f.flush().map_err(io_err(path))
        }
        None => write(&mut std::io::stdout().lock()),
    }
}

/// Writes mode tables. CSV gets one file per `B` (or consecutive blocks on
/// stdout); JSON gets one document with records and tables.
pub fn emit_modes(result: &SweepResult) -> Result<()> {
    let cfg = &result.config;
    if cfg.format == OutputFormat::Json {
        return emit_sweep(result);
    }
    match &cfg.output {
        Some(base) => {
            for table in &result.modes {
                let path = if result.modes.len() == 1 {
                    base.clone()
                } else {
                    modes_path(base, table.b)
                };
                let mut f = create(&path)?;
                retarget(write_modes_csv(table, cfg, &mut f), &path)?;
                f.flush().map_err(io_err(&path))?;
            }
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            for table in &result.modes {
                write_modes_csv(table, cfg, &mut out)?;
            }
            Ok(())
        }
    }
}
