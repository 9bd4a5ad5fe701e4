use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal::JitterShape;

pub const MAX_DIVISIONS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(
                "format",
                format!("unknown format `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modes,
    Sweep,
}

/// Named configurations matching the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Single-photon modes, M = 800, T = 10.
    Fig3,
    /// Two-photon modes, M = 800, T = 10.
    Fig4,
    /// Single-photon purity sweep, M = 800, T = 10.
    Fig5a,
    /// Two-photon purity sweep, M = 100, T = 4.
    Fig5b,
    /// Single-photon fidelity sweep (same run as `fig5a`).
    Fig6a,
    /// Two-photon fidelity sweep (same run as `fig5b`).
    Fig6b,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig6a,
        Preset::Fig6b,
    ];

    pub fn command(&self) -> Command {
        match self {
            Preset::Fig3 | Preset::Fig4 => Command::Modes,
            _ => Command::Sweep,
        }
    }

    pub fn config(&self) -> RunConfig {
        let (photons, span, divisions, b_values) = match self {
            Preset::Fig3 => (1, 10.0, 800, MODE_FIGURE_B.to_vec()),
            Preset::Fig4 => (2, 10.0, 800, MODE_FIGURE_B.to_vec()),
            Preset::Fig5a | Preset::Fig6a => (1, 10.0, 800, sweep_grid()),
            Preset::Fig5b | Preset::Fig6b => (2, 4.0, 100, sweep_grid()),
        };
        RunConfig {
            photons,
            jitter: JitterShape::Gaussian,
            b_values,
            span,
            divisions,
            detection_time: 0.0,
            format: OutputFormat::Csv,
            output: None,
            modes_to_emit: 2,
            amplitude: 1.0,
            preset: Some(*self),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
        })
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::invalid("preset", format!("unknown preset `{s}`")))
    }
}

const MODE_FIGURE_B: [f64; 3] = [0.05, 0.25, 1.0];

/// `0` (ideal detector), `0.01..=0.20` in steps of 0.01, `0.25..=1.0` in
/// steps of 0.05.
pub fn sweep_grid() -> Vec<f64> {
    let mut b = vec![0.0];
    b.extend((1..=20).map(|k| k as f64 / 100.0));
    b.extend((5..=20).map(|k| k as f64 / 20.0));
    b
}

/// Fully resolved run description. Every output echoes it verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub photons: u8,
    pub jitter: JitterShape,
    #[serde(rename = "B_values")]
    pub b_values: Vec<f64>,
    #[serde(rename = "span_T")]
    pub span: f64,
    #[serde(rename = "divisions_M")]
    pub divisions: usize,
    #[serde(rename = "detection_time_tc")]
    pub detection_time: f64,
    #[serde(rename = "output_format")]
    pub format: OutputFormat,
    #[serde(rename = "output_path")]
    pub output: Option<PathBuf>,
    pub modes_to_emit: usize,
    #[serde(rename = "amplitude_eps")]
    pub amplitude: f64,
    pub preset: Option<Preset>,
}

impl RunConfig {
    /// Standard sweep grid: M = 800, T = 10 for one photon,
    /// M = 100, T = 4 for two.
    pub fn standard(photons: u8) -> Self {
        let mut cfg = if photons == 2 {
            Preset::Fig5b.config()
        } else {
            Preset::Fig5a.config()
        };
        cfg.photons = photons;
        cfg.preset = None;
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.photons, 1 | 2) {
            return Err(Error::invalid(
                "photons",
                format!("must be 1 or 2, got {}", self.photons),
            ));
        }
        if self.b_values.is_empty() {
            return Err(Error::invalid("B_values", "must not be empty"));
        }
        if self.b_values.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::invalid(
                "B_values",
                "must be finite and non-negative",
            ));
        }
        if self.b_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("B_values", "must be strictly increasing"));
        }
        if !(2..=MAX_DIVISIONS).contains(&self.divisions) {
            return Err(Error::invalid(
                "divisions_M",
                format!("must lie in [2, {MAX_DIVISIONS}], got {}", self.divisions),
            ));
        }
        if !(self.span.is_finite() && self.span > 0.0) {
            return Err(Error::invalid("span_T", "must be positive"));
        }
        if !self.detection_time.is_finite() {
            return Err(Error::invalid("detection_time_tc", "must be finite"));
        }
        if self.modes_to_emit == 0 || self.modes_to_emit > self.divisions {
            return Err(Error::invalid(
                "modes_to_emit",
                "must be between 1 and divisions_M",
            ));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::invalid("amplitude_eps", "must be positive"));
        }
        Ok(())
    }
}

/// Optional overrides as they arrive from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunRequest {
    pub preset: Option<Preset>,
    pub photons: Option<u8>,
    pub jitter: Option<JitterShape>,
    pub b_values: Option<Vec<f64>>,
    pub divisions: Option<usize>,
    pub span: Option<f64>,
    pub detection_time: Option<f64>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl RunRequest {
    /// Applies overrides on top of the preset, or on top of the standard grid
    /// for the requested photon number.
    pub fn resolve(self) -> Result<RunConfig> {
        let base = RunConfig::standard(self.photons.unwrap_or(1));
        self.resolve_over(base)
    }

    /// Like [`Self::resolve`], but without a preset the defaults are those of
    /// the mode figures: B ∈ {0.05, 0.25, 1}, M = 800, T = 10.
    pub fn resolve_modes(self) -> Result<RunConfig> {
        let mut base = if self.photons == Some(2) {
            Preset::Fig4.config()
        } else {
            Preset::Fig3.config()
        };
        base.preset = None;
        self.resolve_over(base)
    }

    fn resolve_over(self, base: RunConfig) -> Result<RunConfig> {
        let mut cfg = match self.preset {
            Some(p) => p.config(),
            None => base,
        };
        if let Some(p) = self.photons {
            cfg.photons = p;
        }
        if let Some(j) = self.jitter {
            cfg.jitter = j;
        }
        if let Some(b) = self.b_values {
            cfg.b_values = b;
        }
        if let Some(m) = self.divisions {
            cfg.divisions = m;
        }
        if let Some(t) = self.span {
            cfg.span = t;
        }
        if let Some(tc) = self.detection_time {
            cfg.detection_time = tc;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        cfg.output = self.output;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `0.05,0.1,0.2` or an inclusive range `start:step:stop`.
pub fn parse_b_values(spec: &str) -> Result<Vec<f64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::invalid("B", format!("`{s}` is not a number")))
    };
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(Error::invalid("B", "range must be start:step:stop"));
        };
        let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
        if !(step > 0.0) || stop < start {
            return Err(Error::invalid("B", "range needs step > 0 and stop ≥ start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        spec.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for p in Preset::ALL {
            p.config().validate().unwrap();
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert_eq!(Preset::Fig5b.config().divisions, 100);
        assert_eq!(Preset::Fig5b.config().span, 4.0);
        assert_eq!(Preset::Fig4.config().span, 10.0);
    }

    #[test]
    fn sweep_grid_shape() {
        let g = sweep_grid();
        assert_eq!(g[0], 0.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.contains(&0.05) && g.contains(&0.15) && g.contains(&0.25));
        assert_eq!(*g.last().unwrap(), 1.0);
    }

    #[test]
    fn b_parsing() {
        assert_eq!(
            parse_b_values("0.05,0.25,1").unwrap(),
            vec![0.05, 0.25, 1.0]
        );
        assert_eq!(
            parse_b_values("0.1:0.1:0.5").unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5]
        );
        assert!(parse_b_values("0.1:0.5").is_err());
        assert!(parse_b_values("abc").is_err());
    }

    #[test]
    fn validation_names_field() {
        let mut cfg = RunConfig::standard(1);
        cfg.b_values = vec![0.2, 0.1];
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidArgument {
                field: "B_values",
                ..
            })
        ));
        let mut cfg = RunConfig::standard(1);
        cfg.photons = 3;
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidArgument {
                field: "photons",
                ..
            })
        ));
        let mut cfg = RunConfig::standard(1);
        cfg.divisions = 5000;
        assert!(matches!(
            cfg.validate(),
            Err(Error::InvalidArgument {
                field: "divisions_M",
                ..
            })
        ));
    }

    #[test]
    fn photon_default_grids() {
        let two = RunRequest {
            photons: Some(2),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!((two.divisions, two.span), (100, 4.0));
        let one = RunRequest::default().resolve().unwrap();
        assert_eq!((one.divisions, one.span), (800, 10.0));
        let modes = RunRequest {
            photons: Some(2),
            ..Default::default()
        }
        .resolve_modes()
        .unwrap();
        assert_eq!(
            (modes.divisions, modes.span, modes.preset),
            (800, 10.0, None)
        );
        assert_eq!(modes.b_values, vec![0.05, 0.25, 1.0]);
    }
}
