use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JitterShape {
    /// Uniform over a full width `Δt`.
    #[serde(rename = "rect")]
    Rectangular,
    /// Gaussian with full width at half maximum `Δt`.
    Gaussian,
    /// Ideal detector; handled analytically, never sampled.
    Delta,
}

impl fmt::Display for JitterShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JitterShape::Rectangular => "rect",
            JitterShape::Gaussian => "gaussian",
            JitterShape::Delta => "delta",
        })
    }
}

impl FromStr for JitterShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" => Ok(JitterShape::Rectangular),
            "gaussian" | "gauss" => Ok(JitterShape::Gaussian),
            "delta" => Ok(JitterShape::Delta),
            other => Err(Error::invalid(
                "jitter",
                format!("unknown shape `{other}` (expected gaussian, rect or delta)"),
            )),
        }
    }
}

/// Detector timing response `g(t)`, normalized so that `∫g = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterKernel {
    shape: JitterShape,
    width: f64,
}

impl JitterKernel {
    pub fn new(shape: JitterShape, width: f64) -> Result<Self> {
        match shape {
            JitterShape::Delta => Ok(Self::delta()),
            _ if width.is_finite() && width > 0.0 => Ok(Self { shape, width }),
            _ => Err(Error::invalid(
                "width_dt",
                format!("{shape} jitter needs a positive width, got {width}"),
            )),
        }
    }

    pub fn delta() -> Self {
        Self {
            shape: JitterShape::Delta,
            width: 0.0,
        }
    }

    pub fn gaussian(width: f64) -> Result<Self> {
        Self::new(JitterShape::Gaussian, width)
    }

    pub fn rectangular(width: f64) -> Result<Self> {
        Self::new(JitterShape::Rectangular, width)
    }

    pub fn shape(&self) -> JitterShape {
        self.shape
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Gaussian exponent `4 ln2 / Δt²`.
    pub fn mu(&self) -> f64 {
        4.0 * LN_2 / (self.width * self.width)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self.shape {
            JitterShape::Rectangular => Ok(if t.abs() <= 0.5 * self.width {
                1.0 / self.width
            } else {
                0.0
            }),
            JitterShape::Gaussian => {
                let mu = self.mu();
                Ok((mu / PI).sqrt() * (-mu * t * t).exp())
            }
            JitterShape::Delta => Err(Error::UnsupportedOperation(
                "pointwise evaluation of delta jitter",
            )),
        }
    }
}
