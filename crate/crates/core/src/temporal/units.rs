//! Reduction of physical parameters to bandwidth-normalized ones.
//!
//! Every computation in this crate runs with `Δf = 1`, so one time unit is
//! `1/Δf` and the detector width in those units is exactly `B = Δf·Δt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Experimental parameters in arbitrary but consistent physical units
/// (e.g. hertz and seconds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup {
    /// Source bandwidth Δf (HWHM).
    pub bandwidth: f64,
    /// Detector time resolution Δt.
    pub resolution: f64,
    /// Window width T.
    pub span: f64,
    /// Detection time t_c.
    pub detection_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSetup {
    /// `B = Δf·Δt`.
    pub b: f64,
    /// `T·Δf`.
    pub span: f64,
    /// `t_c·Δf`.
    pub detection_time: f64,
}

impl PhysicalSetup {
    pub fn normalize(&self) -> Result<NormalizedSetup> {
        if !(self.bandwidth.is_finite() && self.bandwidth > 0.0) {
            return Err(Error::invalid("bandwidth_df", "must be positive"));
        }
        if !(self.resolution.is_finite() && self.resolution >= 0.0) {
            return Err(Error::invalid("width_dt", "must be non-negative"));
        }
        Ok(NormalizedSetup {
            b: self.bandwidth * self.resolution,
            span: self.bandwidth * self.span,
            detection_time: self.bandwidth * self.detection_time,
        })
    }

    /// Converts a normalized time back to physical units.
    pub fn to_physical_time(&self, normalized: f64) -> f64 {
        normalized / self.bandwidth
    }
}
