use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Photon-pair correlation amplitude of a weakly pumped OPO,
/// `r(t) = ε·√(2π)·exp(-γ|t|/2)` with `γ = 4πΔf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceKernel {
    /// Half width at half maximum of the source spectrum.
    pub bandwidth: f64,
    /// Relative pump amplitude ε (dimensionless).
    pub amplitude: f64,
}

impl Default for SourceKernel {
    fn default() -> Self {
        Self::normalized(1.0)
    }
}

impl SourceKernel {
    pub fn new(bandwidth: f64, amplitude: f64) -> Self {
        Self {
            bandwidth,
            amplitude,
        }
    }

    /// Source in bandwidth-normalized units (`Δf = 1`).
    pub fn normalized(amplitude: f64) -> Self {
        Self::new(1.0, amplitude)
    }

    pub fn gamma(&self) -> f64 {
        4.0 * PI * self.bandwidth
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * (2.0 * PI).sqrt() * self.envelope(t)
    }

    /// Unit-peak envelope `exp(-γ|t|/2)`.
    pub fn envelope(&self, t: f64) -> f64 {
        envelope(t, self.gamma())
    }
}

pub(crate) fn envelope(t: f64, gamma: f64) -> f64 {
    (-0.5 * gamma * t.abs()).exp()
}
