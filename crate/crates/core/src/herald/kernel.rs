use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analytic::{rho1_delta, rho1_gaussian_analytic, rho1_rect_analytic};
use crate::error::{Error, Result};
use crate::temporal::units::PhysicalSetup;
use crate::temporal::{envelope, JitterKernel, JitterShape, SourceKernel, TimeGrid};

/// Envelope value at the window edge (relative to peak) above which runs
/// log a truncation warning.
pub const EDGE_LEAKAGE_WARN: f64 = 1e-6;

/// Which evaluation route filled a kernel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelPath {
    AnalyticGaussian,
    AnalyticRect,
    DeltaExact,
}

/// Discretized single-photon heralded kernel `ρ[i,j] = ρ(t_i − t_c, t_j − t_c)`.
///
/// The stored matrix is built from the unit-peak envelope and is therefore
/// independent of the pump amplitude ε, which is carried separately.
#[derive(Debug, Clone)]
pub struct HeraldedKernel1 {
    grid: TimeGrid,
    matrix: DMatrix<f64>,
    jitter: JitterKernel,
    b: f64,
    detection_time: f64,
    source: SourceKernel,
    path: KernelPath,
    edge_leakage: f64,
}

/// Builds the kernel for a detector of relative width `b = Δf·Δt`.
///
/// `b == 0` or a delta shape selects the exact ideal-detector path.
pub fn build_kernel1(
    grid: TimeGrid,
    jitter: JitterShape,
    b: f64,
    detection_time: f64,
) -> Result<HeraldedKernel1> {
    HeraldedKernel1::build(grid, jitter, b, detection_time, SourceKernel::default())
}

impl HeraldedKernel1 {
    /// Normalized-unit build; only the amplitude of `source` is used.
    pub fn build(
        grid: TimeGrid,
        shape: JitterShape,
        b: f64,
        detection_time: f64,
        source: SourceKernel,
    ) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::invalid(
                "B",
                format!("must be non-negative, got {b}"),
            ));
        }
        if !detection_time.is_finite() {
            return Err(Error::invalid("tc", "must be finite"));
        }
        // one time unit is 1/Δf, so the detector width is B itself
        let source = SourceKernel::normalized(source.amplitude);
        Self::assemble(grid, shape, b, b, source.gamma(), detection_time, source)
    }

    /// Builds the kernel directly in physical time: the grid spans
    /// `setup.span`, `γ = 4π·setup.bandwidth` and the detector width is
    /// `setup.resolution`. Apart from rounding this equals the normalized
    /// kernel on the rescaled grid.
    pub fn build_physical(
        setup: &PhysicalSetup,
        shape: JitterShape,
        divisions: usize,
        amplitude: f64,
    ) -> Result<Self> {
        let normalized = setup.normalize()?;
        let grid = TimeGrid::new(setup.span, divisions)?;
        if !setup.detection_time.is_finite() {
            return Err(Error::invalid("tc", "must be finite"));
        }
        let source = SourceKernel::new(setup.bandwidth, amplitude);
        Self::assemble(
            grid,
            shape,
            normalized.b,
            setup.resolution,
            source.gamma(),
            setup.detection_time,
            source,
        )
    }

    fn assemble(
        grid: TimeGrid,
        shape: JitterShape,
        b: f64,
        width: f64,
        gamma: f64,
        detection_time: f64,
        source: SourceKernel,
    ) -> Result<Self> {
        let jitter = if b == 0.0 {
            JitterKernel::delta()
        } else {
            JitterKernel::new(shape, width)?
        };
        let path = match jitter.shape() {
            JitterShape::Gaussian => KernelPath::AnalyticGaussian,
            JitterShape::Rectangular => KernelPath::AnalyticRect,
            JitterShape::Delta => KernelPath::DeltaExact,
        };
        let eval = |t1: f64, t2: f64| match path {
            KernelPath::AnalyticGaussian => rho1_gaussian_analytic(t1, t2, width, gamma),
            KernelPath::AnalyticRect => rho1_rect_analytic(t1, t2, width, gamma),
            KernelPath::DeltaExact => rho1_delta(t1, t2, gamma),
        };
        let matrix = fill_symmetric(&grid, detection_time, eval);

        let edge_leakage = envelope(-0.5 * grid.span() - detection_time, gamma)
            .max(envelope(0.5 * grid.span() - detection_time, gamma));
        Ok(Self {
            grid,
            matrix,
            jitter,
            b,
            detection_time,
            source,
            path,
            edge_leakage,
        })
    }

    /// Replaces the pump amplitude ε. Only [`Self::trace_raw`] depends on it.
    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.source.amplitude = amplitude;
        self
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn jitter(&self) -> &JitterKernel {
        &self.jitter
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn detection_time(&self) -> f64 {
        self.detection_time
    }

    pub fn source(&self) -> &SourceKernel {
        &self.source
    }

    pub fn path(&self) -> KernelPath {
        self.path
    }

    /// Envelope at the nearer window edge relative to its peak.
    pub fn edge_leakage(&self) -> f64 {
        self.edge_leakage
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Trace including the `ε²` amplitude factor.
    pub fn trace_raw(&self) -> f64 {
        self.source.amplitude * self.source.amplitude * self.trace()
    }

    /// Kernel divided by its trace.
    pub fn normalized_matrix(&self) -> DMatrix<f64> {
        &self.matrix / self.trace()
    }
}

/// Fills `ρ[i,j]` for `i ≥ j` (so `t_i ≥ t_j`) and mirrors.
fn fill_symmetric(
    grid: &TimeGrid,
    detection_time: f64,
    eval: impl Fn(f64, f64) -> f64 + Sync,
) -> DMatrix<f64> {
    let m = grid.divisions();
    let times: Vec<f64> = grid.centers().iter().map(|c| c - detection_time).collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| (0..=i).map(|j| eval(times[i], times[j])).collect())
        .collect();
    let mut matrix = DMatrix::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
    }
    matrix
}

/// Unnormalized heralding probability density `p(1, t_c)`.
pub fn herald_rate_density(
    grid: TimeGrid,
    jitter: JitterShape,
    b: f64,
    detection_time: f64,
    amplitude: f64,
) -> Result<f64> {
    let kernel = build_kernel1(grid, jitter, b, detection_time)?.with_amplitude(amplitude);
    Ok(kernel.trace_raw() * grid.bin_width())
}
