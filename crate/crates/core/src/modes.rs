//! Temporal-mode decomposition of heralded states.
//!
//! A trace-normalized, real symmetric kernel is diagonalized densely; its
//! eigenvectors are the discrete temporal modes and its eigenvalues the
//! mixture weights. Purity and fidelity follow from the spectrum.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::herald::HeraldedKernel1;
use crate::temporal::{envelope, mode_overlap, DiscreteMode, JitterShape, SourceKernel, TimeGrid};

/// Relative asymmetry tolerated on input matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are treated as round-off.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct ModeDecomposition {
    grid: TimeGrid,
    eigenvalues: Vec<f64>,
    #[serde(skip)]
    modes: Vec<DiscreteMode>,
    source_b: f64,
    jitter_shape: JitterShape,
    detection_time: f64,
    #[serde(skip)]
    gamma: f64,
}

impl ModeDecomposition {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Mixture weights, descending, summing to one.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn modes(&self) -> &[DiscreteMode] {
        &self.modes
    }

    pub fn mode(&self, k: usize) -> &DiscreteMode {
        &self.modes[k]
    }

    pub fn source_b(&self) -> f64 {
        self.source_b
    }

    pub fn jitter_shape(&self) -> JitterShape {
        self.jitter_shape
    }

    pub fn detection_time(&self) -> f64 {
        self.detection_time
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn fidelity(&self) -> f64 {
        fidelity(self)
    }

    /// `⟨f₁|r̂⟩` with the ideal-detector mode centered on `t_c`.
    pub fn overlap_with_envelope(&self) -> f64 {
        let ideal = DiscreteMode::from_function(self.grid, |t| {
            envelope(t - self.detection_time, self.gamma)
        })
        .expect("envelope is positive");
        mode_overlap(&self.modes[0], &ideal).expect("same grid")
    }
}

/// Normalized source envelope `r̂(t − t_c)` on `grid`.
pub fn envelope_mode(grid: TimeGrid, detection_time: f64) -> DiscreteMode {
    let source = SourceKernel::default();
    DiscreteMode::from_function(grid, |t| source.envelope(t - detection_time))
        .expect("envelope is positive")
}

/// Diagonalizes the single-photon kernel directly.
pub fn decompose(kernel: &HeraldedKernel1) -> Result<ModeDecomposition> {
    decompose_kernel_matrix(kernel.matrix(), kernel)
}

/// Decomposes `matrix` using the grid, detector and source of `kernel`.
pub(crate) fn decompose_kernel_matrix(
    matrix: &DMatrix<f64>,
    kernel: &HeraldedKernel1,
) -> Result<ModeDecomposition> {
    let mut d = decompose_matrix(
        matrix,
        *kernel.grid(),
        kernel.b(),
        kernel.jitter().shape(),
        kernel.detection_time(),
    )?;
    d.gamma = kernel.source().gamma();
    Ok(d)
}

/// Trace-normalizes and fully diagonalizes a real symmetric PSD matrix
/// given on a normalized-unit grid.
pub fn decompose_matrix(
    matrix: &DMatrix<f64>,
    grid: TimeGrid,
    source_b: f64,
    jitter_shape: JitterShape,
    detection_time: f64,
) -> Result<ModeDecomposition> {
    let m = grid.divisions();
    if matrix.nrows() != m || matrix.ncols() != m {
        return Err(Error::invalid(
            "matrix",
            format!(
                "expected {m}x{m}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ),
        ));
    }
    let scale = matrix.amax();
    let asymmetry = max_asymmetry(matrix);
    if !(scale > 0.0) || asymmetry > SYMMETRY_TOL * scale {
        return Err(Error::invalid(
            "matrix",
            format!("not symmetric (max |A - Aᵀ| = {asymmetry:e}, max |A| = {scale:e})"),
        ));
    }
    let trace = matrix.trace();
    if !(trace > 0.0) {
        return Err(Error::invalid("matrix", "trace must be positive"));
    }
    let normalized = matrix / trace;

    let eigen = normalized
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::NumericalFailure {
            context: "symmetric eigensolver",
            achieved_error: f64::NAN,
        })?;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    let mut eigenvalues = Vec::with_capacity(m);
    for &k in &order {
        let lambda = eigen.eigenvalues[k];
        if lambda < -NEGATIVE_CLAMP {
            return Err(Error::NumericalFailure {
                context: "kernel is not positive semidefinite",
                achieved_error: lambda,
            });
        }
        eigenvalues.push(lambda.max(0.0));
    }

    let anchor = grid.nearest_index(detection_time);
    let modes = order
        .iter()
        .map(|&k| {
            let mut values: Vec<f64> = eigen.eigenvectors.column(k).iter().copied().collect();
            if orientation(&values, anchor) < 0.0 {
                values.iter_mut().for_each(|v| *v = -*v);
            }
            DiscreteMode::new(grid, values)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ModeDecomposition {
        grid,
        eigenvalues,
        modes,
        source_b,
        jitter_shape,
        detection_time,
        gamma: SourceKernel::default().gamma(),
    })
}

/// Sign reference for a mode: its value at the anchor bin, or, when that is
/// numerically zero (odd modes), its first clearly nonzero value after it.
fn orientation(values: &[f64], anchor: usize) -> f64 {
    let peak = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 1e-9 * peak;
    values[anchor..]
        .iter()
        .chain(values[..anchor].iter().rev())
        .copied()
        .find(|v| v.abs() > floor)
        .unwrap_or(0.0)
}

fn max_asymmetry(matrix: &DMatrix<f64>) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    worst
}

/// `tr ρ² = Σ λ_k²`.
pub fn purity(d: &ModeDecomposition) -> f64 {
    d.eigenvalues.iter().map(|l| l * l).sum()
}

/// Overlap with the leading mode, `λ₁`.
pub fn fidelity(d: &ModeDecomposition) -> f64 {
    d.eigenvalues[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herald::build_kernel1;

    fn decomposition(shape: JitterShape, b: f64, span: f64, m: usize) -> ModeDecomposition {
        let k = build_kernel1(TimeGrid::new(span, m).unwrap(), shape, b, 0.0).unwrap();
        decompose(&k).unwrap()
    }

    #[test]
    fn delta_is_pure() {
        let d = decomposition(JitterShape::Delta, 0.0, 10.0, 800);
        assert!((d.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((purity(&d) - 1.0).abs() < 1e-10);
        assert!((fidelity(&d) - 1.0).abs() < 1e-10);
        assert!(d.eigenvalues()[1] / d.eigenvalues()[0] < 1e-12);
        assert!((d.overlap_with_envelope() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_invariants() {
        let d = decomposition(JitterShape::Gaussian, 0.5, 6.0, 200);
        let sum: f64 = d.eigenvalues().iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        assert!(*d.eigenvalues().last().unwrap() >= 0.0);
        for a in 0..6 {
            for b in 0..6 {
                let o = mode_overlap(d.mode(a), d.mode(b)).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((o - expected).abs() < 1e-10);
            }
        }
        assert!(purity(&d) >= fidelity(&d).powi(2));
    }

    #[test]
    fn reconstruction_residual() {
        let grid = TimeGrid::new(6.0, 150).unwrap();
        let k = build_kernel1(grid, JitterShape::Rectangular, 0.7, 0.0).unwrap();
        let d = decompose(&k).unwrap();
        let target = k.normalized_matrix();
        let mut rebuilt = DMatrix::<f64>::zeros(150, 150);
        for (lambda, f) in d.eigenvalues().iter().zip(d.modes()) {
            let v = nalgebra::DVector::from_column_slice(f.values());
            rebuilt += *lambda * &v * v.transpose();
        }
        assert!((rebuilt - target).amax() <= 1e-9);
    }

    #[test]
    fn sign_convention() {
        let d = decomposition(JitterShape::Gaussian, 1.0, 10.0, 400);
        let anchor = d.grid().nearest_index(0.0);
        assert!(d.mode(0).values()[anchor] > 0.0);
        assert!(d
            .modes()
            .iter()
            .all(|f| orientation(f.values(), anchor) > 0.0));
    }

    #[test]
    fn second_mode_odd_at_large_b() {
        let d = decomposition(JitterShape::Gaussian, 1.0, 10.0, 400);
        assert!(d.eigenvalues()[1] > 0.05);
        let f2 = d.mode(1).values();
        let n = f2.len();
        let worst = (0..n)
            .map(|j| (f2[j] + f2[n - 1 - j]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let grid = TimeGrid::new(1.0, 3).unwrap();
        let mut m = DMatrix::<f64>::identity(3, 3);
        m[(0, 1)] = 0.1;
        assert!(matches!(
            decompose_matrix(&m, grid, 0.1, JitterShape::Gaussian, 0.0),
            Err(Error::InvalidArgument { .. })
        ));
    }

    #[test]
    fn rejects_indefinite_input() {
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            decompose_matrix(&m, grid, 0.1, JitterShape::Gaussian, 0.0),
            Err(Error::NumericalFailure { .. })
        ));
    }
}
