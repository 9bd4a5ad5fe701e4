use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite observation window `[-T/2, T/2]` split into `M` equal bins.
///
/// Kernels are sampled at bin centers. Times are in units of `1/Δf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    span: f64,
    divisions: usize,
}

impl TimeGrid {
    pub fn new(span: f64, divisions: usize) -> Result<Self> {
        if !(span.is_finite() && span > 0.0) {
            return Err(Error::invalid(
                "span_T",
                format!("must be positive, got {span}"),
            ));
        }
        if divisions < 2 {
            return Err(Error::invalid(
                "divisions_M",
                format!("must be at least 2, got {divisions}"),
            ));
        }
        Ok(Self { span, divisions })
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn divisions(&self) -> usize {
        self.divisions
    }

    pub fn bin_width(&self) -> f64 {
        self.span / self.divisions as f64
    }

    /// Center of bin `j`, `(j + 1/2)·T/M - T/2`.
    ///
    /// Evaluated as an odd integer times `T/(2M)` so that mirrored bins are
    /// exact negatives of each other.
    pub fn center(&self, j: usize) -> f64 {
        let half_width = 0.5 * self.bin_width();
        (2 * j as i64 + 1 - self.divisions as i64) as f64 * half_width
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.divisions).map(|j| self.center(j)).collect()
    }

    /// Index of the bin whose center is closest to `t` (clamped to the window).
    pub fn nearest_index(&self, t: f64) -> usize {
        let pos = (t + 0.5 * self.span) / self.bin_width() - 0.5;
        if pos <= 0.0 {
            0
        } else {
            (pos.round() as usize).min(self.divisions - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grids() {
        let g = TimeGrid::new(10.0, 800).unwrap();
        assert!((g.bin_width() - 0.0125).abs() < 1e-15);
        let g = TimeGrid::new(4.0, 100).unwrap();
        assert!((g.bin_width() - 0.04).abs() < 1e-15);
    }

    #[test]
    fn two_bins() {
        let g = TimeGrid::new(1.0, 2).unwrap();
        assert_eq!(g.centers(), vec![-0.25, 0.25]);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            TimeGrid::new(0.0, 10),
            Err(Error::InvalidArgument {
                field: "span_T",
                ..
            })
        ));
        assert!(matches!(
            TimeGrid::new(-1.0, 10),
            Err(Error::InvalidArgument { .. })
        ));
        assert!(matches!(
            TimeGrid::new(1.0, 1),
            Err(Error::InvalidArgument {
                field: "divisions_M",
                ..
            })
        ));
    }

    #[test]
    fn centers_symmetric_and_increasing() {
        for m in [2, 3, 7, 100, 800] {
            let g = TimeGrid::new(10.0, m).unwrap();
            let c = g.centers();
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            for j in 0..m {
                assert_eq!(c[j], -c[m - 1 - j]);
                let reference = (j as f64 + 0.5) * g.bin_width() - 5.0;
                assert!((c[j] - reference).abs() < 1e-12);
            }
            assert!((g.bin_width() * m as f64 - 10.0).abs() <= 10.0 * f64::EPSILON);
        }
    }

    #[test]
    fn nearest_index_clamps() {
        let g = TimeGrid::new(10.0, 800).unwrap();
        assert_eq!(g.nearest_index(-100.0), 0);
        assert_eq!(g.nearest_index(100.0), 799);
        assert_eq!(g.nearest_index(g.center(123)), 123);
        assert_eq!(g.nearest_index(1.0), g.nearest_index(0.0) + 80);
    }
}
