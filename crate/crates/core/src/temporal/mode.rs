use serde::{Deserialize, Serialize};

use super::TimeGrid;
use crate::error::{Error, Result};

/// A real temporal mode sampled on a [`TimeGrid`].
///
/// `values[j]` is the bin coefficient `√(T/M)·f(t_j)`, so a normalized
/// continuous mode has unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMode {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl DiscreteMode {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.divisions() {
            return Err(Error::invalid(
                "values",
                format!(
                    "expected {} samples, got {}",
                    grid.divisions(),
                    values.len()
                ),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at bin centers and rescales to unit norm.
    pub fn from_function(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let scale = grid.bin_width().sqrt();
        let values = (0..grid.divisions())
            .map(|j| scale * f(grid.center(j)))
            .collect();
        Self::new(grid, values)?.normalized()
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("values", "cannot normalize a zero mode"));
        }
        self.values.iter_mut().for_each(|v| *v /= norm);
        Ok(self)
    }

    /// Continuous-time amplitude `f(t_j)` recovered from the bin coefficient.
    pub fn amplitude_at(&self, j: usize) -> f64 {
        self.values[j] / self.grid.bin_width().sqrt()
    }
}

impl std::ops::Neg for DiscreteMode {
    type Output = Self;

    fn neg(mut self) -> Self {
        self.values.iter_mut().for_each(|v| *v = -*v);
        self
    }
}

/// Inner product of two modes on the same grid.
pub fn mode_overlap(a: &DiscreteMode, b: &DiscreteMode) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::invalid("grid", "modes live on different grids"));
    }
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TimeGrid {
        TimeGrid::new(10.0, 400).unwrap()
    }

    #[test]
    fn self_overlap_is_one() {
        let f = DiscreteMode::from_function(grid(), |t| (-t * t).exp()).unwrap();
        assert!((mode_overlap(&f, &f).unwrap() - 1.0).abs() < 1e-14);
        assert!((mode_overlap(&f, &-f.clone()).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_grids() {
        let a = DiscreteMode::from_function(grid(), |t| (-t * t).exp()).unwrap();
        let b = DiscreteMode::from_function(TimeGrid::new(10.0, 401).unwrap(), |t| (-t * t).exp())
            .unwrap();
        assert!(matches!(
            mode_overlap(&a, &b),
            Err(Error::InvalidArgument { field: "grid", .. })
        ));
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(DiscreteMode::new(grid(), vec![0.0; 3]).is_err());
        assert!(DiscreteMode::new(grid(), vec![0.0; 400])
            .unwrap()
            .normalized()
            .is_err());
    }

    #[test]
    fn continuous_amplitude_round_trip() {
        // a unit-norm gaussian has ∫f² = 1 with f(0) = (2/π)^(1/4)
        let g = TimeGrid::new(20.0, 4000).unwrap();
        let f = DiscreteMode::from_function(g, |t| (-t * t).exp()).unwrap();
        let mid = g.nearest_index(0.0);
        let expected = (2.0 / std::f64::consts::PI).powf(0.25) * (-g.center(mid).powi(2)).exp();
        assert!((f.amplitude_at(mid) - expected).abs() < 1e-9);
    }
}
