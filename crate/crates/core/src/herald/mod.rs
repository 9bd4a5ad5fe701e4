//! Single-photon heralded density kernel for a detector with timing jitter.

pub mod analytic;
mod kernel;
pub mod quadrature;

pub use analytic::{rho1_delta, rho1_gaussian_analytic, rho1_rect_analytic};
pub use kernel::{
    build_kernel1, herald_rate_density, HeraldedKernel1, KernelPath, EDGE_LEAKAGE_WARN,
};
pub use quadrature::rho1_quadrature;

use crate::temporal::{JitterKernel, JitterShape};

/// Closed-form kernel for any jitter family, in `t_c`-relative coordinates.
pub fn rho1_analytic(t1: f64, t2: f64, jitter: &JitterKernel, gamma: f64) -> f64 {
    match jitter.shape() {
        JitterShape::Gaussian => rho1_gaussian_analytic(t1, t2, jitter.width(), gamma),
        JitterShape::Rectangular => rho1_rect_analytic(t1, t2, jitter.width(), gamma),
        JitterShape::Delta => rho1_delta(t1, t2, gamma),
    }
}
