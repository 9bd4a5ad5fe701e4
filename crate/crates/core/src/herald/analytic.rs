//! Closed forms of the heralded single-photon kernel
//! `ρ(t′,t″) = ∫dt g(t)·r̂(t′−t)·r̂(t″−t)` with `r̂(t) = exp(-γ|t|/2)`.
//!
//! Both forms use a unit-mass `g`, so they tend to `r̂(t′)·r̂(t″)` as the
//! detector width goes to zero. All arithmetic is arranged so that no
//! intermediate overflows or cancels for narrow jitters: the Gaussian form
//! goes through `erfcx`, the rectangular one through `expm1`.

use std::f64::consts::LN_2;

use crate::special::{erf, erfc, erfcx};

/// Gaussian jitter of FWHM `dt`.
pub fn rho1_gaussian_analytic(t1: f64, t2: f64, dt: f64, gamma: f64) -> f64 {
    gaussian(t1, t2, dt, gamma, false)
}

/// Same as [`rho1_gaussian_analytic`] with the sign of one error-function
/// term flipped. Exists only so that validation can prove it catches a
/// broken kernel.
#[doc(hidden)]
pub fn rho1_gaussian_faulty(t1: f64, t2: f64, dt: f64, gamma: f64) -> f64 {
    gaussian(t1, t2, dt, gamma, true)
}

fn gaussian(t1: f64, t2: f64, dt: f64, gamma: f64, flip_erf_sign: bool) -> f64 {
    let (a, b) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
    let mu = 4.0 * LN_2 / (dt * dt);
    let s = mu.sqrt();
    let shift = gamma / (2.0 * mu);
    let decay = (-0.5 * gamma * (a - b)).exp();

    // t < t″
    let x = s * (shift - b);
    let below = if x >= 0.0 {
        (-0.5 * gamma * (a - b) - mu * b * b).exp() * erfcx(x)
    } else {
        (-0.5 * gamma * (a + b) + gamma * shift * 0.5).exp() * erfc(x)
    };

    // t″ < t < t′
    let between = if flip_erf_sign {
        erf(s * a) + erf(s * b)
    } else if b >= 0.0 {
        erfc(s * b) - erfc(s * a)
    } else if a <= 0.0 {
        erfc(-s * a) - erfc(-s * b)
    } else {
        erf(s * a) - erf(s * b)
    };

    // t > t′
    let y = s * (a + shift);
    let above = if y >= 0.0 {
        (-0.5 * gamma * (a - b) - mu * a * a).exp() * erfcx(y)
    } else {
        (0.5 * gamma * (a + b) + gamma * shift * 0.5).exp() * erfc(y)
    };

    0.5 * (below + decay * between + above)
}

/// Rectangular jitter of full width `dt`.
///
/// Dispatches among the six regions spanned by `t′, t″` relative to `±dt/2`
/// after ordering `t′ ≥ t″`.
pub fn rho1_rect_analytic(t1: f64, t2: f64, dt: f64, gamma: f64) -> f64 {
    let (a, b) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
    let h = 0.5 * dt;
    let g_dt = gamma * dt;
    let decay = (-0.5 * gamma * (a - b)).exp();
    // (1 - e^{-γ(b+h)}) and (1 - e^{-γ(h-a)}): mass of the two outer
    // pieces of the window, scaled by γ
    let lower_piece = || -(-gamma * (b + h)).exp_m1();
    let upper_piece = || -(-gamma * (h - a)).exp_m1();

    if b >= h {
        (-0.5 * gamma * (a + b)).exp() * 2.0 * (gamma * h).sinh() / g_dt
    } else if a >= h && b > -h {
        decay * (lower_piece() / g_dt + (h - b) / dt)
    } else if a >= h {
        decay
    } else if b > -h {
        decay * ((lower_piece() + upper_piece()) / g_dt + (a - b) / dt)
    } else if a > -h {
        decay * ((a + h) / dt + upper_piece() / g_dt)
    } else {
        (0.5 * gamma * (a + b)).exp() * 2.0 * (gamma * h).sinh() / g_dt
    }
}

/// Ideal detector: `r̂(t′)·r̂(t″)`.
pub fn rho1_delta(t1: f64, t2: f64, gamma: f64) -> f64 {
    crate::temporal::envelope(t1, gamma) * crate::temporal::envelope(t2, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const GAMMA: f64 = 4.0 * PI;

    #[test]
    fn exchange_symmetry() {
        for &(a, b) in &[(0.3, -0.1), (1.2, 0.4), (-2.0, 0.05), (0.0, 0.0)] {
            for dt in [0.05, 0.25, 1.0] {
                assert_eq!(
                    rho1_gaussian_analytic(a, b, dt, GAMMA),
                    rho1_gaussian_analytic(b, a, dt, GAMMA)
                );
                assert_eq!(
                    rho1_rect_analytic(a, b, dt, GAMMA),
                    rho1_rect_analytic(b, a, dt, GAMMA)
                );
            }
        }
    }

    #[test]
    fn narrow_detector_limit() {
        // away from t = 0 the deviation is second order in Δt
        for &(a, b) in &[(0.3, -0.1), (1.2, 0.4), (-0.7, -0.2), (0.5, 0.5)] {
            let ideal = rho1_delta(a, b, GAMMA);
            let g = rho1_gaussian_analytic(a, b, 1e-4, GAMMA);
            let r = rho1_rect_analytic(a, b, 1e-4, GAMMA);
            assert!(
                (g - ideal).abs() < 1e-6,
                "gaussian ({a},{b}): {g} vs {ideal}"
            );
            assert!((r - ideal).abs() < 1e-6, "rect ({a},{b}): {r} vs {ideal}");
        }
        // on the kink it is first order: γ·E|τ| for Gaussian τ, γΔt/4 for the box
        let g = rho1_gaussian_analytic(0.0, 0.0, 1e-4, GAMMA);
        let r = rho1_rect_analytic(0.0, 0.0, 1e-4, GAMMA);
        let sigma = 1e-4 / (8.0 * LN_2).sqrt();
        let expected_g = GAMMA * sigma * (2.0 / std::f64::consts::PI).sqrt();
        assert!(((1.0 - g) / expected_g - 1.0).abs() < 1e-3);
        assert!(((1.0 - r) / (GAMMA * 1e-4 / 4.0) - 1.0).abs() < 1e-3);
        for dt in [1e-8, 1e-12] {
            assert!((rho1_gaussian_analytic(0.0, 0.0, dt, GAMMA) - 1.0).abs() < 1e-6);
            assert!((rho1_rect_analytic(0.0, 0.0, dt, GAMMA) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rect_far_branch_value() {
        // t′ > Δt/2, t″ < -Δt/2: the whole window lies between the two kinks
        let v = rho1_rect_analytic(1.0, -1.0, 0.5, GAMMA);
        let unnormalized = GAMMA * 0.5 * (-0.5 * GAMMA * 2.0).exp();
        assert!((v - unnormalized / (GAMMA * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn rect_continuous_across_boundaries() {
        let dt = 0.6;
        let h = dt / 2.0;
        let eps = 1e-12;
        let others = [-1.0, -h, -0.1, 0.0, 0.2, h, 0.9];
        for &edge in &[h, -h] {
            for &other in &others {
                let lo = rho1_rect_analytic(edge - eps, other, dt, GAMMA);
                let hi = rho1_rect_analytic(edge + eps, other, dt, GAMMA);
                assert!(
                    (lo - hi).abs() < 1e-8,
                    "edge {edge}, other {other}: {lo} vs {hi}"
                );
            }
        }
    }

    #[test]
    fn evenness_at_origin() {
        for &(a, b) in &[(0.3, -0.1), (1.2, 0.4), (0.05, 0.02)] {
            for dt in [0.1, 0.5] {
                let g0 = rho1_gaussian_analytic(a, b, dt, GAMMA);
                let g1 = rho1_gaussian_analytic(-a, -b, dt, GAMMA);
                assert!((g0 - g1).abs() <= 1e-14 * g0.abs().max(1e-300));
                let r0 = rho1_rect_analytic(a, b, dt, GAMMA);
                let r1 = rho1_rect_analytic(-a, -b, dt, GAMMA);
                assert!((r0 - r1).abs() <= 1e-14 * r0);
            }
        }
    }

    #[test]
    fn faulty_kernel_differs() {
        let good = rho1_gaussian_analytic(0.3, -0.1, 0.25, GAMMA);
        let bad = rho1_gaussian_faulty(0.3, -0.1, 0.25, GAMMA);
        assert!((good - bad).abs() / good > 1e-3);
    }
}
