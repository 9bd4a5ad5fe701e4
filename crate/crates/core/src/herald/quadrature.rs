//! Adaptive Gauss–Kronrod evaluation of the heralded kernel integral.
//!
//! This is the reference the closed forms are checked against, so it works
//! straight from the defining integrand and shares no code with them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::temporal::{envelope, JitterKernel, JitterShape};

const MAX_INTERVALS: usize = 20_000;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights;
// odd-indexed nodes are the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.lo.total_cmp(&self.lo))
    }
}

fn kronrod(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]`, pre-split at `breakpoints`, until the
/// summed error estimate is below `rel_tol·|integral|`.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap: BinaryHeap<Segment> = cuts.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();

    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if !(total.is_finite() && error.is_finite()) {
            return Err(Error::NumericalFailure {
                context: "adaptive quadrature (non-finite integrand)",
                achieved_error: f64::INFINITY,
            });
        }
        if error <= rel_tol * total.abs() || error < f64::MIN_POSITIVE {
            // sum in a fixed order so the result does not depend on heap layout
            let mut done = heap.into_vec();
            done.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            return Ok(done.iter().map(|s| s.value).sum());
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NumericalFailure {
                context: "adaptive quadrature",
                achieved_error: error / total.abs().max(f64::MIN_POSITIVE),
            });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            return Err(Error::NumericalFailure {
                context: "adaptive quadrature (interval underflow)",
                achieved_error: error / total.abs().max(f64::MIN_POSITIVE),
            });
        }
        heap.push(kronrod(&f, worst.lo, mid));
        heap.push(kronrod(&f, mid, worst.hi));
    }
}

/// Numerically evaluates `∫dt g(t)·r̂(t1−t)·r̂(t2−t)` with relative accuracy
/// `tol`, splitting the domain at the kinks `t = t1`, `t = t2` and at the
/// edges of a rectangular window.
pub fn rho1_quadrature(t1: f64, t2: f64, g: &JitterKernel, gamma: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let integrand = |t: f64| {
        // shapes other than delta always evaluate
        g.eval(t).unwrap_or(0.0) * envelope(t1 - t, gamma) * envelope(t2 - t, gamma)
    };
    match g.shape() {
        JitterShape::Delta => Err(Error::UnsupportedOperation(
            "quadrature over a delta jitter",
        )),
        JitterShape::Rectangular => {
            let h = 0.5 * g.width();
            integrate(integrand, -h, h, &[t1, t2], tol)
        }
        JitterShape::Gaussian => {
            let sigma = g.width() / (8.0 * std::f64::consts::LN_2).sqrt();
            // truncation keeps the dropped tail below ~e^-37 of the integral
            let exponent = 38.0 + 0.5 * gamma * (t1.abs() + t2.abs()) + gamma * sigma;
            let half_span = sigma * (2.0 * exponent).sqrt();
            let mut breaks = vec![t1, t2, 0.0];
            for k in [1.0, 3.0, 6.0] {
                breaks.push(k * sigma);
                breaks.push(-k * sigma);
            }
            integrate(integrand, -half_span, half_span, &breaks, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const GAMMA: f64 = 4.0 * PI;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x + 2.0 * x, 0.0, 2.0, &[], 1e-14).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn kinked_integrand() {
        let v = integrate(|x: f64| (-x.abs()).exp(), -3.0, 3.0, &[0.0], 1e-13).unwrap();
        let exact = 2.0 * (1.0 - (-3.0f64).exp());
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn narrow_rect_tends_to_ideal() {
        let g = JitterKernel::rectangular(1e-7).unwrap();
        let v = rho1_quadrature(0.2, -0.3, &g, GAMMA, 1e-12).unwrap();
        let ideal = envelope(0.2, GAMMA) * envelope(-0.3, GAMMA);
        assert!((v - ideal).abs() < 1e-6);
    }

    #[test]
    fn coincident_kinks_positive() {
        let g = JitterKernel::gaussian(0.25).unwrap();
        let v = rho1_quadrature(0.0, 0.0, &g, GAMMA, 1e-10).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn delta_rejected() {
        assert!(rho1_quadrature(0.0, 0.0, &JitterKernel::delta(), GAMMA, 1e-8).is_err());
        let g = JitterKernel::gaussian(0.25).unwrap();
        assert!(rho1_quadrature(0.0, 0.0, &g, GAMMA, 0.0).is_err());
    }

    #[test]
    fn non_finite_integrand_rejected() {
        let r = integrate(|x: f64| x.powf(-0.999), 0.0, 1.0, &[], 1e-10);
        assert!(matches!(r, Err(Error::NumericalFailure { .. })));
    }

    #[test]
    fn budget_exhaustion_reports_error() {
        // ~160k oscillations need far more than the interval budget
        let r = integrate(|x: f64| 2.0 + (1e6 * x).sin(), 0.0, 1.0, &[], 1e-12);
        match r {
            Err(Error::NumericalFailure { achieved_error, .. }) => assert!(achieved_error > 0.0),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }
}
