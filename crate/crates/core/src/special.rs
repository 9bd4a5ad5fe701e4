//! Error-function helpers on top of `libm`.

use std::f64::consts::PI;

pub use libm::{erf, erfc};

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Stays finite where `erfc` underflows, which happens for the narrow
/// Gaussian jitters used at small `B`.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 4.0 {
        return (x * x).exp() * erfc(x);
    }
    // erfc(x) = exp(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + 0.5 * k as f64 / tail;
    }
    1.0 / (tail * PI.sqrt())
}
