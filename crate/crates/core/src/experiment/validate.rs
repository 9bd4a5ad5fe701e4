//! Oracle checks bundled into one report: closed-form kernels against
//! adaptive quadrature, and the reduced two-photon formulas against the
//! dense tensor contraction.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::herald::analytic::{rho1_gaussian_analytic, rho1_gaussian_faulty, rho1_rect_analytic};
use crate::herald::{build_kernel1, rho1_quadrature};
use crate::temporal::{JitterKernel, JitterShape, SourceKernel, TimeGrid};
use crate::two_photon::{
    autocorr2, two_photon_metrics, two_photon_trace, TensorOracle, ORACLE_MAX_DIVISIONS,
};

pub const KERNEL_TOL: f64 = 1e-6;
pub const TWO_PHOTON_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-11;

/// Deliberate defects used to show that validation fails when it should.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedFault {
    /// Flips the sign of one error-function term in the Gaussian kernel.
    GaussianErfSign,
}

#[derive(Debug, Clone)]
pub struct ValidationOptions {
    /// Total number of sampled `(t′, t″, Δt)` points, split evenly between
    /// the two jitter families.
    pub kernel_points: usize,
    pub oracle_divisions: Vec<usize>,
    pub oracle_span: f64,
    pub oracle_b: Vec<f64>,
    pub fault: Option<InjectedFault>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            kernel_points: 2000,
            oracle_divisions: vec![8, 16, 20],
            oracle_span: 4.0,
            oracle_b: vec![0.05, 0.25, 1.0],
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &str, samples: usize, max_error: f64, tolerance: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        // NaN must fail
        passed: max_error <= tolerance,
        samples,
        max_error,
        tolerance,
    }
}

/// Low-discrepancy point `n` in the unit cube (additive recurrence on the
/// plastic number).
fn sample(n: usize) -> [f64; 3] {
    const PHI: f64 = 1.220_744_084_605_759_5;
    let alpha = [1.0 / PHI, 1.0 / (PHI * PHI), 1.0 / (PHI * PHI * PHI)];
    alpha.map(|a| (0.5 + a * n as f64).fract())
}

/// Sampled `(t′, t″, Δt)`: `Δt` log-uniform on `[0.01, 1]`; even samples
/// span `[-3, 3]`, odd samples stay within `±Δt` where the branches meet.
pub fn kernel_sample(n: usize) -> (f64, f64, f64) {
    let [u1, u2, u3] = sample(n);
    let dt = 0.01 * 100f64.powf(u3);
    let reach = if n % 2 == 0 { 3.0 } else { dt };
    (reach * (2.0 * u1 - 1.0), reach * (2.0 * u2 - 1.0), dt)
}

fn kernel_check(
    shape: JitterShape,
    points: usize,
    fault: Option<InjectedFault>,
) -> Result<CheckResult> {
    let gamma = SourceKernel::default().gamma();
    let closed = move |t1, t2, dt| match (shape, fault) {
        (JitterShape::Gaussian, Some(InjectedFault::GaussianErfSign)) => {
            rho1_gaussian_faulty(t1, t2, dt, gamma)
        }
        (JitterShape::Gaussian, None) => rho1_gaussian_analytic(t1, t2, dt, gamma),
        _ => rho1_rect_analytic(t1, t2, dt, gamma),
    };
    let errors = (0..points)
        .into_par_iter()
        .map(|n| {
            let (t1, t2, dt) = kernel_sample(n);
            let g = JitterKernel::new(shape, dt)?;
            let exact = rho1_quadrature(t1, t2, &g, gamma, QUAD_TOL)?;
            Ok((closed(t1, t2, dt) - exact).abs() / exact.abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let name = match shape {
        JitterShape::Gaussian => "gaussian analytic kernel vs quadrature",
        _ => "rectangular analytic kernel vs quadrature",
    };
    Ok(check(name, points, max_or_nan(&errors), KERNEL_TOL))
}

fn max_or_nan(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, &x| {
        if x.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(x)
        }
    })
}

#[derive(Default)]
struct TwoPhotonErrors {
    e: Vec<f64>,
    trace: Vec<f64>,
    purity: Vec<f64>,
    fidelity: Vec<f64>,
}

fn two_photon_checks(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let mut cases = Vec::new();
    for &m in &opts.oracle_divisions {
        for &b in &opts.oracle_b {
            for shape in [JitterShape::Gaussian, JitterShape::Rectangular] {
                cases.push((m, b, shape));
            }
        }
    }
    let per_case = cases
        .par_iter()
        .map(|&(m, b, shape)| {
            let grid = TimeGrid::new(opts.oracle_span, m)?;
            let p = build_kernel1(grid, shape, b, 0.0)?;
            let oracle = TensorOracle::new(&p)?;
            let e = autocorr2(&p)?;
            let (metrics, _) = two_photon_metrics(&p)?;
            let e_err = (oracle.autocorrelation() - e.matrix()).amax();
            let trace_err = (oracle.trace() - two_photon_trace(&p)).abs();
            let purity_err = (oracle.purity() - metrics.purity).abs();
            let fidelity_err = (oracle.fidelity(&metrics.mode1)? - metrics.fidelity).abs();
            Ok([e_err, trace_err, purity_err, fidelity_err])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut errs = TwoPhotonErrors::default();
    for [a, b, c, d] in per_case {
        errs.e.push(a);
        errs.trace.push(b);
        errs.purity.push(c);
        errs.fidelity.push(d);
    }
    let n = cases.len();
    Ok(vec![
        check(
            "two-photon autocorrelation E vs tensor oracle",
            n,
            max_or_nan(&errs.e),
            TWO_PHOTON_TOL,
        ),
        check(
            "two-photon trace vs tensor oracle",
            n,
            max_or_nan(&errs.trace),
            TWO_PHOTON_TOL,
        ),
        check(
            "two-photon purity vs tensor oracle",
            n,
            max_or_nan(&errs.purity),
            TWO_PHOTON_TOL,
        ),
        check(
            "two-photon fidelity vs tensor oracle",
            n,
            max_or_nan(&errs.fidelity),
            TWO_PHOTON_TOL,
        ),
    ])
}

/// Runs every check. Failing checks are reported, not returned as errors;
/// only an impossible request (oracle grid too large) is an error.
pub fn validate_oracles(opts: &ValidationOptions) -> Result<ValidationReport> {
    if let Some(&m) = opts
        .oracle_divisions
        .iter()
        .find(|&&m| m > ORACLE_MAX_DIVISIONS)
    {
        return Err(Error::ResourceLimit(format!(
            "tensor oracle limited to M ≤ {ORACLE_MAX_DIVISIONS}, requested M = {m}"
        )));
    }
    let half = opts.kernel_points / 2;
    let mut checks = vec![
        kernel_check(JitterShape::Gaussian, half, opts.fault)?,
        kernel_check(
            JitterShape::Rectangular,
            opts.kernel_points - half,
            opts.fault,
        )?,
    ];
    checks.extend(two_photon_checks(opts)?);
    Ok(ValidationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ValidationOptions {
        ValidationOptions {
            kernel_points: 200,
            oracle_divisions: vec![6],
            oracle_b: vec![0.3],
            ..Default::default()
        }
    }

    #[test]
    fn quick_run_passes() {
        let report = validate_oracles(&quick()).unwrap();
        assert!(report.all_passed(), "{:?}", report.checks);
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn fault_is_named() {
        let report = validate_oracles(&ValidationOptions {
            fault: Some(InjectedFault::GaussianErfSign),
            ..quick()
        })
        .unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["gaussian analytic kernel vs quadrature"]);
    }

    #[test]
    fn oversized_oracle_grid() {
        let r = validate_oracles(&ValidationOptions {
            oracle_divisions: vec![30],
            ..quick()
        });
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn samples_cover_unit_cube() {
        let pts: Vec<[f64; 3]> = (0..1000).map(sample).collect();
        for axis in 0..3 {
            let low = pts.iter().filter(|p| p[axis] < 0.1).count();
            assert!((80..=120).contains(&low));
        }
    }
}
