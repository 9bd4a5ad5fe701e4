use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::herald::{
    build_kernel1, rho1_analytic, rho1_quadrature, HeraldedKernel1, KernelPath, EDGE_LEAKAGE_WARN,
};
use crate::modes::{decompose, envelope_mode, ModeDecomposition};
use crate::temporal::{JitterKernel, JitterShape, SourceKernel, TimeGrid};
use crate::two_photon::two_photon_metrics;

/// Relative tolerance of the analytic-vs-quadrature spot check run with
/// every sweep.
pub const SPOT_CHECK_TOL: f64 = 1e-6;
const SPOT_CHECK_QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "B")]
    pub b: f64,
    pub purity: f64,
    pub fidelity: f64,
    /// Five largest mixture weights, zero-padded on grids with fewer bins.
    pub lambda_top5: [f64; 5],
    /// `⟨f₁|r̂⟩`, signed.
    pub overlap_with_r: f64,
}

/// Leading modes next to the normalized source envelope, all as unit-norm
/// discrete coefficient vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTable {
    #[serde(rename = "B")]
    pub b: f64,
    pub t: Vec<f64>,
    /// `modes[k][j]` is mode `k+1` at `t[j]`.
    pub modes: Vec<Vec<f64>>,
    pub r_norm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    /// `passed`, `failed` or `skipped` (ideal detector only).
    pub status: String,
    pub points: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub crate_version: String,
    /// One entry per B value.
    pub kernel_paths: Vec<KernelPath>,
    pub max_edge_leakage: f64,
    pub oracle_check: SpotCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: RunConfig,
    pub records: Vec<SweepRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeTable>,
    pub provenance: Provenance,
}

struct Point {
    record: SweepRecord,
    modes: ModeDecomposition,
    path: KernelPath,
    leakage: f64,
}

fn kernel_for(cfg: &RunConfig, b: f64) -> Result<HeraldedKernel1> {
    let grid = TimeGrid::new(cfg.span, cfg.divisions)?;
    Ok(build_kernel1(grid, cfg.jitter, b, cfg.detection_time)?.with_amplitude(cfg.amplitude))
}

fn analyze(cfg: &RunConfig, b: f64) -> Result<Point> {
    let kernel = kernel_for(cfg, b)?;
    let (purity, fidelity, modes) = match cfg.photons {
        1 => {
            let d = decompose(&kernel)?;
            (d.purity(), d.fidelity(), d)
        }
        _ => {
            let (metrics, d) = two_photon_metrics(&kernel)?;
            (metrics.purity, metrics.fidelity, d)
        }
    };
    let mut lambda_top5 = [0.0; 5];
    for (slot, lambda) in lambda_top5.iter_mut().zip(modes.eigenvalues()) {
        *slot = *lambda;
    }
    Ok(Point {
        record: SweepRecord {
            b,
            purity,
            fidelity,
            lambda_top5,
            overlap_with_r: modes.overlap_with_envelope(),
        },
        modes,
        path: kernel.path(),
        leakage: kernel.edge_leakage(),
    })
}

fn table(cfg: &RunConfig, b: f64, d: &ModeDecomposition) -> ModeTable {
    let grid = d.grid();
    ModeTable {
        b,
        t: grid.centers(),
        modes: d.modes()[..cfg.modes_to_emit]
            .iter()
            .map(|f| f.values().to_vec())
            .collect(),
        r_norm: envelope_mode(*grid, cfg.detection_time).into_values(),
    }
}

/// Mode table for a single `B`, which need not be listed in `cfg`.
pub fn run_modes(cfg: &RunConfig, b: f64) -> Result<ModeTable> {
    cfg.validate()?;
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::invalid("B", "must be finite and non-negative"));
    }
    let point = analyze(cfg, b)?;
    Ok(table(cfg, b, &point.modes))
}

/// Evaluates every `B` in `cfg`, concurrently, in `B` order.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    run(cfg, false)
}

/// [`run_sweep`] plus a mode table for every `B`.
pub fn run_sweep_with_modes(cfg: &RunConfig) -> Result<SweepResult> {
    run(cfg, true)
}

fn run(cfg: &RunConfig, with_modes: bool) -> Result<SweepResult> {
    cfg.validate()?;
    let points = cfg
        .b_values
        .par_iter()
        .map(|&b| analyze(cfg, b))
        .collect::<Result<Vec<_>>>()?;
    for p in &points {
        let r = &p.record;
        if !(0.0..=1.0 + 1e-9).contains(&r.purity) || !(0.0..=1.0 + 1e-9).contains(&r.fidelity) {
            return Err(Error::InternalConsistency {
                context: "purity/fidelity outside [0, 1]",
                discrepancy: (r.purity - 1.0).max(r.fidelity - 1.0),
            });
        }
    }
    let max_edge_leakage = points.iter().map(|p| p.leakage).fold(0.0, f64::max);
    if max_edge_leakage > EDGE_LEAKAGE_WARN {
        log::warn!(
            "source envelope at the window edge is {max_edge_leakage:.2e} of its peak; \
             the kernel is truncated (T = {}, tc = {})",
            cfg.span,
            cfg.detection_time
        );
    }
    let oracle_check = spot_check(cfg)?;
    Ok(SweepResult {
        config: cfg.clone(),
        modes: if with_modes {
            points
                .iter()
                .map(|p| table(cfg, p.record.b, &p.modes))
                .collect()
        } else {
            Vec::new()
        },
        provenance: Provenance {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            kernel_paths: points.iter().map(|p| p.path).collect(),
            max_edge_leakage,
            oracle_check,
        },
        records: points.into_iter().map(|p| p.record).collect(),
    })
}

/// Compares the closed-form kernel used by the run with quadrature on a few
/// points per `B`, clustered around the jitter window.
fn spot_check(cfg: &RunConfig) -> Result<SpotCheck> {
    let gamma = SourceKernel::default().gamma();
    let widths: Vec<f64> = if cfg.jitter == JitterShape::Delta {
        Vec::new()
    } else {
        cfg.b_values.iter().copied().filter(|&b| b > 0.0).collect()
    };
    let checks = widths
        .par_iter()
        .map(|&b| {
            let g = JitterKernel::new(cfg.jitter, b)?;
            let ts = [-0.4, -0.5 * b, 0.0, 0.3 * b, 0.6];
            let mut worst = 0.0f64;
            let mut n = 0;
            for (i, &t1) in ts.iter().enumerate() {
                for &t2 in &ts[i..] {
                    let exact = rho1_quadrature(t1, t2, &g, gamma, SPOT_CHECK_QUAD_TOL)?;
                    let closed = rho1_analytic(t1, t2, &g, gamma);
                    worst = worst.max((closed - exact).abs() / exact.abs());
                    n += 1;
                }
            }
            Ok((worst, n))
        })
        .collect::<Result<Vec<_>>>()?;
    if checks.is_empty() {
        return Ok(SpotCheck {
            status: "skipped".into(),
            points: 0,
            max_rel_error: 0.0,
            tolerance: SPOT_CHECK_TOL,
        });
    }
    let max_rel_error = checks.iter().map(|c| c.0).fold(0.0, f64::max);
    let passed = max_rel_error <= SPOT_CHECK_TOL;
    if !passed {
        log::error!("closed-form kernel disagrees with quadrature: {max_rel_error:e}");
    }
    Ok(SpotCheck {
        status: if passed { "passed" } else { "failed" }.into(),
        points: checks.iter().map(|c| c.1).sum(),
        max_rel_error,
        tolerance: SPOT_CHECK_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(photons: u8) -> RunConfig {
        let mut cfg = RunConfig::standard(photons);
        cfg.divisions = 120;
        cfg.span = 6.0;
        cfg.b_values = vec![0.0, 0.1, 0.5];
        cfg
    }

    #[test]
    fn sweep_records_follow_b_order() {
        for photons in [1, 2] {
            let r = run_sweep(&small(photons)).unwrap();
            assert_eq!(r.records.len(), 3);
            let bs: Vec<f64> = r.records.iter().map(|x| x.b).collect();
            assert_eq!(bs, vec![0.0, 0.1, 0.5]);
            assert_eq!(r.provenance.kernel_paths[0], KernelPath::DeltaExact);
            assert_eq!(r.provenance.kernel_paths[1], KernelPath::AnalyticGaussian);
            assert_eq!(r.provenance.oracle_check.status, "passed");
            assert!((r.records[0].purity - 1.0).abs() < 1e-10);
            assert!(r.records[1].purity > r.records[2].purity);
        }
    }

    #[test]
    fn delta_modes_match_envelope() {
        let mut cfg = small(1);
        cfg.jitter = JitterShape::Delta;
        let t = run_modes(&cfg, 0.3).unwrap();
        assert_eq!(t.modes.len(), 2);
        let worst = t.modes[0]
            .iter()
            .zip(&t.r_norm)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = small(1);
        cfg.b_values.clear();
        assert!(matches!(
            run_sweep(&cfg),
            Err(Error::InvalidArgument {
                field: "B_values",
                ..
            })
        ));
    }
}
