//! Two-photon state heralded by a coincidence detection at `t_c`.
//!
//! The four-time density kernel factorizes as
//! `ρ(t,t′,t″,t‴) = P(t,t″)·P(t′,t‴)` with `P` the single-photon kernel, so
//! every quantity reduces to polynomials in `P`:
//!
//! | quantity | closed form |
//! |----------|-------------|
//! | trace    | `(tr P)² + tr P²` |
//! | `E`      | `2(tr P·P + P²)` |
//! | purity   | `2((tr P²)² + tr P⁴) / trace²` |
//! | fidelity with `|2_f⟩` | `2(fᵀPf)² / trace` |
//!
//! `|2_f⟩ = (A_f†)²|∅⟩/√2` is unit-normalized. [`oracle`] evaluates the same
//! quantities by brute force on the dense `M⁴` tensor.

pub mod oracle;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::herald::HeraldedKernel1;
use crate::modes::{decompose_kernel_matrix, ModeDecomposition};
use crate::temporal::{DiscreteMode, TimeGrid};

pub use oracle::{tensor_oracle, OracleReport, TensorOracle, ORACLE_MAX_DIVISIONS};

/// Allowed relative disagreement between the two routes to `E`.
pub const AUTOCORR_CROSSCHECK_TOL: f64 = 1e-10;
const TARGET_NORM_TOL: f64 = 1e-9;

/// Trace-normalized first-order coherence matrix `E[i,j] = tr(ρ A_i† A_j)`.
#[derive(Debug, Clone)]
pub struct Autocorrelation2 {
    matrix: DMatrix<f64>,
    base: HeraldedKernel1,
}

impl Autocorrelation2 {
    pub fn grid(&self) -> &TimeGrid {
        self.base.grid()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn base_kernel(&self) -> &HeraldedKernel1 {
        &self.base
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoPhotonMetrics {
    pub purity: f64,
    pub fidelity: f64,
    /// Leading eigenvalue of the trace-normalized `E`.
    pub lambda1_e: f64,
    #[serde(skip)]
    pub mode1: DiscreteMode,
}

/// Builds `E` both from the literal four-term index sum and from the reduced
/// form `2(tr P·P + P²)`, and fails if they disagree.
pub fn autocorr2(p: &HeraldedKernel1) -> Result<Autocorrelation2> {
    let pn = p.normalized_matrix();
    let literal = autocorr_literal(&pn);
    let reduced = autocorr_reduced(&pn);
    let scale = reduced.amax();
    let discrepancy = (&literal - &reduced).amax() / scale;
    if !(discrepancy <= AUTOCORR_CROSSCHECK_TOL) {
        return Err(Error::InternalConsistency {
            context: "autocorrelation four-term sum vs reduced form",
            discrepancy,
        });
    }
    let trace = reduced.trace();
    Ok(Autocorrelation2 {
        matrix: reduced / trace,
        base: p.clone(),
    })
}

/// `Σ_t (ρ[i,t,j,t] + ρ[i,t,t,j] + ρ[t,i,j,t] + ρ[t,i,t,j])` with
/// `ρ[a,b,c,d] = P[a,c]·P[b,d]`, evaluated term by term.
fn autocorr_literal(p: &DMatrix<f64>) -> DMatrix<f64> {
    use rayon::prelude::*;
    let m = p.nrows();
    let rho = |a: usize, b: usize, c: usize, d: usize| p[(a, c)] * p[(b, d)];
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..m)
                        .map(|t| {
                            rho(i, t, j, t) + rho(i, t, t, j) + rho(t, i, j, t) + rho(t, i, t, j)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    DMatrix::from_fn(m, m, |i, j| rows[i][j])
}

fn autocorr_reduced(p: &DMatrix<f64>) -> DMatrix<f64> {
    let p2 = p * p;
    (p * p.trace() + p2) * 2.0
}

/// Temporal modes of the two-photon state: the eigenvectors of `E`.
pub fn two_photon_modes(e: &Autocorrelation2) -> Result<ModeDecomposition> {
    decompose_kernel_matrix(e.matrix(), e.base_kernel())
}

struct Traces {
    t1: f64,
    t2: f64,
    t4: f64,
}

fn traces(p: &DMatrix<f64>) -> Traces {
    let p2 = p * p;
    Traces {
        t1: p.trace(),
        t2: p.iter().map(|x| x * x).sum(),
        t4: p2.iter().map(|x| x * x).sum(),
    }
}

/// `tr ρ` of the two-photon state built from the trace-normalized `P`.
pub fn two_photon_trace(p: &HeraldedKernel1) -> f64 {
    let t = traces(&p.normalized_matrix());
    t.t1 * t.t1 + t.t2
}

pub fn two_photon_purity(p: &HeraldedKernel1) -> f64 {
    let t = traces(&p.normalized_matrix());
    let norm = t.t1 * t.t1 + t.t2;
    2.0 * (t.t2 * t.t2 + t.t4) / (norm * norm)
}

/// `⟨2_f|ρ|2_f⟩` for a unit-norm target mode `f`.
pub fn two_photon_fidelity(p: &HeraldedKernel1, target: &DiscreteMode) -> Result<f64> {
    if target.grid() != p.grid() {
        return Err(Error::invalid("target", "mode lives on a different grid"));
    }
    if (target.norm() - 1.0).abs() > TARGET_NORM_TOL {
        return Err(Error::invalid(
            "target",
            format!("must be normalized, norm is {}", target.norm()),
        ));
    }
    let pn = p.normalized_matrix();
    let t = traces(&pn);
    let f = DVector::from_column_slice(target.values());
    let pff = f.dot(&(&pn * &f));
    Ok(2.0 * pff * pff / (t.t1 * t.t1 + t.t2))
}

/// Purity, fidelity against the leading `E` mode, and that mode.
pub fn two_photon_metrics(p: &HeraldedKernel1) -> Result<(TwoPhotonMetrics, ModeDecomposition)> {
    let e = autocorr2(p)?;
    let modes = two_photon_modes(&e)?;
    let mode1 = modes.mode(0).clone();
    let metrics = TwoPhotonMetrics {
        purity: two_photon_purity(p),
        fidelity: two_photon_fidelity(p, &mode1)?,
        lambda1_e: modes.eigenvalues()[0],
        mode1,
    };
    Ok((metrics, modes))
}
