//! Brute-force two-photon reference on the materialized `M⁴` tensor.
//!
//! Every quantity is obtained by explicit index contraction with Wick
//! overlaps `⟨∅|A_d A_c A_a† A_b†|∅⟩ = δ_ca δ_db + δ_cb δ_da`. Nothing here
//! uses the matrix-polynomial identities of the parent module.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::herald::HeraldedKernel1;
use crate::modes::decompose_kernel_matrix;
use crate::temporal::{DiscreteMode, TimeGrid};

/// Largest grid the oracle will materialize.
pub const ORACLE_MAX_DIVISIONS: usize = 24;

#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Trace-normalized autocorrelation matrix.
    pub e: DMatrix<f64>,
    pub trace: f64,
    pub purity: f64,
    /// Fidelity against two photons in the leading eigenmode of `e`.
    pub fidelity: f64,
    pub target: DiscreteMode,
}

pub struct TensorOracle {
    m: usize,
    grid: TimeGrid,
    rho: Vec<f64>,
}

fn fock_overlap(c: usize, d: usize, a: usize, b: usize) -> f64 {
    ((c == a && d == b) as u8 + (c == b && d == a) as u8) as f64
}

impl TensorOracle {
    /// Materializes `ρ[a,b,c,d] = P[a,c]·P[b,d]` from the trace-normalized kernel.
    pub fn new(p: &HeraldedKernel1) -> Result<Self> {
        Self::from_matrix(*p.grid(), &p.matrix().clone())
    }

    /// Same as [`Self::new`] for an arbitrary symmetric kernel; it is
    /// divided by its trace first.
    pub fn from_matrix(grid: TimeGrid, p: &DMatrix<f64>) -> Result<Self> {
        let m = grid.divisions();
        if m > ORACLE_MAX_DIVISIONS {
            return Err(Error::ResourceLimit(format!(
                "tensor oracle needs M ≤ {ORACLE_MAX_DIVISIONS} ({m}⁴ entries requested)"
            )));
        }
        if p.nrows() != m || p.ncols() != m {
            return Err(Error::invalid("matrix", "kernel does not match the grid"));
        }
        let pn = p / p.trace();
        let mut rho = vec![0.0; m * m * m * m];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        rho[((a * m + b) * m + c) * m + d] = pn[(a, c)] * pn[(b, d)];
                    }
                }
            }
        }
        Ok(Self { m, grid, rho })
    }

    fn at(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let m = self.m;
        self.rho[((a * m + b) * m + c) * m + d]
    }

    fn indices(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let m = self.m;
        (0..m * m * m * m).map(move |n| (n / (m * m * m), (n / (m * m)) % m, (n / m) % m, n % m))
    }

    pub fn trace(&self) -> f64 {
        self.indices()
            .map(|(a, b, c, d)| self.at(a, b, c, d) * fock_overlap(c, d, a, b))
            .sum()
    }

    /// Literal four-term sum, divided by its trace.
    pub fn autocorrelation(&self) -> DMatrix<f64> {
        let m = self.m;
        let raw = DMatrix::from_fn(m, m, |i, j| {
            (0..m)
                .map(|t| {
                    self.at(i, t, j, t)
                        + self.at(i, t, t, j)
                        + self.at(t, i, j, t)
                        + self.at(t, i, t, j)
                })
                .sum::<f64>()
        });
        let trace = raw.trace();
        raw / trace
    }

    /// `tr ρ² / (tr ρ)²` with `tr ρ² = Σ ρ[abcd] ρ[a′b′c′d′] ⟨cd|a′b′⟩⟨c′d′|ab⟩`.
    pub fn purity(&self) -> f64 {
        let mut total = 0.0;
        for (a, b, c, d) in self.indices() {
            // each δ product of the two overlaps pins (a′,b′,c′,d′) to one of
            // four index permutations, each with unit weight
            let mut inner = 0.0;
            for (ap, bp) in [(c, d), (d, c)] {
                for (cp, dp) in [(a, b), (b, a)] {
                    inner += self.at(ap, bp, cp, dp);
                }
            }
            total += self.at(a, b, c, d) * inner;
        }
        let trace = self.trace();
        total / (trace * trace)
    }

    /// `⟨2_f|ρ|2_f⟩ / tr ρ` with `⟨2_f|ab⟩ = Σ_cd f_c f_d ⟨cd|ab⟩ / √2`.
    pub fn fidelity(&self, target: &DiscreteMode) -> Result<f64> {
        if *target.grid() != self.grid {
            return Err(Error::invalid("target", "mode lives on a different grid"));
        }
        let m = self.m;
        let f = target.values();
        let mut amp = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                let mut s = 0.0;
                for c in 0..m {
                    for d in 0..m {
                        s += f[c] * f[d] * fock_overlap(c, d, a, b);
                    }
                }
                amp[a * m + b] = s / SQRT_2;
            }
        }
        let overlap: f64 = self
            .indices()
            .map(|(a, b, c, d)| self.at(a, b, c, d) * amp[a * m + b] * amp[c * m + d])
            .sum();
        Ok(overlap / self.trace())
    }
}

/// Runs every oracle contraction for `p`.
pub fn tensor_oracle(p: &HeraldedKernel1) -> Result<OracleReport> {
    let oracle = TensorOracle::new(p)?;
    let e = oracle.autocorrelation();
    let modes = decompose_kernel_matrix(&e, p)?;
    let target = modes.mode(0).clone();
    Ok(OracleReport {
        trace: oracle.trace(),
        purity: oracle.purity(),
        fidelity: oracle.fidelity(&target)?,
        e,
        target,
    })
}
