//! l₁-norm and relative-entropy coherence.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, hermitian_eigenvalues, qubit_entropy, shannon, xlog2x};
use crate::error::{LmgError, Result};
use crate::qubit::{bloch_length, Qubit};
use crate::reduced::{SingleSpinState, TwoSpinXState};

/// Tolerance on trace, hermiticity and positivity of input density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Coherence under both metrics; rel_ent is in bits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoherencePair {
    pub l1: f64,
    pub rel_ent: f64,
}

impl CoherencePair {
    pub const ZERO: CoherencePair = CoherencePair { l1: 0.0, rel_ent: 0.0 };

    pub fn new(l1: f64, rel_ent: f64) -> Self {
        Self { l1, rel_ent }
    }

    pub fn max_abs_diff(&self, other: &CoherencePair) -> f64 {
        (self.l1 - other.l1).abs().max((self.rel_ent - other.rel_ent).abs())
    }
}

fn check_density_matrix(rho: &DMatrix<Complex<f64>>) -> Result<()> {
    if !rho.is_square() {
        return Err(LmgError::InvalidParams("density matrix must be square".into()));
    }
    let asym = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > STATE_TOL {
        return Err(LmgError::NotHermitian(asym));
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > STATE_TOL {
        return Err(LmgError::NotNormalized { trace });
    }
    let min = hermitian_eigenvalues(rho).into_iter().fold(f64::INFINITY, f64::min);
    if min < -STATE_TOL {
        return Err(LmgError::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// Coherence of ρ in the orthonormal basis given by the columns of `basis`.
pub fn coherence_generic(
    rho: &DMatrix<Complex<f64>>,
    basis: &DMatrix<Complex<f64>>,
) -> Result<CoherencePair> {
    check_density_matrix(rho)?;
    if basis.shape() != rho.shape() {
        return Err(LmgError::InvalidParams("basis and state dimensions differ".into()));
    }
    let d = rho.nrows();
    let gram_err = (basis.adjoint() * basis - DMatrix::identity(d, d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if gram_err > STATE_TOL {
        return Err(LmgError::InvalidParams(format!("reference basis is not unitary ({gram_err:e})")));
    }
    let rotated = basis.adjoint() * rho * basis;
    let mut l1 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                l1 += rotated[(i, j)].norm();
            }
        }
    }
    let diag_entropy = shannon((0..d).map(|i| rotated[(i, i)].re));
    let entropy = shannon(hermitian_eigenvalues(rho));
    Ok(CoherencePair { l1, rel_ent: (diag_entropy - entropy).max(0.0) })
}

/// Closed-form coherence of the two-spin X state in the product basis.
pub fn coherence_two_spin(x: &TwoSpinXState) -> CoherencePair {
    let rad = (4.0 * x.u * x.u + (x.v1 - x.v2).powi(2)).sqrt();
    let eps1 = 0.5 * (x.v1 + x.v2 + rad);
    let eps2 = 0.5 * (x.v1 + x.v2 - rad);
    let rel_ent = 2.0 * x.y + xlog2x(eps1) + xlog2x(eps2) - xlog2x(x.v1) - xlog2x(x.v2);
    CoherencePair { l1: 2.0 * (x.y + x.u), rel_ent }
}

/// Largest single-spin coherence over all reference bases.
pub fn max_single_spin_coherence(s: &SingleSpinState) -> CoherencePair {
    CoherencePair { l1: s.m.abs(), rel_ent: 1.0 - binary_entropy(s.p_up) }
}

/// Coherence of a normalized qubit state in the computational basis.
pub fn qubit_coherence(rho: &Qubit) -> CoherencePair {
    let l1 = 2.0 * rho[(0, 1)].norm();
    let rel_ent = binary_entropy(rho[(0, 0)].re) - qubit_entropy(bloch_length(rho));
    CoherencePair { l1, rel_ent: rel_ent.max(0.0) }
}
