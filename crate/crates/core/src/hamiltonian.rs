//! LMG Hamiltonian in the Dicke basis of the S = N/2 sector, plus a dense
//! product-basis builder used as an oracle for small N.
//!
//! H = -(2/N)(Sx² + γ Sy²) - 2h Sz + (1 + γ)/2, with λ = 1.

use nalgebra::{DMatrix, DVector};

use crate::error::{LmgError, Result};
use crate::params::{DickeSector, ModelParams, Parity};

/// Raising-operator coefficient ⟨S, M+1|S₊|S, M⟩.
pub(crate) fn raise_coeff(s: f64, m: f64) -> f64 {
    (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// ⟨S, M+2|S₊²|S, M⟩.
pub(crate) fn raise2_coeff(s: f64, m: f64) -> f64 {
    raise_coeff(s, m) * raise_coeff(s, m + 1.0)
}

/// One parity block of the Hamiltonian as a real symmetric tridiagonal matrix.
///
/// `offdiag[k]` couples `m_values[k]` and `m_values[k + 1]`, i.e. M and M+2.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    pub sector: DickeSector,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// y = H x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
        y
    }

    pub fn is_diagonal(&self) -> bool {
        self.offdiag.iter().all(|&e| e == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.offdiag[i];
                m[(i + 1, i)] = self.offdiag[i];
            }
        }
        m
    }
}

/// Build the block of H restricted to one parity class of M.
pub fn build_sector(params: &ModelParams, parity: Parity) -> Result<TridiagonalHamiltonian> {
    params.validate()?;
    let sector = DickeSector::new(params.n, parity)?;
    let n = params.n as f64;
    let s = sector.spin();
    let g = params.gamma;
    let shift = ModelParams::LAMBDA * (1.0 + g) / 2.0;

    let diag = sector
        .m_values
        .iter()
        .map(|&m| {
            // S+S- + S-S+ = 2(S² - Sz²)
            -(2.0 / n) * ((1.0 + g) / 4.0) * 2.0 * (s * (s + 1.0) - m * m) - 2.0 * params.h * m
                + shift
        })
        .collect();

    let pair = (1.0 - g) / 4.0;
    let offdiag = sector
        .m_values
        .windows(2)
        .map(|w| {
            if pair == 0.0 {
                0.0
            } else {
                -(2.0 / n) * pair * raise2_coeff(s, w[0])
            }
        })
        .collect();

    Ok(TridiagonalHamiltonian { sector, diag, offdiag })
}

/// Dense Hamiltonian on the full 2^N product space.
///
/// Basis index `b` encodes spin `k` as bit `N-1-k` (0 = up, 1 = down), so
/// spin 0 is the most significant qubit.
#[derive(Debug, Clone)]
pub struct FullSpaceHamiltonian {
    pub n: usize,
    pub matrix: DMatrix<f64>,
}

impl FullSpaceHamiltonian {
    pub const MAX_N: usize = 12;

    pub fn ground_energy(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Lowest eigenpair from a full dense diagonalization.
    pub fn ground_state(&self) -> (f64, DVector<f64>) {
        let eig = self.matrix.clone().symmetric_eigen();
        let (idx, e) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty spectrum");
        (e, eig.eigenvectors.column(idx).into_owned())
    }
}

/// Bit mask selecting spin `k` of `n` in the product-basis index.
pub(crate) fn spin_bit(n: usize, k: usize) -> usize {
    1 << (n - 1 - k)
}

/// Build the pairwise form of H on the product basis (oracle, N <= 12).
pub fn build_full_space(params: &ModelParams) -> Result<FullSpaceHamiltonian> {
    params.validate()?;
    let n = params.n;
    if n > FullSpaceHamiltonian::MAX_N {
        return Err(LmgError::FullSpaceTooLarge { n, max: FullSpaceHamiltonian::MAX_N });
    }
    let dim = 1usize << n;
    let nf = n as f64;
    let mut matrix = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let downs = b.count_ones() as f64;
        matrix[(b, b)] += -params.h * (nf - 2.0 * downs);
        for i in 0..n {
            for j in (i + 1)..n {
                let (bi, bj) = (spin_bit(n, i), spin_bit(n, j));
                let aligned = ((b & bi) == 0) == ((b & bj) == 0);
                // σy σy picks up i·i = -1 on aligned spins, i·(-i) = +1 otherwise
                let yy = if aligned { -1.0 } else { 1.0 };
                let target = b ^ bi ^ bj;
                matrix[(target, b)] += -(ModelParams::LAMBDA / nf) * (1.0 + params.gamma * yy);
            }
        }
    }
    Ok(FullSpaceHamiltonian { n, matrix })
}
