//! Shannon and von Neumann entropies in bits.

use nalgebra::{Complex, DMatrix};

/// -p log₂ p with the 0·log 0 = 0 convention.
pub fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// p log₂ p, the negation of [`plogp`].
pub fn xlog2x(x: f64) -> f64 {
    -plogp(x)
}

/// Binary entropy H₂(p); H₂(0) = H₂(1) = 0 exactly.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    plogp(p) + plogp(1.0 - p)
}

/// Shannon entropy of a probability vector.
pub fn shannon(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().map(plogp).sum()
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex<f64>>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// von Neumann entropy S(ρ) = -tr ρ log₂ ρ.
pub fn von_neumann(rho: &DMatrix<Complex<f64>>) -> f64 {
    shannon(hermitian_eigenvalues(rho))
}

/// Entropy of a qubit whose Bloch vector has length `r`.
pub fn qubit_entropy(r: f64) -> f64 {
    binary_entropy((1.0 + r.min(1.0)) / 2.0)
}
