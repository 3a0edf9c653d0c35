//! Entanglement of formation and quantum discord of the two-spin state.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, hermitian_eigenvalues, qubit_entropy, shannon};
use crate::error::Result;
use crate::qubit::{bloch_length, c, direction, kron, pauli, steer_b, trace2, trace_out_a, trace_out_b, Qubit, TwoQubit};
use crate::reduced::TwoSpinXState;
use crate::steered::{grid_maximize, GridResolution, BRANCH_PROB_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub eof: f64,
    pub discord: f64,
}

/// Grid used for the discord minimization.
pub const DISCORD_GRID: GridResolution = GridResolution { n_theta: 181, n_phi: 360 };

/// Wootters concurrence of the X state.
pub fn concurrence_x(x: &TwoSpinXState) -> f64 {
    2.0 * (x.u - x.y).max(x.y - (x.v1 * x.v2).sqrt()).max(0.0)
}

/// Entanglement of formation from a concurrence.
pub fn eof_from_concurrence(conc: f64) -> f64 {
    let c = conc.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

pub fn eof_x(x: &TwoSpinXState) -> f64 {
    eof_from_concurrence(concurrence_x(x))
}

fn to_dynamic(rho: &TwoQubit) -> DMatrix<nalgebra::Complex<f64>> {
    DMatrix::from_fn(4, 4, |i, j| rho[(i, j)])
}

/// Concurrence from the definition: λᵢ are the square roots of the
/// eigenvalues of √ρ ρ̃ √ρ with ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y), obtained here
/// as the singular values of √ρ √ρ̃ to avoid square roots of roundoff.
pub fn wootters_concurrence(rho: &TwoQubit) -> f64 {
    let yy = kron(&pauli(1), &pauli(1));
    let eig = SymmetricEigen::new(*rho);
    // eigenvalues at roundoff level would otherwise leak in as √ε ~ 1e-8
    let sqrt_vals = eig.eigenvalues.map(|l| c(if l < 1e-14 { 0.0 } else { l.sqrt() }));
    let root = eig.eigenvectors * TwoQubit::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let root_flipped = yy * root.conjugate() * yy;
    let mut lambdas: Vec<f64> = (root * root_flipped).singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

fn qubit_state_entropy(rho: &Qubit) -> f64 {
    qubit_entropy(bloch_length(rho))
}

/// Quantum discord with a projective measurement on A,
/// D = S(ρ_A) − S(ρ) + min_Π Σ p_k S(ρ_{B|k}).
///
/// The minimum over measurement directions is taken on `grid` with one
/// golden-section refinement pass; the result is accurate to about 1e-6.
pub fn discord(rho: &TwoQubit, grid: GridResolution) -> Result<f64> {
    let s_a = qubit_state_entropy(&trace_out_b(rho));
    let s_ab = shannon(hermitian_eigenvalues(&to_dynamic(rho)));
    let marginal = trace_out_a(rho);
    let parts = [steer_b(rho, &pauli(0)), steer_b(rho, &pauli(1)), steer_b(rho, &pauli(2))];

    let conditional = |theta: f64, phi: f64| {
        let m = direction(theta, phi);
        let tilt = parts[0] * c(m[0]) + parts[1] * c(m[1]) + parts[2] * c(m[2]);
        let mut total = 0.0;
        for branch in [(marginal + tilt) * c(0.5), (marginal - tilt) * c(0.5)] {
            let p = trace2(&branch);
            if p >= BRANCH_PROB_FLOOR {
                total += p * qubit_state_entropy(&(branch / c(p)));
            }
        }
        total
    };
    let (neg_min, _) = grid_maximize(grid, |t, p| -conditional(t, p))?;
    Ok((s_a - s_ab - neg_min).max(0.0))
}

pub fn discord_x(x: &TwoSpinXState) -> Result<f64> {
    discord(&x.to_matrix(), DISCORD_GRID)
}

pub fn correlations_x(x: &TwoSpinXState) -> Result<CorrelationPair> {
    Ok(CorrelationPair { eof: eof_x(x), discord: discord_x(x)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell() -> TwoSpinXState {
        TwoSpinXState { v1: 0.5, v2: 0.5, y: 0.0, u: 0.5 }
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(concurrence_x(&bell()), 1.0);
        assert_eq!(eof_x(&bell()), 1.0);
        assert_eq!(concurrence_x(&TwoSpinXState::polarized()), 0.0);
        assert_eq!(eof_x(&TwoSpinXState::polarized()), 0.0);
        // singlet-like weight in the y block
        let w = TwoSpinXState { v1: 0.0, v2: 0.0, y: 0.5, u: 0.0 };
        assert_eq!(concurrence_x(&w), 1.0);
    }

    #[test]
    fn concurrence_matches_wootters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let (a, b, y): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
            let t = a + b + 2.0 * y;
            let (v1, v2, y) = (a / t, b / t, y / t);
            let x = TwoSpinXState { v1, v2, y, u: rng.random::<f64>() * (v1 * v2).sqrt() };
            assert_abs_diff_eq!(concurrence_x(&x), wootters_concurrence(&x.to_matrix()), epsilon = 1e-10);
        }
    }

    #[test]
    fn discord_examples() {
        assert_abs_diff_eq!(discord_x(&TwoSpinXState::polarized()).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(discord_x(&bell()).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn pure_state_discord_equals_eof() {
        for a in [0.9f64, 0.75, 0.6] {
            let x = TwoSpinXState { v1: a, v2: 1.0 - a, y: 0.0, u: (a * (1.0 - a)).sqrt() };
            let d = discord_x(&x).unwrap();
            assert_abs_diff_eq!(d, eof_x(&x), epsilon = 1e-6);
            assert_abs_diff_eq!(d, binary_entropy(a), epsilon = 1e-6);
        }
    }

    #[test]
    fn classical_state_has_no_discord() {
        let x = TwoSpinXState { v1: 0.4, v2: 0.3, y: 0.15, u: 0.0 };
        // y-block coherence makes this state quantum-correlated; a diagonal one is not
        assert!(discord_x(&x).unwrap() > 1e-4);
        let diag = TwoQubit::from_diagonal(&nalgebra::Vector4::new(c(0.4), c(0.1), c(0.2), c(0.3)));
        assert_abs_diff_eq!(discord(&diag, DISCORD_GRID).unwrap(), 0.0, epsilon = 1e-9);
    }
}
