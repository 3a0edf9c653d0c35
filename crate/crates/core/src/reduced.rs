//! Collective moments of a Dicke-basis state and the single- and two-spin
//! reduced density matrices built from them.

use nalgebra::{Complex, DVector, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{LmgError, Result};
use crate::hamiltonian::{raise2_coeff, spin_bit};
use crate::solver::GroundStateSolution;

/// Roundoff-negative entries with magnitude below this are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;

/// ⟨S_z⟩, ⟨S_x²⟩, ⟨S_y²⟩, ⟨S_z²⟩ of an N-spin state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectiveMoments {
    pub n: usize,
    pub sz: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub sz2: f64,
}

impl CollectiveMoments {
    /// S(S+1) with S = N/2.
    pub fn casimir(&self) -> f64 {
        let s = self.n as f64 / 2.0;
        s * (s + 1.0)
    }

    /// Magnetization per spin, 2⟨S_z⟩/N.
    pub fn magnetization(&self) -> f64 {
        2.0 * self.sz / self.n as f64
    }
}

/// Parameters (v₁, v₂, y, u) of the two-spin X state in the basis
/// {↑↑, ↑↓, ↓↑, ↓↓}:
///
/// ```text
/// ⎛ v1  0  0  u  ⎞
/// ⎜ 0   y  y  0  ⎟
/// ⎜ 0   y  y  0  ⎟
/// ⎝ u   0  0  v2 ⎠
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSpinXState {
    pub v1: f64,
    pub v2: f64,
    pub y: f64,
    pub u: f64,
}

impl TwoSpinXState {
    /// Validate trace, non-negativity and positivity (u² ≤ v₁v₂).
    pub fn new(v1: f64, v2: f64, y: f64, u: f64) -> Result<Self> {
        let x = Self { v1, v2, y, u };
        x.check()?;
        Ok(x)
    }

    pub fn check(&self) -> Result<()> {
        let Self { v1, v2, y, u } = *self;
        if (self.trace() - 1.0).abs() > 1e-10 {
            return Err(LmgError::NotNormalized { trace: self.trace() });
        }
        if v1 < -CLAMP_TOL || v2 < -CLAMP_TOL || y < -CLAMP_TOL || u < -CLAMP_TOL {
            return Err(LmgError::PositivityViolation(format!(
                "negative entry in (v1, v2, y, u) = ({v1}, {v2}, {y}, {u})"
            )));
        }
        if u * u > v1 * v2 + CLAMP_TOL {
            return Err(LmgError::PositivityViolation(format!(
                "u² = {} exceeds v1·v2 = {}",
                u * u,
                v1 * v2
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.v1 + self.v2 + 2.0 * self.y
    }

    /// Fully polarized |↑↑⟩.
    pub fn polarized() -> Self {
        Self { v1: 1.0, v2: 0.0, y: 0.0, u: 0.0 }
    }

    pub fn to_matrix(&self) -> Matrix4<Complex<f64>> {
        let c = |x: f64| Complex::new(x, 0.0);
        let z = c(0.0);
        Matrix4::new(
            c(self.v1), z, z, c(self.u),
            z, c(self.y), c(self.y), z,
            z, c(self.y), c(self.y), z,
            c(self.u), z, z, c(self.v2),
        )
    }

    /// Eigenvalues of the 4×4 matrix: 2y, 0, and (v₁+v₂)/2 ± √(u² + (v₁−v₂)²/4).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mid = 0.5 * (self.v1 + self.v2);
        let rad = (self.u * self.u + 0.25 * (self.v1 - self.v2).powi(2)).sqrt();
        [2.0 * self.y, 0.0, mid + rad, mid - rad]
    }

    /// Populations of either single-spin marginal, (↑, ↓).
    pub fn marginal(&self) -> (f64, f64) {
        (self.v1 + self.y, self.v2 + self.y)
    }
}

/// Diagonal single-spin marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleSpinState {
    pub p_up: f64,
    /// 2⟨S_z⟩/N.
    pub m: f64,
}

impl SingleSpinState {
    pub fn from_moments(m: &CollectiveMoments) -> Self {
        let mag = m.magnetization();
        Self { p_up: 0.5 * (1.0 + mag), m: mag }
    }

    pub fn from_x_state(x: &TwoSpinXState) -> Self {
        let p_up = x.v1 + x.y;
        Self { p_up, m: 2.0 * p_up - 1.0 }
    }
}

/// Collective moments of a ground state in the Dicke basis.
pub fn moments_from_state(sol: &GroundStateSolution) -> CollectiveMoments {
    let sector = &sol.sector;
    let s = sector.spin();
    let v = &sol.vector;
    let (mut sz, mut sz2) = (0.0, 0.0);
    for (&m, &c) in sector.m_values.iter().zip(v) {
        let p = c * c;
        sz += m * p;
        sz2 += m * m * p;
    }
    // ⟨S₊² + S₋²⟩ = 2 Σ ψ(M+2) ψ(M) ⟨M+2|S₊²|M⟩
    let pair: f64 = 2.0
        * sector
            .m_values
            .windows(2)
            .zip(v.windows(2))
            .map(|(m, c)| c[0] * c[1] * raise2_coeff(s, m[0]))
            .sum::<f64>();
    // Sx² − Sy² = (S₊² + S₋²)/2,  Sx² + Sy² = S(S+1) − Sz²
    let diff = 0.5 * pair;
    let sum = s * (s + 1.0) - sz2;
    CollectiveMoments { n: sector.n, sz, sx2: 0.5 * (sum + diff), sy2: 0.5 * (sum - diff), sz2 }
}

fn clamp_small(x: f64, what: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x > -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(LmgError::PositivityViolation(format!("{what} = {x:e} < 0")))
    }
}

/// Two-spin reduced state of a permutation-symmetric N-spin state.
pub fn two_spin_state(m: &CollectiveMoments) -> Result<TwoSpinXState> {
    if m.n < 2 {
        return Err(LmgError::InvalidParams(format!("N = {} < 2", m.n)));
    }
    let n = m.n as f64;
    let norm = 4.0 * n * (n - 1.0);
    let common = n * n - 2.0 * n + 4.0 * m.sz2;
    let split = 4.0 * (n - 1.0) * m.sz;
    let x = TwoSpinXState {
        v1: clamp_small((common + split) / norm, "v1")?,
        v2: clamp_small((common - split) / norm, "v2")?,
        y: clamp_small((n * n - 4.0 * m.sz2) / norm, "y")?,
        u: clamp_small((m.sx2 - m.sy2) / (n * (n - 1.0)), "u")?,
    };
    if x.u * x.u > x.v1 * x.v2 + CLAMP_TOL {
        return Err(LmgError::PositivityViolation(format!(
            "u² = {:e} exceeds v1·v2 = {:e}",
            x.u * x.u,
            x.v1 * x.v2
        )));
    }
    Ok(x)
}

/// Moments of a product-basis state vector by direct operator application.
///
/// Oracle for [`moments_from_state`]; uses the bit layout of
/// [`crate::hamiltonian::build_full_space`].
pub fn moments_from_full_space(n: usize, psi: &DVector<f64>) -> CollectiveMoments {
    let dim = 1usize << n;
    assert_eq!(psi.len(), dim, "state dimension must be 2^N");
    let mut sx_psi = vec![0.0; dim];
    // S_y ψ is purely imaginary for real ψ; store the imaginary part
    let mut sy_psi = vec![0.0; dim];
    let (mut sz, mut sz2) = (0.0, 0.0);
    for b in 0..dim {
        let c = psi[b];
        let mz = 0.5 * (n as f64 - 2.0 * b.count_ones() as f64);
        sz += mz * c * c;
        sz2 += mz * mz * c * c;
        for k in 0..n {
            let bit = spin_bit(n, k);
            sx_psi[b ^ bit] += 0.5 * c;
            // σ_y|↑⟩ = i|↓⟩, σ_y|↓⟩ = −i|↑⟩
            let sign = if b & bit == 0 { 1.0 } else { -1.0 };
            sy_psi[b ^ bit] += 0.5 * sign * c;
        }
    }
    let sx2 = sx_psi.iter().map(|x| x * x).sum();
    let sy2 = sy_psi.iter().map(|x| x * x).sum();
    CollectiveMoments { n, sz, sx2, sy2, sz2 }
}

/// Reduced 4×4 density matrix of spins (i, j) of a real product-basis state.
pub fn partial_trace_pair(n: usize, psi: &DVector<f64>, i: usize, j: usize) -> Matrix4<f64> {
    assert!(i != j && i < n && j < n);
    let (bi, bj) = (spin_bit(n, i), spin_bit(n, j));
    let mut rho = Matrix4::zeros();
    let dim = 1usize << n;
    for b in 0..dim {
        if b & (bi | bj) != 0 {
            continue;
        }
        // b enumerates configurations of the remaining spins
        let idx = |a: usize| -> usize {
            let mut s = b;
            if a & 0b10 != 0 {
                s |= bi;
            }
            if a & 0b01 != 0 {
                s |= bj;
            }
            s
        };
        for a in 0..4 {
            for c in 0..4 {
                rho[(a, c)] += psi[idx(a)] * psi[idx(c)];
            }
        }
    }
    rho
}

/// Two-spin reduced state by explicit partial trace (oracle, N <= 10).
///
/// Checks the X shape and that every other spin pair gives the same matrix.
pub fn partial_trace_oracle(n: usize, psi: &DVector<f64>, pair: (usize, usize)) -> Result<TwoSpinXState> {
    if n > 10 {
        return Err(LmgError::FullSpaceTooLarge { n, max: 10 });
    }
    let tol = 1e-10;
    let rho = partial_trace_pair(n, psi, pair.0, pair.1);
    let off_x = [(0, 1), (0, 2), (1, 3), (2, 3)]
        .iter()
        .flat_map(|&(a, b)| [rho[(a, b)].abs(), rho[(b, a)].abs()])
        .fold(0.0f64, f64::max);
    let y_spread = [rho[(2, 2)], rho[(1, 2)], rho[(2, 1)]]
        .iter()
        .map(|v| (v - rho[(1, 1)]).abs())
        .fold(0.0f64, f64::max);
    let asym = (rho[(0, 3)] - rho[(3, 0)]).abs();
    let worst = off_x.max(y_spread).max(asym);
    if worst > tol {
        return Err(LmgError::NotXShaped(worst));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let other = partial_trace_pair(n, psi, a, b);
            let dev = (other - rho).abs().max();
            if dev > tol {
                return Err(LmgError::PairDependence(dev));
            }
        }
    }
    Ok(TwoSpinXState { v1: rho[(0, 0)], v2: rho[(3, 3)], y: rho[(1, 1)], u: rho[(0, 3)] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_full_space;
    use crate::params::ModelParams;
    use crate::solver::global_ground_state;
    use approx::assert_abs_diff_eq;

    fn moments(n: usize, gamma: f64, h: f64) -> CollectiveMoments {
        moments_from_state(&global_ground_state(&ModelParams::new(n, gamma, h).unwrap()).unwrap())
    }

    #[test]
    fn polarized_moments() {
        for n in [4usize, 10, 64] {
            let m = moments(n, 0.5, 1e4);
            let nf = n as f64;
            assert_abs_diff_eq!(m.sz, nf / 2.0, epsilon = 1e-6);
            assert_abs_diff_eq!(m.sz2, nf * nf / 4.0, epsilon = 1e-4);
            assert_abs_diff_eq!(m.sx2, nf / 4.0, epsilon = 1e-3);
            assert_abs_diff_eq!(m.sy2, nf / 4.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn exactly_polarized_x_state() {
        let n = 12;
        let nf = n as f64;
        let m = CollectiveMoments { n, sz: nf / 2.0, sx2: nf / 4.0, sy2: nf / 4.0, sz2: nf * nf / 4.0 };
        let x = two_spin_state(&m).unwrap();
        assert_eq!(x, TwoSpinXState::polarized());
    }

    #[test]
    fn isotropic_basis_state_moments() {
        let n = 20;
        let m = moments(n, 1.0, 0.4);
        // hN/2 = 4
        let s = n as f64 / 2.0;
        assert_eq!(m.sz, 4.0);
        assert_abs_diff_eq!(m.sx2, 0.5 * (s * (s + 1.0) - 16.0), epsilon = 1e-12);
        assert_abs_diff_eq!(m.sy2, m.sx2, epsilon = 1e-12);
        assert_eq!(two_spin_state(&m).unwrap().u, 0.0);
    }

    #[test]
    fn moments_match_full_space() {
        let p = ModelParams::new(8, 0.5, 1.0).unwrap();
        let (_, psi) = build_full_space(&p).unwrap().ground_state();
        let oracle = moments_from_full_space(8, &psi);
        let m = moments(8, 0.5, 1.0);
        assert_abs_diff_eq!(m.sz.abs(), oracle.sz.abs(), epsilon = 1e-10);
        assert_abs_diff_eq!(m.sx2, oracle.sx2, epsilon = 1e-10);
        assert_abs_diff_eq!(m.sy2, oracle.sy2, epsilon = 1e-10);
        assert_abs_diff_eq!(m.sz2, oracle.sz2, epsilon = 1e-10);
    }

    #[test]
    fn x_state_matches_partial_trace() {
        for &(n, gamma, h) in &[(8, 0.5, 1.0), (6, 0.5, 0.8), (7, 0.2, 1.3)] {
            let p = ModelParams::new(n, gamma, h).unwrap();
            let (_, psi) = build_full_space(&p).unwrap().ground_state();
            let oracle = partial_trace_oracle(n, &psi, (0, 1)).unwrap();
            let x = two_spin_state(&moments(n, gamma, h)).unwrap();
            assert_abs_diff_eq!(x.v1, oracle.v1, epsilon = 1e-10);
            assert_abs_diff_eq!(x.v2, oracle.v2, epsilon = 1e-10);
            assert_abs_diff_eq!(x.y, oracle.y, epsilon = 1e-10);
            assert_abs_diff_eq!(x.u, oracle.u, epsilon = 1e-10);
        }
    }

    #[test]
    fn pair_independence() {
        let p = ModelParams::new(6, 0.5, 0.8).unwrap();
        let (_, psi) = build_full_space(&p).unwrap().ground_state();
        let a = partial_trace_oracle(6, &psi, (0, 1)).unwrap();
        let b = partial_trace_oracle(6, &psi, (2, 5)).unwrap();
        assert_abs_diff_eq!(a.v1, b.v1, epsilon = 1e-10);
        assert_abs_diff_eq!(a.u, b.u, epsilon = 1e-10);
    }

    #[test]
    fn two_spin_ground_state_direct() {
        // N = 2, γ = 0, h = 0: (|↑↑⟩ + |↓↓⟩)/√2 and (|↑↓⟩ + |↓↑⟩)/√2 both have
        // σxσx = +1 and energy -1/2. The tie-break selects the first, giving
        // v1 = v2 = u = 1/2, y = 0.
        let p = ModelParams::new(2, 0.0, 0.0).unwrap();
        let full = build_full_space(&p).unwrap();
        assert_abs_diff_eq!(full.ground_energy(), -0.5, epsilon = 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = DVector::from_vec(vec![s, 0.0, 0.0, s]);
        let residual = (&full.matrix * &psi + &psi * 0.5).norm();
        assert_abs_diff_eq!(residual, 0.0, epsilon = 1e-12);
        let oracle = partial_trace_oracle(2, &psi, (0, 1)).unwrap();
        for (got, want) in [(oracle.v1, 0.5), (oracle.v2, 0.5), (oracle.y, 0.0), (oracle.u, 0.5)] {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        let x = two_spin_state(&moments(2, 0.0, 0.0)).unwrap();
        assert!((x.v1 - 0.5).abs() < 1e-12 && (x.u - 0.5).abs() < 1e-12 && x.y.abs() < 1e-12);
    }

    #[test]
    fn not_x_shaped_detected() {
        // |+⟩^⊗3 has coherences outside the X pattern
        let n = 3;
        let psi = DVector::from_element(1 << n, 1.0 / (8.0f64).sqrt());
        assert!(matches!(partial_trace_oracle(n, &psi, (0, 1)), Err(LmgError::NotXShaped(_))));
    }

    #[test]
    fn sector_identity_and_trace() {
        for &(n, g, h) in &[(64, 0.0, 0.3), (512, 0.5, 1.0), (300, 0.75, 1.7), (33, 1.0, 0.2)] {
            let m = moments(n, g, h);
            assert_abs_diff_eq!(m.sx2 + m.sy2 + m.sz2, m.casimir(), epsilon = 1e-9 * m.casimir().max(1.0));
            assert!(m.sx2 >= m.sy2 - 1e-9);
            let x = two_spin_state(&m).unwrap();
            assert_abs_diff_eq!(x.trace(), 1.0, epsilon = 1e-12);
            assert!(x.eigenvalues().iter().all(|&e| e >= -1e-10));
            let single = SingleSpinState::from_moments(&m);
            assert_abs_diff_eq!(single.p_up, x.v1 + x.y, epsilon = 1e-10);
            assert!((0.0..=1.0).contains(&single.p_up));
        }
    }

    #[test]
    fn clamping_is_threshold_bound() {
        assert_eq!(clamp_small(-5e-13, "y").unwrap(), 0.0);
        assert_eq!(clamp_small(3e-13, "y").unwrap(), 3e-13);
        assert!(clamp_small(-2e-12, "y").is_err());
    }
}
