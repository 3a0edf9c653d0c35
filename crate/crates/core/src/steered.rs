//! Average steered coherence (ASC) and maximal steered coherence (MSC).
//!
//! Qubit A is steered by Alice; coherence is measured on qubit B. The closed
//! forms are specialised to two-spin X states; the definitional routines work
//! on any two-qubit density matrix and serve as oracles.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{qubit_coherence, CoherencePair};
use crate::entropy::binary_entropy;
use crate::error::{LmgError, Result};
use crate::qubit::{c, direction, pauli, pauli_eigenbasis, steer_b, trace2, Qubit, TwoQubit};
use crate::reduced::TwoSpinXState;

/// Measurement branches with lower probability contribute nothing.
pub const BRANCH_PROB_FLOOR: f64 = 1e-14;
/// Below this value of 1 − (v₁ − v₂)² the MSC closed form returns its limit, 0.
pub const MSC_DEGENERATE_GUARD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SteeredPair {
    pub asc: CoherencePair,
    pub msc: CoherencePair,
}

/// Unit Bloch direction of a projective measurement on A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDirection {
    /// Polar angle in [0, π].
    pub theta: f64,
    /// Azimuth in [0, 2π).
    pub phi: f64,
}

impl MeasurementDirection {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(LmgError::InvalidParams(format!("polar angle {theta} outside [0, π]")));
        }
        Ok(Self { theta, phi: phi.rem_euclid(2.0 * PI) })
    }

    /// Angular distance of the azimuth to the nearest of {0, π}.
    pub fn phi_distance_to_axis(&self) -> f64 {
        let d = self.phi.rem_euclid(PI);
        d.min(PI - d)
    }
}

/// ASC of an X state from its closed form.
pub fn asc_closed_form(x: &TwoSpinXState) -> CoherencePair {
    let TwoSpinXState { v1, v2, y, u } = *x;
    let d2 = (v1 - v2).powi(2);
    let x1 = (d2 + 4.0 * (y + u).powi(2)).sqrt();
    let x2 = (d2 + 4.0 * (y - u).powi(2)).sqrt();

    let l1 = 0.5 * x1 + (y - v1).abs() + 0.5 * x2 + (y - v2).abs() + (y + u).abs() + (y - u).abs();

    let branch = |xi: f64, vi: f64| {
        let weight = y + vi;
        let mixing = if weight > 0.0 { weight * binary_entropy(y / weight) } else { 0.0 };
        binary_entropy(0.5 * (1.0 + xi)) + mixing
    };
    let rel_ent = 2.0 + binary_entropy(y + v1) - branch(x1, v1) - branch(x2, v2);
    CoherencePair { l1, rel_ent }
}

/// ASC from its definition: Alice measures σ_x, σ_y, σ_z with equal weight
/// and Bob averages the coherence of his collapsed state over the eigenbases
/// of the two complementary Pauli operators.
pub fn asc_definitional(rho: &TwoQubit) -> CoherencePair {
    let mut total = CoherencePair::ZERO;
    for i in 0..3 {
        for sign in [1.0, -1.0] {
            let proj = (Qubit::identity() + pauli(i) * c(sign)) * c(0.5);
            let steered = steer_b(rho, &proj);
            let p = trace2(&steered);
            if p < BRANCH_PROB_FLOOR {
                continue;
            }
            let state = steered / c(p);
            for j in (0..3).filter(|&j| j != i) {
                let basis = pauli_eigenbasis(j);
                let pair = qubit_coherence(&(basis.adjoint() * state * basis));
                total.l1 += p * pair.l1;
                total.rel_ent += p * pair.rel_ent;
            }
        }
    }
    CoherencePair { l1: 0.5 * total.l1, rel_ent: 0.5 * total.rel_ent }
}

/// MSC of an X state from its closed form (optimal measurement at
/// ϑ₀ = arccos(v₂ − v₁), φ₀ ∈ {0, π}).
pub fn msc_closed_form(x: &TwoSpinXState) -> CoherencePair {
    let TwoSpinXState { v1, v2, y, u } = *x;
    let gap = 1.0 - (v1 - v2).powi(2);
    if gap < MSC_DEGENERATE_GUARD {
        return CoherencePair::ZERO;
    }
    let root = gap.sqrt();
    let l1 = 2.0 * (y + u) / root;
    let r12 = (y + u) / root;
    let r11 = v1 / (1.0 + v1 - v2) + y / (1.0 - v1 + v2);
    let bloch = ((1.0 - 2.0 * r11).powi(2) + 4.0 * r12 * r12).sqrt();
    let rel_ent = binary_entropy(r11) - binary_entropy(0.5 * (1.0 + bloch));
    CoherencePair { l1, rel_ent }
}

/// True when Bob's marginal has equal populations, so the reference
/// eigenbasis is not unique and closed forms are evaluated as a limit.
pub fn marginal_is_degenerate(x: &TwoSpinXState) -> bool {
    (x.v1 - x.v2).abs() < 1e-12
}

pub fn steered_two_spin(x: &TwoSpinXState) -> SteeredPair {
    SteeredPair { asc: asc_closed_form(x), msc: msc_closed_form(x) }
}

/// Angular grid for measurement searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridResolution {
    /// Points on [0, π], endpoints included.
    pub n_theta: usize,
    /// Points on [0, 2π), endpoint excluded.
    pub n_phi: usize,
}

impl GridResolution {
    pub const FINE: GridResolution = GridResolution { n_theta: 361, n_phi: 720 };
    pub const COARSE: GridResolution = GridResolution { n_theta: 91, n_phi: 180 };

    pub fn theta(&self, k: usize) -> f64 {
        PI * k as f64 / (self.n_theta - 1) as f64
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_phi as f64
    }

    pub fn theta_step(&self) -> f64 {
        PI / (self.n_theta - 1) as f64
    }

    pub fn phi_step(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }
}

impl Default for GridResolution {
    fn default() -> Self {
        Self::FINE
    }
}

/// Result of the MSC grid search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MscOracle {
    pub value: CoherencePair,
    pub l1_direction: MeasurementDirection,
    pub rel_ent_direction: MeasurementDirection,
}

/// Maximize `f` on [lo, hi] by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Collapsed-state coherence of B in the eigenbasis of ρ_B, as a function of
/// Alice's measurement direction.
pub struct SteeringObjective {
    /// tr_A[(σ_k ⊗ 𝟙)ρ] rotated into the marginal eigenbasis; index 3 is ρ_B.
    parts: [Qubit; 4],
}

impl SteeringObjective {
    /// Fails with [`LmgError::DegenerateMarginal`] when ρ_B has equal eigenvalues.
    pub fn new(rho: &TwoQubit) -> Result<Self> {
        let marginal = steer_b(rho, &Qubit::identity());
        let eig = SymmetricEigen::new(marginal);
        if (eig.eigenvalues[0] - eig.eigenvalues[1]).abs() < 1e-12 {
            return Err(LmgError::DegenerateMarginal);
        }
        let basis: Matrix2<_> = eig.eigenvectors;
        let rotate = |m: Qubit| basis.adjoint() * m * basis;
        Ok(Self {
            parts: [
                rotate(steer_b(rho, &pauli(0))),
                rotate(steer_b(rho, &pauli(1))),
                rotate(steer_b(rho, &pauli(2))),
                rotate(marginal),
            ],
        })
    }

    /// Coherence of B after Alice obtains the outcome (𝟙 + m·σ)/2.
    pub fn eval(&self, theta: f64, phi: f64) -> CoherencePair {
        let m = direction(theta, phi);
        let steered = (self.parts[3]
            + self.parts[0] * c(m[0])
            + self.parts[1] * c(m[1])
            + self.parts[2] * c(m[2]))
            * c(0.5);
        let p = trace2(&steered);
        if p < BRANCH_PROB_FLOOR {
            return CoherencePair::ZERO;
        }
        qubit_coherence(&(steered / c(p)))
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    theta: f64,
    phi: f64,
}

impl Best {
    fn none() -> Self {
        Best { value: f64::NEG_INFINITY, theta: 0.0, phi: 0.0 }
    }

    fn offer(&mut self, value: f64, theta: f64, phi: f64) {
        if value > self.value {
            *self = Best { value, theta, phi };
        }
    }
}

fn refine(best: Best, grid: &GridResolution, f: impl Fn(f64, f64) -> f64) -> Best {
    let tol = 1e-10;
    let (t_lo, t_hi) = ((best.theta - grid.theta_step()).max(0.0), (best.theta + grid.theta_step()).min(PI));
    let (theta, v_theta) = golden_max(|t| f(t, best.phi), t_lo, t_hi, tol);
    let mut out = best;
    out.offer(v_theta, theta, best.phi);
    let (phi, v_phi) = golden_max(
        |p| f(out.theta, p),
        out.phi - grid.phi_step(),
        out.phi + grid.phi_step(),
        tol,
    );
    out.offer(v_phi, out.theta, phi.rem_euclid(2.0 * PI));
    out
}

/// MSC by direct maximization over projective measurements on A.
///
/// Scans a (ϑ, φ) grid, then refines each measure's optimum with one
/// golden-section pass along ϑ followed by one along φ.
pub fn msc_grid_oracle(rho: &TwoQubit, grid: GridResolution) -> Result<MscOracle> {
    if grid.n_theta < 3 || grid.n_phi < 4 {
        return Err(LmgError::InvalidParams("measurement grid too coarse".into()));
    }
    let objective = SteeringObjective::new(rho)?;
    let rows: Vec<(Best, Best)> = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            let (mut l1, mut re) = (Best::none(), Best::none());
            for j in 0..grid.n_phi {
                let phi = grid.phi(j);
                let v = objective.eval(theta, phi);
                l1.offer(v.l1, theta, phi);
                re.offer(v.rel_ent, theta, phi);
            }
            (l1, re)
        })
        .collect();
    let (mut l1, mut re) = (Best::none(), Best::none());
    for (a, b) in rows {
        l1.offer(a.value, a.theta, a.phi);
        re.offer(b.value, b.theta, b.phi);
    }
    let l1 = refine(l1, &grid, |t, p| objective.eval(t, p).l1);
    let re = refine(re, &grid, |t, p| objective.eval(t, p).rel_ent);
    Ok(MscOracle {
        value: CoherencePair { l1: l1.value, rel_ent: re.value },
        l1_direction: MeasurementDirection::new(l1.theta, l1.phi)?,
        rel_ent_direction: MeasurementDirection::new(re.theta, re.phi)?,
    })
}

/// Maximize a scalar function of the measurement direction: grid scan, then
/// the same golden-section refinement as [`msc_grid_oracle`].
pub fn grid_maximize<F>(grid: GridResolution, f: F) -> Result<(f64, MeasurementDirection)>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if grid.n_theta < 3 || grid.n_phi < 4 {
        return Err(LmgError::InvalidParams("measurement grid too coarse".into()));
    }
    let rows: Vec<Best> = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            let mut best = Best::none();
            for j in 0..grid.n_phi {
                let phi = grid.phi(j);
                best.offer(f(theta, phi), theta, phi);
            }
            best
        })
        .collect();
    let mut best = Best::none();
    for row in rows {
        best.offer(row.value, row.theta, row.phi);
    }
    let best = refine(best, &grid, &f);
    Ok((best.value, MeasurementDirection::new(best.theta, best.phi)?))
}

/// Optimal polar angle predicted for X states, arccos(v₂ − v₁).
pub fn msc_optimal_theta(x: &TwoSpinXState) -> f64 {
    (x.v2 - x.v1).clamp(-1.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::kron;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tdl_broken(h: f64) -> TwoSpinXState {
        let q = 0.25 * (1.0 - h * h);
        TwoSpinXState { v1: 0.25 * (1.0 + h).powi(2), v2: 0.25 * (1.0 - h).powi(2), y: q, u: q }
    }

    fn bell() -> TwoSpinXState {
        TwoSpinXState { v1: 0.5, v2: 0.5, y: 0.0, u: 0.5 }
    }

    fn x_state() -> impl Strategy<Value = TwoSpinXState> {
        (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..=1.0).prop_filter_map("zero weight", |(a, b, y, w)| {
            let total = a + b + 2.0 * y;
            (total > 1e-6).then(|| {
                let (v1, v2, y) = (a / total, b / total, y / total);
                TwoSpinXState { v1, v2, y, u: w * (v1 * v2).sqrt() }
            })
        })
    }

    #[test]
    fn asc_examples() {
        assert_eq!(asc_closed_form(&TwoSpinXState::polarized()), CoherencePair::new(2.0, 2.0));
        assert_abs_diff_eq!(asc_closed_form(&bell()).l1, 3.0, epsilon = 1e-15);
        let h0 = asc_closed_form(&tdl_broken(0.0));
        assert_abs_diff_eq!(h0.l1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h0.rel_ent, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn asc_definitional_examples() {
        let mixed = kron(&(Qubit::identity() * c(0.5)), &(Qubit::identity() * c(0.5)));
        assert_abs_diff_eq!(asc_definitional(&mixed).l1, 0.0, epsilon = 1e-15);
        let up = asc_definitional(&TwoSpinXState::polarized().to_matrix());
        assert_abs_diff_eq!(up.l1, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(up.rel_ent, 2.0, epsilon = 1e-12);
        let b = asc_definitional(&bell().to_matrix());
        assert_abs_diff_eq!(b.l1, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn msc_examples() {
        let b = msc_closed_form(&bell());
        assert_abs_diff_eq!(b.l1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.rel_ent, 1.0, epsilon = 1e-15);
        assert_eq!(msc_closed_form(&TwoSpinXState::polarized()), CoherencePair::ZERO);
        for h in [0.1, 0.5, 0.9] {
            let m = msc_closed_form(&tdl_broken(h));
            assert_abs_diff_eq!(m.l1, (1.0 - h * h).sqrt(), epsilon = 1e-14);
            assert_abs_diff_eq!(m.rel_ent, binary_entropy(0.5 * (1.0 + h)), epsilon = 1e-12);
        }
    }

    #[test]
    fn msc_l1_identity() {
        let x = TwoSpinXState { v1: 0.5, v2: 0.1, y: 0.2, u: 0.2 };
        let m = msc_closed_form(&x);
        assert_abs_diff_eq!(m.l1 * (1.0 - (x.v1 - x.v2).powi(2)).sqrt(), 2.0 * (x.y + x.u), epsilon = 1e-15);
    }

    #[test]
    fn msc_closed_form_is_objective_at_predicted_angle() {
        // the closed forms evaluate the collapsed-state coherence at ϑ₀, φ₀ = 0
        for x in [
            TwoSpinXState { v1: 0.5, v2: 0.1, y: 0.2, u: 0.2 },
            TwoSpinXState { v1: 0.29, v2: 0.54, y: 0.085, u: 0.37 },
            tdl_broken(0.6),
        ] {
            let obj = SteeringObjective::new(&x.to_matrix()).unwrap();
            let at_opt = obj.eval(msc_optimal_theta(&x), 0.0);
            let closed = msc_closed_form(&x);
            assert!(at_opt.max_abs_diff(&closed) < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn grid_oracle_l1_and_location() {
        let x = TwoSpinXState { v1: 0.5, v2: 0.1, y: 0.2, u: 0.2 };
        let oracle = msc_grid_oracle(&x.to_matrix(), GridResolution::FINE).unwrap();
        assert_abs_diff_eq!(oracle.value.l1, msc_closed_form(&x).l1, epsilon = 1e-8);
        assert!((oracle.l1_direction.theta - msc_optimal_theta(&x)).abs() < 1e-2);
        assert!(oracle.l1_direction.phi_distance_to_axis() < 1e-2);
        // the closed-form rel-ent value is attained by a valid measurement
        assert!(msc_closed_form(&x).rel_ent <= oracle.value.rel_ent + 1e-9);
    }

    #[test]
    fn grid_oracle_on_product_state() {
        let up = TwoSpinXState::polarized().to_matrix();
        let oracle = msc_grid_oracle(&up, GridResolution::COARSE).unwrap();
        assert_eq!(oracle.value, CoherencePair::ZERO);
    }

    #[test]
    fn grid_oracle_rejects_degenerate_marginal() {
        assert!(matches!(
            msc_grid_oracle(&bell().to_matrix(), GridResolution::COARSE),
            Err(LmgError::DegenerateMarginal)
        ));
    }

    #[test]
    fn direction_ranges() {
        assert!(MeasurementDirection::new(-0.1, 0.0).is_err());
        let d = MeasurementDirection::new(1.0, -0.5).unwrap();
        assert!((0.0..2.0 * PI).contains(&d.phi));
        assert_abs_diff_eq!(MeasurementDirection::new(0.3, PI + 0.004).unwrap().phi_distance_to_axis(), 0.004, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn asc_closed_form_matches_definition(x in x_state()) {
            let closed = asc_closed_form(&x);
            let def = asc_definitional(&x.to_matrix());
            prop_assert!(closed.max_abs_diff(&def) < 1e-10, "{:?} vs {:?}", closed, def);
            prop_assert!((-1e-12..=3.0 + 1e-12).contains(&closed.l1));
            // maximally entangled states reach 3 under both metrics
            prop_assert!((-1e-12..=3.0 + 1e-12).contains(&closed.rel_ent));
        }

        #[test]
        fn msc_is_nonnegative(x in x_state()) {
            let m = msc_closed_form(&x);
            prop_assert!(m.l1 >= 0.0 && m.rel_ent >= -1e-12);
        }
    }
}
