//! Reference values: mean-field thermodynamic limit, the exactly solvable
//! isotropic point, and leading-order finite-size expansions in each phase.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::coherence::CoherencePair;
use crate::entropy::binary_entropy;
use crate::error::{LmgError, Result};
use crate::measures::{Measure, MeasureSet};
use crate::params::Phase;
use crate::reduced::{SingleSpinState, TwoSpinXState};
use crate::steered::golden_max;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(LmgError::InvalidParams(format!("gamma = {gamma} outside [0, 1]")));
    }
    Ok(())
}

fn check_field(h: f64) -> Result<()> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(LmgError::InvalidParams(format!("h = {h} must be finite and non-negative")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Mean field

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldSolution {
    pub theta0: f64,
    pub phi0: f64,
    /// `Symmetric` for h ≥ 1, `Broken` otherwise.
    pub phase: Phase,
    /// The energy does not depend on φ (γ = 1, or θ₀ = 0).
    pub phi_degenerate: bool,
}

impl MeanFieldSolution {
    /// Single-spin marginal of the product state.
    pub fn single_spin(&self) -> SingleSpinState {
        let m = self.theta0.cos();
        SingleSpinState { p_up: 0.5 * (1.0 + m), m }
    }
}

/// Product-state energy ⟨H⟩(θ, φ) for N spins.
pub fn mean_field_energy(gamma: f64, h: f64, n: usize, theta: f64, phi: f64) -> f64 {
    let n = n as f64;
    let anis = phi.cos().powi(2) + gamma * phi.sin().powi(2);
    -0.5 * (n - 1.0) * theta.sin().powi(2) * anis - h * n * theta.cos()
}

pub fn mean_field_minimize(gamma: f64, h: f64) -> Result<MeanFieldSolution> {
    check_gamma(gamma)?;
    check_field(h)?;
    if h >= 1.0 {
        return Ok(MeanFieldSolution { theta0: 0.0, phi0: 0.0, phase: Phase::Symmetric, phi_degenerate: true });
    }
    Ok(MeanFieldSolution {
        theta0: h.acos(),
        phi0: 0.0,
        phase: Phase::Broken,
        phi_degenerate: gamma == 1.0,
    })
}

/// Brute-force minimum of [`mean_field_energy`] on a uniform (θ, φ) grid,
/// returned as (energy, θ, φ).
pub fn mean_field_grid_minimum(gamma: f64, h: f64, n: usize, points: usize) -> (f64, f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=points {
        let theta = PI * i as f64 / points as f64;
        for j in 0..2 * points {
            let phi = PI * j as f64 / points as f64;
            let e = mean_field_energy(gamma, h, n, theta, phi);
            if e < best.0 {
                best = (e, theta, phi);
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Thermodynamic limit, γ < 1

/// Two-spin state of the symmetrized mean-field ground state.
pub fn tdl_x_state(h: f64) -> TwoSpinXState {
    if h >= 1.0 {
        return TwoSpinXState::polarized();
    }
    let q = 0.25 * (1.0 - h * h);
    TwoSpinXState { v1: 0.25 * (1.0 + h).powi(2), v2: 0.25 * (1.0 - h).powi(2), y: q, u: q }
}

/// Thermodynamic-limit coherence, ASC and MSC for γ < 1.
pub fn tdl_measures(gamma: f64, h: f64) -> Result<MeasureSet> {
    check_gamma(gamma)?;
    check_field(h)?;
    if gamma >= 1.0 {
        return Err(LmgError::Unsupported(
            "γ = 1 has no mean-field two-spin limit of this form; use isotropic_measures".into(),
        ));
    }
    if h >= 1.0 {
        return Ok(MeasureSet::POLARIZED);
    }
    let (hp, hm) = (1.0 + h, 1.0 - h);
    let lam = 1.0 - h * h;
    let root = (1.0 + h.powi(4) - h * h).sqrt();
    let log_term = |hi: f64| if hi > 0.0 { hi * hi * hi.log2() / 2.0 } else { 0.0 };
    let c_r = 1.0 + 0.5 * (1.0 + h * h) * (1.0 + h * h).log2() - log_term(hp) - log_term(hm);
    Ok(MeasureSet {
        coherence: CoherencePair { l1: lam, rel_ent: c_r },
        asc: CoherencePair {
            l1: 0.5 * (lam + 3.0 * h + root),
            rel_ent: 2.0 - binary_entropy(0.5 * hp) - binary_entropy(0.5 * (1.0 + root)),
        },
        msc: CoherencePair { l1: lam.sqrt(), rel_ent: binary_entropy(0.5 * hp) },
    })
}

/// Largest single-spin coherence in the thermodynamic limit.
pub fn tdl_single_spin(h: f64) -> CoherencePair {
    if h >= 1.0 {
        CoherencePair::new(1.0, 1.0)
    } else {
        CoherencePair::new(h, 1.0 - binary_entropy(0.5 * (1.0 + h)))
    }
}

/// Location and value of the minimum of the thermodynamic-limit relative
/// entropy ASC over h ∈ [0, 1], to 1e-8 in h.
pub fn asc_rel_ent_minimum(gamma: f64) -> Result<(f64, f64)> {
    let f = |h: f64| tdl_measures(gamma, h).map(|m| -m.asc.rel_ent).unwrap_or(f64::NEG_INFINITY);
    let (h, neg) = golden_max(f, 0.0, 1.0, 1e-8);
    Ok((h, -neg))
}

// ---------------------------------------------------------------------------
// Isotropic point

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicSolution {
    pub n: usize,
    pub m0: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub x0: f64,
}

/// Ground-state magnetization at γ = 1: the allowed M nearest to hN/2, or
/// N/2 once h ≥ 1. Exact ties go to the parity class containing M = N/2.
pub fn isotropic_m0(n: usize, h: f64) -> Result<f64> {
    check_field(h)?;
    if n < 2 {
        return Err(LmgError::InvalidParams(format!("N = {n} < 2")));
    }
    if h >= 1.0 {
        return Ok(n as f64 / 2.0);
    }
    // work with k = 2M, which shares the parity of N
    let target = h * n as f64;
    let parity = (n % 2) as i64;
    let mut lo = target.floor() as i64;
    if lo.rem_euclid(2) != parity {
        lo -= 1;
    }
    let hi = lo + 2;
    let (d_lo, d_hi) = (target - lo as f64, hi as f64 - target);
    let k = if d_lo < d_hi {
        lo
    } else if d_hi < d_lo {
        hi
    } else if (n as i64 - lo).rem_euclid(4) == 0 {
        lo
    } else {
        hi
    };
    Ok(k.min(n as i64) as f64 / 2.0)
}

impl IsotropicSolution {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        let m0 = isotropic_m0(n, h)?;
        let nf = n as f64;
        let (n_plus, n_minus) = (nf + 2.0 * m0, nf - 2.0 * m0);
        let x0 = ((n_plus * n_minus).powi(2) + 16.0 * m0 * m0 * (nf - 1.0).powi(2)).sqrt()
            / (2.0 * nf * (nf - 1.0));
        Ok(Self { n, m0, n_plus, n_minus, x0 })
    }

    /// X state of the basis state |S, M₀⟩.
    pub fn x_state(&self) -> TwoSpinXState {
        let nf = self.n as f64;
        let den = 4.0 * nf * (nf - 1.0);
        let (sz, sz2) = (self.m0, self.m0 * self.m0);
        let common = nf * nf - 2.0 * nf + 4.0 * sz2;
        TwoSpinXState {
            v1: (common + 4.0 * (nf - 1.0) * sz) / den,
            v2: (common - 4.0 * (nf - 1.0) * sz) / den,
            y: (nf * nf - 4.0 * sz2) / den,
            u: 0.0,
        }
    }
}

/// Closed-form measures at γ = 1 for any N.
pub fn isotropic_measures(n: usize, h: f64) -> Result<MeasureSet> {
    let sol = IsotropicSolution::new(n, h)?;
    if h >= 1.0 {
        return Ok(MeasureSet::POLARIZED);
    }
    let IsotropicSolution { m0, n_plus: np, n_minus: nm, x0, .. } = sol;
    let nf = n as f64;
    let nn1 = nf * (nf - 1.0);
    let c = np * nm / (2.0 * nn1);
    let msc_l1 = (np * nm).sqrt() / (2.0 * nf - 2.0);
    let msc_r = binary_entropy((np - 1.0) / (2.0 * nf - 2.0))
        - binary_entropy(0.5 + (nf * nf + 12.0 * m0 * m0).sqrt() / (4.0 * nf - 4.0));
    let asc_l1 = x0 + (np * (1.0 - 2.0 * m0).abs() + nm * (nf + 4.0 * m0 + 1.0)) / (2.0 * nn1);
    let asc_r = 2.0 - 2.0 * binary_entropy(0.5 * (1.0 + x0)) + binary_entropy(np / (2.0 * nf))
        - np / (2.0 * nf) * binary_entropy(nm / (2.0 * nf - 2.0))
        - nm / (2.0 * nf) * binary_entropy(np / (2.0 * nf - 2.0));
    Ok(MeasureSet {
        coherence: CoherencePair::new(c, c),
        asc: CoherencePair::new(asc_l1, asc_r),
        msc: CoherencePair::new(msc_l1, msc_r),
    })
}

// ---------------------------------------------------------------------------
// Finite-size expansions

/// Amplitudes of the N^{-2/3} and N^{-4/3} corrections to the collective
/// moments at h = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCoefficients {
    pub a_z: f64,
    pub a_xx: f64,
    pub a_yy: f64,
    pub a_zz: f64,
}

/// Reference critical amplitudes at N = 2^16, keyed by γ.
pub const REFERENCE_CRITICAL: [(f64, CriticalCoefficients); 4] = [
    (0.0, CriticalCoefficients { a_z: -0.4599, a_xx: 0.9188, a_yy: 1.1144, a_zz: -0.9195 }),
    (0.25, CriticalCoefficients { a_z: -0.4182, a_xx: 0.8354, a_yy: 1.2257, a_zz: -0.8362 }),
    (0.5, CriticalCoefficients { a_z: -0.3659, a_xx: 0.7307, a_yy: 1.4017, a_zz: -0.7315 }),
    (0.75, CriticalCoefficients { a_z: -0.2913, a_xx: 0.5813, a_yy: 1.7621, a_zz: -0.5824 }),
];

pub fn reference_critical(gamma: f64) -> Option<CriticalCoefficients> {
    REFERENCE_CRITICAL.iter().find(|(g, _)| (g - gamma).abs() < 1e-12).map(|&(_, c)| c)
}

impl CriticalCoefficients {
    pub fn to_array(&self) -> [f64; 4] {
        [self.a_z, self.a_xx, self.a_yy, self.a_zz]
    }

    /// Leading-order measures at h = 1.
    pub fn predicted(&self, n: usize) -> MeasureSet {
        let n23 = (n as f64).powf(2.0 / 3.0);
        let n13 = (n as f64).cbrt();
        let Self { a_z, a_xx, a_zz, .. } = *self;
        MeasureSet {
            coherence: CoherencePair::new(a_xx / n23, -a_zz / (2.0 * n23)),
            asc: CoherencePair::new(
                2.0 + (4.0 * a_z + a_xx) / (2.0 * n23),
                2.0 + (2.0 * a_z + a_zz) / (4.0 * n23 * LN_2),
            ),
            msc: CoherencePair::new(
                a_xx / ((-2.0 * a_z).sqrt() * n13),
                -a_xx * a_xx / (4.0 * a_zz * n23 * LN_2),
            ),
        }
    }
}

/// 1/N amplitudes of the collective moments for h > 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPhaseCoefficients {
    pub xi: f64,
    pub b_z: f64,
    pub b_xx: f64,
    pub b_yy: f64,
    pub b_zz: f64,
    pub b0: f64,
}

impl SymmetricPhaseCoefficients {
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Phase::Symmetric.check(h)?;
        let xi = (h - 1.0) * (h - gamma);
        let root = xi.sqrt();
        let b_z = 1.0 + (1.0 + gamma - 2.0 * h) / (2.0 * root);
        let b_xx = (h - gamma) / root;
        let b_yy = 1.0 / b_xx;
        Ok(Self { xi, b_z, b_xx, b_yy, b_zz: 2.0 * b_z, b0: b_xx - b_yy })
    }

    pub fn predicted(&self, n: usize) -> MeasureSet {
        let nf = n as f64;
        let Self { b_z, b0, .. } = *self;
        let lead = 2.0 * b0 - b_z;
        MeasureSet {
            coherence: CoherencePair::new(lead / nf, -b_z / nf),
            asc: CoherencePair::new(2.0 + 2.0 * (b0 + b_z) / nf, 2.0 + b_z / (nf * LN_2)),
            msc: CoherencePair::new(
                lead / ((-2.0 * b_z).sqrt() * nf.sqrt()),
                -lead * lead / (8.0 * nf * b_z * LN_2),
            ),
        }
    }
}

/// 1/N amplitudes of the collective moments for h < 1, together with the
/// measure-level 1/N constants built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrokenPhaseCoefficients {
    pub gamma: f64,
    pub h: f64,
    pub lambda: f64,
    pub c_z: f64,
    pub c_xx: f64,
    pub c_yy: f64,
    pub c_zz: f64,
    pub c0: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub a_l1: f64,
    pub a_r: f64,
    pub b_l1: f64,
    pub b_r: f64,
    pub d_l1: f64,
    pub d_r: f64,
}

impl BrokenPhaseCoefficients {
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_field(h)?;
        Phase::Broken.check(h)?;
        if gamma >= 1.0 {
            return Err(LmgError::Unsupported("broken-phase expansion requires γ < 1".into()));
        }
        let g_minus = 1.0 - gamma;
        let lambda = 1.0 - h * h;
        let (hp, hm) = (1.0 + h, 1.0 - h);

        let c_z = h * (g_minus / lambda).sqrt();
        let c_xx = 2.0 + (gamma * h * h + gamma - 2.0) / (lambda * g_minus).sqrt();
        let c_yy = h / c_z;
        let c_zz = 2.0 * h * c_z + (lambda * g_minus).sqrt();
        let c0 = c_xx - c_yy;

        let rho = (lambda * lambda + h * h).sqrt();
        let a_l1 = 0.5 * (c0 - c_zz);
        let kappa1 = c_zz + (lambda * c0 + 4.0 * h * c_z) / (1.0 + h * h);
        let kappa2 = (h * c_z + lambda * a_l1) / rho;
        let kappa3 = (2.0 * c_z - h * c_zz) / (2.0 * lambda);
        let (kappa_plus, kappa_minus) = (1.0 + rho, 1.0 - rho);

        let a_r = 0.25 * kappa1 * (1.0 / LN_2 + (0.5 * (1.0 + h * h)).log2())
            - 0.5 * c_zz * (1.0 + 1.0 / LN_2)
            + 0.25 * (c_zz + 2.0 * c_z) * (0.25 * hp * hp).log2()
            + 0.25 * (c_zz - 2.0 * c_z) * (0.25 * hm * hm).log2();
        let b_l1 = 0.5 * (kappa2 + 3.0 * c_z + c0);
        let b_r = 0.5 * kappa2 * (kappa_plus / kappa_minus).log2();
        let d_l1 = (c0 - c_zz) / (2.0 * lambda.sqrt());
        let d_r = kappa3 * (hm / hp).log2() + (2.0 * kappa3 * h + a_l1) / (2.0 * LN_2);

        Ok(Self {
            gamma,
            h,
            lambda,
            c_z,
            c_xx,
            c_yy,
            c_zz,
            c0,
            kappa_plus,
            kappa_minus,
            kappa1,
            kappa2,
            kappa3,
            a_l1,
            a_r,
            b_l1,
            b_r,
            d_l1,
            d_r,
        })
    }

    /// 1/N constant of a measure, signed as finite-N value minus limit.
    pub fn constant(&self, m: Measure) -> f64 {
        match m {
            Measure::CL1 => self.a_l1,
            Measure::CR => self.a_r,
            Measure::AscL1 => self.b_l1,
            Measure::AscR => self.b_r,
            Measure::MscL1 => self.d_l1,
            Measure::MscR => self.d_r,
        }
    }

    pub fn predicted(&self, n: usize) -> Result<MeasureSet> {
        let tdl = tdl_measures(self.gamma, self.h)?;
        let nf = n as f64;
        let shift = |m: Measure| tdl.get(m) + self.constant(m) / nf;
        Ok(MeasureSet {
            coherence: CoherencePair::new(shift(Measure::CL1), shift(Measure::CR)),
            asc: CoherencePair::new(shift(Measure::AscL1), shift(Measure::AscR)),
            msc: CoherencePair::new(shift(Measure::MscL1), shift(Measure::MscR)),
        })
    }
}

/// Leading-order finite-size measures in the requested phase. At h = 1 the
/// amplitudes are not fixed by the expansion and must be supplied.
pub fn cut_predicted_values(
    gamma: f64,
    h: f64,
    n: usize,
    phase: Phase,
    critical: Option<&CriticalCoefficients>,
) -> Result<MeasureSet> {
    phase.check(h)?;
    match phase {
        Phase::Critical => critical
            .map(|c| c.predicted(n))
            .ok_or_else(|| LmgError::InvalidParams("critical amplitudes must be supplied at h = 1".into())),
        Phase::Symmetric => Ok(SymmetricPhaseCoefficients::new(gamma, h)?.predicted(n)),
        Phase::Broken => BrokenPhaseCoefficients::new(gamma, h)?.predicted(n),
    }
}

/// Predicted log-log slope of the transformed measure.
pub fn theory_slope(phase: Phase, m: Measure) -> f64 {
    match (phase, m) {
        (Phase::Critical, Measure::MscL1) => -1.0 / 3.0,
        (Phase::Critical, _) => -2.0 / 3.0,
        (Phase::Symmetric, Measure::MscL1) => -0.5,
        _ => -1.0,
    }
}

/// Predicted slope for the single-spin maximum coherence.
pub fn single_spin_theory_slope(phase: Phase) -> f64 {
    match phase {
        Phase::Critical => -2.0 / 3.0,
        _ => -1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::max_single_spin_coherence;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mean_field_angles() {
        let s = mean_field_minimize(0.5, 1.5).unwrap();
        assert_eq!((s.theta0, s.phase), (0.0, Phase::Symmetric));
        let b = mean_field_minimize(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(b.theta0, PI / 3.0, epsilon = 1e-15);
        assert_eq!(b.phase, Phase::Broken);
        assert!(mean_field_minimize(1.0, 0.0).unwrap().phi_degenerate);
    }

    #[test]
    fn mean_field_matches_grid() {
        for (gamma, h) in [(0.0, 0.3), (0.5, 0.5), (0.75, 0.95), (0.5, 1.2)] {
            let sol = mean_field_minimize(gamma, h).unwrap();
            // large N: at finite N the optimum sits at cos θ = hN/(N-1)
            let n = 1_000_000_000;
            let (e, theta, phi) = mean_field_grid_minimum(gamma, h, n, 720);
            let e0 = mean_field_energy(gamma, h, n, sol.theta0, sol.phi0);
            assert!(e0 <= e + 1e-12 * e.abs(), "analytic minimum above grid at γ={gamma}, h={h}");
            assert!((theta - sol.theta0).abs() < 1e-2);
            if h < 1.0 {
                assert!(phi.min(PI - phi).abs() < 1e-2 || (phi - PI).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn isotropic_zero_field_is_phi_independent() {
        let e: Vec<f64> = (0..8).map(|k| mean_field_energy(1.0, 0.0, 100, 1.0, 0.4 * k as f64)).collect();
        assert!(e.iter().all(|x| (x - e[0]).abs() < 1e-12));
    }

    #[test]
    fn tdl_examples() {
        assert_eq!(tdl_measures(0.5, 1.3).unwrap(), MeasureSet::POLARIZED);
        let zero = tdl_measures(0.5, 0.0).unwrap();
        for v in zero.to_array() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        }
        assert!(tdl_measures(1.0, 0.5).is_err());
    }

    #[test]
    fn tdl_closed_forms_match_x_state() {
        for k in 0..100 {
            let h = k as f64 / 100.0;
            let closed = tdl_measures(0.5, h).unwrap();
            let direct = MeasureSet::from_x_state(&tdl_x_state(h));
            assert!(closed.max_abs_diff(&direct) < 1e-12, "h = {h}");
            assert_abs_diff_eq!(closed.msc.l1.powi(2), closed.coherence.l1, epsilon = 1e-14);
            assert_abs_diff_eq!(closed.coherence.l1, 1.0 - h * h, epsilon = 1e-15);
        }
    }

    #[test]
    fn tdl_single_spin_matches_mean_field_state() {
        for h in [0.0, 0.3, 0.8, 1.0, 1.7] {
            let sol = mean_field_minimize(0.5, h).unwrap();
            let direct = max_single_spin_coherence(&sol.single_spin());
            assert!(direct.max_abs_diff(&tdl_single_spin(h)) < 1e-14, "h = {h}");
        }
    }

    #[test]
    fn asc_minimum() {
        let (h, v) = asc_rel_ent_minimum(0.5).unwrap();
        assert!((v - 0.8991).abs() < 5e-4, "{v}");
        assert!(h > 0.0 && h < 1.0);
    }

    #[test]
    fn isotropic_m0_rounding() {
        assert_eq!(isotropic_m0(4, 0.4).unwrap(), 1.0);
        assert_eq!(isotropic_m0(5, 0.5).unwrap(), 1.5);
        assert_eq!(isotropic_m0(7, 1.2).unwrap(), 3.5);
        assert_eq!(isotropic_m0(10, 0.0).unwrap(), 0.0);
        // hN/2 = 0.5 ties between 0 and 1; the class of M = 2 wins
        assert_eq!(isotropic_m0(4, 0.25).unwrap(), 0.0);
        // hN/2 = 1.5 ties between 1 and 2; M = 2 lies in the class of N/2 = 2
        assert_eq!(isotropic_m0(4, 0.75).unwrap(), 2.0);
    }

    #[test]
    fn isotropic_example() {
        let m = isotropic_measures(4, 0.4).unwrap();
        assert_abs_diff_eq!(m.coherence.l1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.coherence.rel_ent, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.msc.l1, 12f64.sqrt() / 6.0, epsilon = 1e-15);
        assert_eq!(isotropic_measures(64, 1.2).unwrap(), MeasureSet::POLARIZED);
    }

    #[test]
    fn isotropic_closed_form_matches_its_x_state() {
        for n in [4, 5, 17, 64, 1024] {
            for h in [0.0, 0.13, 0.4, 0.9] {
                let sol = IsotropicSolution::new(n, h).unwrap();
                let closed = isotropic_measures(n, h).unwrap();
                let direct = MeasureSet::from_x_state(&sol.x_state());
                assert!(closed.max_abs_diff(&direct) < 1e-12, "N={n} h={h}");
            }
        }
    }

    #[test]
    fn symmetric_coefficients() {
        let c = SymmetricPhaseCoefficients::new(0.5, 1.1).unwrap();
        assert_abs_diff_eq!(c.b_z, -0.42887, epsilon = 1e-5);
        assert_abs_diff_eq!(c.b_xx, 2.44949, epsilon = 1e-5);
        assert_eq!(c.b_zz, 2.0 * c.b_z);
        assert_eq!(c.b_yy, 1.0 / c.b_xx);
        assert!(c.b_xx > 1.0 && c.b_z < 0.0 && c.b0 + c.b_z > 0.0);
        assert!(SymmetricPhaseCoefficients::new(0.5, 0.9).is_err());
    }

    #[test]
    fn broken_coefficients() {
        let c = BrokenPhaseCoefficients::new(0.5, 0.9).unwrap();
        assert_abs_diff_eq!(c.c_z, 1.45999, epsilon = 1e-5);
        assert_eq!(c.c_yy, c.h / c.c_z);
        assert_eq!(c.a_l1, 0.5 * (c.c0 - c.c_zz));
        assert!(BrokenPhaseCoefficients::new(0.5, 1.1).is_err());
        assert!(BrokenPhaseCoefficients::new(1.0, 0.5).is_err());
    }

    #[test]
    fn critical_prediction_needs_amplitudes() {
        assert!(cut_predicted_values(0.5, 1.0, 1024, Phase::Critical, None).is_err());
        let c = reference_critical(0.5).unwrap();
        let p = cut_predicted_values(0.5, 1.0, 1 << 16, Phase::Critical, Some(&c)).unwrap();
        assert!(p.coherence.l1 > 0.0 && p.asc.l1 < 2.0 && p.msc.rel_ent > 0.0);
        assert!(cut_predicted_values(0.5, 0.9, 1024, Phase::Symmetric, None).is_err());
        for (_, c) in REFERENCE_CRITICAL {
            assert!((c.a_zz / c.a_z - 2.0).abs() < 0.02);
        }
    }

    #[test]
    fn slopes() {
        assert_eq!(theory_slope(Phase::Critical, Measure::MscL1), -1.0 / 3.0);
        assert_eq!(theory_slope(Phase::Critical, Measure::AscR), -2.0 / 3.0);
        assert_eq!(theory_slope(Phase::Symmetric, Measure::MscL1), -0.5);
        assert_eq!(theory_slope(Phase::Symmetric, Measure::MscR), -1.0);
        assert_eq!(theory_slope(Phase::Broken, Measure::MscL1), -1.0);
    }
}
