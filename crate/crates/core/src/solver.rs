//! Lowest eigenpair of a real symmetric tridiagonal matrix.
//!
//! Large blocks use Sturm-sequence bisection followed by inverse iteration on
//! an LDLᵀ factorization shifted just below the eigenvalue, so memory stays
//! O(dim). Blocks smaller than [`DENSE_LIMIT`] go through implicit QL.

use crate::error::{LmgError, Result};
use crate::hamiltonian::{build_sector, TridiagonalHamiltonian};
use crate::params::{DickeSector, ModelParams, Parity};

/// Blocks below this dimension are diagonalized with implicit QL.
pub const DENSE_LIMIT: usize = 64;
/// Relative width at which eigenvalue bisection stops.
pub const BISECTION_REL_TOL: f64 = 1e-13;
pub const MAX_BISECTION_STEPS: usize = 200;
pub const MAX_INVERSE_SWEEPS: usize = 50;
const MAX_QL_SWEEPS: usize = 60;
/// Energies closer than this (relative to max(1, |E|)) count as degenerate.
pub const TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateSolution {
    pub energy: f64,
    /// Unit-norm coefficients in ascending-M order.
    pub vector: Vec<f64>,
    pub sector: DickeSector,
    /// ‖Hv − Ev‖₂.
    pub residual: f64,
}

impl GroundStateSolution {
    pub fn n(&self) -> usize {
        self.sector.n
    }
}

/// Largest residual a returned solution may have.
pub fn residual_bound(energy: f64) -> f64 {
    1e-10 * energy.abs().max(1.0)
}

fn matrix_scale(diag: &[f64], offdiag: &[f64]) -> f64 {
    let d = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let e = offdiag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (d + 2.0 * e).max(f64::MIN_POSITIVE)
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE * matrix_scale(diag, offdiag).max(1.0);
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { offdiag[i - 1] * offdiag[i - 1] / d };
        d = diag[i] - x - coupling;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_interval(diag: &[f64], offdiag: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += offdiag[i - 1].abs();
        }
        if i + 1 < n {
            r += offdiag[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Bracket `[lo, hi]` around the smallest eigenvalue with no eigenvalue below `lo`.
pub fn bisect_lowest(diag: &[f64], offdiag: &[f64]) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = gershgorin_interval(diag, offdiag);
    let scale = matrix_scale(diag, offdiag);
    // widen slightly so rounding in the recurrence cannot miss an endpoint
    let pad = 4.0 * f64::EPSILON * scale;
    lo -= pad;
    hi += pad;
    let abs_floor = 2.0 * f64::EPSILON * scale;
    for _ in 0..MAX_BISECTION_STEPS {
        let width_tol = BISECTION_REL_TOL * lo.abs().max(hi.abs()) + abs_floor;
        if hi - lo <= width_tol {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok((lo, hi));
        }
        if sturm_count(diag, offdiag, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(LmgError::NonConvergence { iterations: MAX_BISECTION_STEPS, residual: hi - lo })
}

/// Solve (T - σI) x = rhs with an unpivoted LDLᵀ factorization.
///
/// Only valid when σ lies at or below the smallest eigenvalue, where the
/// shifted matrix is positive semidefinite.
fn shifted_ldl_solve(diag: &[f64], offdiag: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let pivmin = f64::EPSILON * matrix_scale(diag, offdiag).max(1.0);
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    d[0] = (diag[0] - shift).max(pivmin);
    for i in 1..n {
        l[i - 1] = offdiag[i - 1] / d[i - 1];
        d[i] = (diag[i] - shift - l[i - 1] * offdiag[i - 1]).max(pivmin);
    }
    let mut z = rhs.to_vec();
    for i in 1..n {
        z[i] -= l[i - 1] * z[i - 1];
    }
    for i in 0..n {
        z[i] /= d[i];
    }
    for i in (0..n.saturating_sub(1)).rev() {
        z[i] -= l[i] * z[i + 1];
    }
    z
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Flip the sign so the first component with magnitude above 1e-12 is positive.
fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn rayleigh_and_residual(h: &TridiagonalHamiltonian, v: &[f64]) -> (f64, f64) {
    let hv = h.apply(v);
    let e: f64 = hv.iter().zip(v).map(|(a, b)| a * b).sum();
    let r = hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - e * b).powi(2))
        .sum::<f64>()
        .sqrt();
    (e, r)
}

fn inverse_iteration(h: &TridiagonalHamiltonian, shift: f64) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_INVERSE_SWEEPS {
        let mut next = shifted_ldl_solve(&h.diag, &h.offdiag, shift, &v);
        normalize(&mut next);
        let (e, r) = rayleigh_and_residual(h, &next);
        v = next;
        // stop once the residual is at roundoff level or has stopped improving
        let settled = r <= 1e-14 * matrix_scale(&h.diag, &h.offdiag) || r >= 0.5 * last_residual;
        if settled && r <= residual_bound(e) {
            return Ok(v);
        }
        last_residual = r;
    }
    let (e, r) = rayleigh_and_residual(h, &v);
    if r <= residual_bound(e) {
        Ok(v)
    } else {
        Err(LmgError::NonConvergence { iterations: MAX_INVERSE_SWEEPS, residual: r })
    }
}

/// All eigenpairs of a small symmetric tridiagonal matrix by implicit QL.
///
/// Returns eigenvalues and the eigenvectors as columns of a row-major `n×n` array.
pub fn tridiagonal_ql(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(LmgError::NonConvergence { iterations: sweeps, residual: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let t = row[i + 1];
                    row[i + 1] = s * row[i] + c * t;
                    row[i] = c * row[i] - s * t;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Smallest eigenvalue and its eigenvector for one block.
pub fn ground_state(h: &TridiagonalHamiltonian) -> Result<GroundStateSolution> {
    let n = h.dim();
    if n == 0 {
        return Err(LmgError::EmptySector(h.sector.parity.name(), h.sector.n));
    }
    let mut vector = if h.is_diagonal() {
        let (k, _) = h
            .diag
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    } else if n < DENSE_LIMIT {
        let (evals, evecs) = tridiagonal_ql(&h.diag, &h.offdiag)?;
        let (k, _) = evals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty");
        let mut v: Vec<f64> = evecs.iter().map(|row| row[k]).collect();
        normalize(&mut v);
        v
    } else {
        let (lo, _) = bisect_lowest(&h.diag, &h.offdiag)?;
        inverse_iteration(h, lo)?
    };
    fix_sign(&mut vector);
    let (energy, residual) = rayleigh_and_residual(h, &vector);
    if residual > residual_bound(energy) {
        return Err(LmgError::NonConvergence { iterations: 0, residual });
    }
    Ok(GroundStateSolution { energy, vector, sector: h.sector.clone(), residual })
}

/// Ground state over both parity blocks of the S = N/2 multiplet.
///
/// Energies tied within [`TIE_TOL`] resolve to the block holding M = N/2.
pub fn global_ground_state(params: &ModelParams) -> Result<GroundStateSolution> {
    let solve = |parity| build_sector(params, parity).and_then(|h| ground_state(&h));
    let (lower, upper) = rayon::join(|| solve(Parity::Lower), || solve(Parity::Upper));
    let (lower, upper) = (lower?, upper?);
    Ok(select_ground(lower, upper))
}

pub(crate) fn select_ground(a: GroundStateSolution, b: GroundStateSolution) -> GroundStateSolution {
    let scale = a.energy.abs().max(b.energy.abs()).max(1.0);
    if (a.energy - b.energy).abs() <= TIE_TOL * scale {
        if a.sector.contains_polarized() {
            a
        } else {
            b
        }
    } else if a.energy < b.energy {
        a
    } else {
        b
    }
}
