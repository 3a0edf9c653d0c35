//! Two-qubit helpers: Pauli operators, local measurements, partial traces.
//!
//! Two-qubit matrices use the ordering {↑↑, ↑↓, ↓↑, ↓↓} with qubit A first.

use nalgebra::{Complex, Matrix2, Matrix4, Vector3};

pub type C64 = Complex<f64>;
pub type Qubit = Matrix2<C64>;
pub type TwoQubit = Matrix4<C64>;

pub fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// σ_x, σ_y, σ_z for index 0, 1, 2.
pub fn pauli(axis: usize) -> Qubit {
    let (z, o, i) = (c(0.0), c(1.0), Complex::new(0.0, 1.0));
    match axis {
        0 => Matrix2::new(z, o, o, z),
        1 => Matrix2::new(z, -i, i, z),
        2 => Matrix2::new(o, z, z, -o),
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    }
}

/// Unitary whose columns are the eigenvectors of σ_axis.
pub fn pauli_eigenbasis(axis: usize) -> Qubit {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex::new(0.0, s);
    match axis {
        0 => Matrix2::new(c(s), c(s), c(s), c(-s)),
        1 => Matrix2::new(c(s), c(s), i, -i),
        2 => Matrix2::identity(),
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    }
}

/// Projector (𝟙 + m·σ)/2 for a unit Bloch vector m.
pub fn projector(m: &Vector3<f64>) -> Qubit {
    let mut p = Qubit::identity();
    for k in 0..3 {
        p += pauli(k) * c(m[k]);
    }
    p * c(0.5)
}

/// Bloch direction from polar angle ϑ and azimuth φ.
pub fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

pub fn kron(a: &Qubit, b: &Qubit) -> TwoQubit {
    let mut out = TwoQubit::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// tr_A ρ.
pub fn trace_out_a(rho: &TwoQubit) -> Qubit {
    let mut out = Qubit::zeros();
    for a in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                out[(k, l)] += rho[(2 * a + k, 2 * a + l)];
            }
        }
    }
    out
}

/// tr_B ρ.
pub fn trace_out_b(rho: &TwoQubit) -> Qubit {
    let mut out = Qubit::zeros();
    for b in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] += rho[(2 * i + b, 2 * j + b)];
            }
        }
    }
    out
}

/// Unnormalized tr_A[(M ⊗ 𝟙) ρ] for an operator M on A.
pub fn steer_b(rho: &TwoQubit, m: &Qubit) -> Qubit {
    trace_out_a(&(kron(m, &Qubit::identity()) * rho))
}

/// Unnormalized tr_B[(𝟙 ⊗ M) ρ] for an operator M on B.
pub fn steer_a(rho: &TwoQubit, m: &Qubit) -> Qubit {
    trace_out_b(&(kron(&Qubit::identity(), m) * rho))
}

pub fn trace2(m: &Qubit) -> f64 {
    (m[(0, 0)] + m[(1, 1)]).re
}

/// Length of the Bloch vector of a normalized qubit state.
pub fn bloch_length(rho: &Qubit) -> f64 {
    let dz = (rho[(0, 0)] - rho[(1, 1)]).re;
    (dz * dz + 4.0 * rho[(0, 1)].norm_sqr()).sqrt()
}
