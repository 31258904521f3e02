// SPDX-License-Identifier: Apache-2.0

//! Reference computations shared by the integration tests. Nothing here
//! calls the library's integrator or closed forms.

#![allow(dead_code)]

use geophase::linalg::{ComplexMatrix, C64};

/// Classical RK4 on dU/dt = −iH(t)U from U(t0) = I.
pub fn rk4_propagator<F>(h: F, dim: usize, t0: f64, t1: f64, steps: usize) -> ComplexMatrix
where
    F: Fn(f64) -> ComplexMatrix,
{
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |t: f64, u: &ComplexMatrix| (h(t) * *u).scale(minus_i);
    let dt = (t1 - t0) / steps as f64;
    let mut u = ComplexMatrix::identity(dim).unwrap();
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        let k1 = rhs(t, &u);
        let k2 = rhs(t + 0.5 * dt, &(u + k1.scale_re(0.5 * dt)));
        let k3 = rhs(t + 0.5 * dt, &(u + k2.scale_re(0.5 * dt)));
        let k4 = rhs(t + dt, &(u + k3.scale_re(dt)));
        u = u + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(dt / 6.0);
    }
    u
}

/// RK4 at `steps` and `2·steps`, Richardson-combined (error O(dt⁶) for smooth H).
pub fn rk4_reference<F>(h: F, dim: usize, t0: f64, t1: f64, steps: usize) -> ComplexMatrix
where
    F: Fn(f64) -> ComplexMatrix,
{
    let coarse = rk4_propagator(&h, dim, t0, t1, steps);
    let fine = rk4_propagator(&h, dim, t0, t1, 2 * steps);
    fine + (fine - coarse).scale_re(1.0 / 15.0)
}

/// Single spin-1/2 drive matrix with the counter-rotating transverse field.
pub fn spin_drive(omega_par: f64, omega_perp: f64, omega_r: f64, t: f64) -> ComplexMatrix {
    let (s, c) = (omega_r * t).sin_cos();
    let half = 0.5;
    ComplexMatrix::m2(
        C64::new(half * omega_par, 0.0),
        C64::new(half * omega_perp * c, half * omega_perp * s),
        C64::new(half * omega_perp * c, -half * omega_perp * s),
        C64::new(-half * omega_par, 0.0),
    )
}

/// max_ij |a_ij − b_ij|.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Phase of ⟨ψ0|U|ψ0⟩ for a 2-vector given by its components.
pub fn overlap_phase(u: &ComplexMatrix, psi: [C64; 2]) -> C64 {
    let v0 = u.get(0, 0) * psi[0] + u.get(0, 1) * psi[1];
    let v1 = u.get(1, 0) * psi[0] + u.get(1, 1) * psi[1];
    psi[0].conj() * v0 + psi[1].conj() * v1
}
