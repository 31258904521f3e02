// SPDX-License-Identifier: Apache-2.0

//! Numerical Schrödinger propagation used as an independent check on every
//! closed-form result.
//!
//! The propagator obeys i dU/dt = H(t) U with U(t0) = I. Each step is a
//! fourth-order Magnus step on two Gauss–Legendre nodes. A run is always
//! repeated with twice the steps: the difference of the two final propagators
//! is the convergence certificate, and the stored grid values are the
//! Richardson combination of both runs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, wrap_angle, ComplexMatrix, StateVector, UnitaryOperator, C64};

/// Default bound on ‖U_2N − U_N‖ for a certified propagation.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// |⟨ψ(0)|ψ(T)⟩| must reach this for a state to count as cyclic.
pub const CYCLICITY_THRESHOLD: f64 = 1.0 - 1e-6;
pub const MIN_STEPS: usize = 100;

type Evaluator = dyn Fn(f64) -> ComplexMatrix + Send + Sync;

/// A time-dependent Hermitian generator t ↦ H(t) in rad/s.
#[derive(Clone)]
pub struct HamiltonianSchedule {
    dim: usize,
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for HamiltonianSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSchedule").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl HamiltonianSchedule {
    /// Wraps `evaluator`, checking dimension and Hermiticity at a few sample times.
    pub fn new<F>(dim: usize, evaluator: F) -> Result<Self>
    where
        F: Fn(f64) -> ComplexMatrix + Send + Sync + 'static,
    {
        if dim != 2 && dim != 4 {
            return Err(Error::contract(format!("schedule dimension must be 2 or 4, got {dim}")));
        }
        for t in [0.0, 0.3, 1.0, 2.7] {
            let h = evaluator(t);
            if h.dim() != dim {
                return Err(Error::contract(format!("evaluator returned a {0}x{0} matrix, expected {dim}", h.dim())));
            }
            let defect = h.hermiticity_defect();
            if defect > 1e-12 * (1.0 + h.frobenius_norm()) {
                return Err(Error::contract(format!("H({t}) is not Hermitian (defect {defect:e})")));
            }
        }
        Ok(Self { dim, evaluator: Arc::new(evaluator) })
    }

    pub fn constant(h: ComplexMatrix) -> Result<Self> {
        Self::new(h.dim(), move |_| h)
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::constant(ComplexMatrix::zeros(dim)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, t: f64) -> ComplexMatrix {
        (self.evaluator)(t)
    }
}

/// Propagators (and the states they generate from one initial state) on a uniform grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub propagators: Vec<UnitaryOperator>,
    /// ‖U_2N − U_N‖ at the final time.
    pub certificate: f64,
}

impl Trajectory {
    pub fn final_propagator(&self) -> &UnitaryOperator {
        self.propagators.last().expect("trajectory is never empty")
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }

    /// Recomputes `states` for a different initial state.
    pub fn with_initial_state(mut self, psi0: StateVector) -> Result<Self> {
        let norm = psi0.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::contract(format!("initial state must be normalised, |psi| = {norm}")));
        }
        self.states = self
            .propagators
            .iter()
            .map(|u| u.matrix().apply(&psi0))
            .collect::<Result<_>>()?;
        Ok(self)
    }
}

/// One fourth-order Magnus step from `t` to `t + dt`.
fn magnus_step(h: &HamiltonianSchedule, t: f64, dt: f64) -> ComplexMatrix {
    let c = 3f64.sqrt() / 6.0;
    let minus_i = C64::new(0.0, -1.0);
    let a1 = h.at(t + (0.5 - c) * dt).scale(minus_i);
    let a2 = h.at(t + (0.5 + c) * dt).scale(minus_i);
    let comm = a2 * a1 - a1 * a2;
    let omega = (a1 + a2).scale_re(0.5 * dt) + comm.scale_re(3f64.sqrt() / 12.0 * dt * dt);
    omega.expm()
}

/// Runs the bare scheme, recording the propagator every `record_every` steps.
fn run_scheme(h: &HamiltonianSchedule, t0: f64, t1: f64, steps: usize, record_every: usize) -> Vec<ComplexMatrix> {
    let dt = (t1 - t0) / steps as f64;
    let mut u = ComplexMatrix::identity(h.dim()).expect("schedule dimension is valid");
    let mut out = Vec::with_capacity(steps / record_every + 1);
    out.push(u);
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        u = magnus_step(h, t, dt) * u;
        if (k + 1) % record_every == 0 {
            out.push(u);
        }
    }
    out
}

/// Final propagator of the bare fourth-order scheme with `steps` uniform steps.
///
/// No refinement and no certificate; used for convergence-order studies.
pub fn integrate_final(h: &HamiltonianSchedule, t0: f64, t1: f64, steps: usize) -> Result<ComplexMatrix> {
    if steps == 0 || !(t1 > t0) {
        return Err(Error::contract("integrate_final needs steps > 0 and t1 > t0"));
    }
    Ok(*run_scheme(h, t0, t1, steps, steps).last().expect("at least one record"))
}

/// Propagates from t = 0 to `t_final` on a grid of `steps` intervals.
pub fn propagate(h: &HamiltonianSchedule, t_final: f64, steps: usize) -> Result<Trajectory> {
    propagate_interval(h, 0.0, t_final, steps, DEFAULT_TOLERANCE)
}

/// Propagates from `t0` to `t1`; U(t0) = I.
pub fn propagate_interval(
    h: &HamiltonianSchedule,
    t0: f64,
    t1: f64,
    steps: usize,
    tolerance: f64,
) -> Result<Trajectory> {
    if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::contract(format!("propagation interval [{t0}, {t1}] is empty or not finite")));
    }
    if steps < MIN_STEPS {
        return Err(Error::contract(format!("at least {MIN_STEPS} steps required, got {steps}")));
    }
    let coarse = run_scheme(h, t0, t1, steps, 1);
    let fine = run_scheme(h, t0, t1, 2 * steps, 2);
    let certificate = frobenius_distance(coarse.last().unwrap(), fine.last().unwrap())?;
    if !(certificate <= tolerance) {
        return Err(Error::IntegratorAccuracy { achieved: certificate, tolerance });
    }
    let dt = (t1 - t0) / steps as f64;
    let times = (0..=steps).map(|k| t0 + k as f64 * dt).collect();
    let propagators = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            let refined = *f + (*f - *c).scale_re(1.0 / 15.0);
            UnitaryOperator::with_tolerance(refined, 1e-8)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi0 = StateVector::basis(h.dim(), 0)?;
    let states = propagators.iter().map(|u| u.matrix().apply(&psi0)).collect::<Result<_>>()?;
    Ok(Trajectory { times, states, propagators, certificate })
}

/// Doubles the step count from `initial_steps` until the certificate passes.
pub fn propagate_converged(
    h: &HamiltonianSchedule,
    t0: f64,
    t1: f64,
    initial_steps: usize,
    max_steps: usize,
    tolerance: f64,
) -> Result<Trajectory> {
    let mut steps = initial_steps.max(MIN_STEPS);
    loop {
        match propagate_interval(h, t0, t1, steps, tolerance) {
            Err(Error::IntegratorAccuracy { achieved, .. }) if 2 * steps > max_steps => {
                return Err(Error::IntegratorAccuracy { achieved, tolerance });
            }
            Err(Error::IntegratorAccuracy { .. }) => steps *= 2,
            other => return other,
        }
    }
}

/// ∫⟨ψ(t)|H(t)|ψ(t)⟩dt over the trajectory grid (trapezoid rule).
///
/// The state acquires exp(−i·dynamic) from this part of the evolution.
pub fn dynamic_phase_numeric(traj: &Trajectory, h: &HamiltonianSchedule) -> Result<f64> {
    let energies = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, psi)| Ok(psi.expectation(&h.at(t))?.re))
        .collect::<Result<Vec<f64>>>()?;
    let integral = traj
        .times
        .windows(2)
        .zip(energies.windows(2))
        .map(|(t, e)| 0.5 * (t[1] - t[0]) * (e[0] + e[1]))
        .sum();
    Ok(integral)
}

/// Phases of a cyclic evolution, all in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CyclicPhases {
    /// arg⟨ψ(0)|ψ(T)⟩.
    pub total: f64,
    pub dynamic: f64,
    /// total + dynamic, wrapped into (−π, π].
    pub geometric: f64,
    pub overlap: f64,
}

/// Splits the cyclic phase of the trajectory's state into dynamic and
/// (Aharonov–Anandan) geometric parts.
pub fn cyclic_phases(traj: &Trajectory, h: &HamiltonianSchedule) -> Result<CyclicPhases> {
    let overlap = traj.initial_state().inner(traj.final_state());
    if overlap.norm() < CYCLICITY_THRESHOLD {
        return Err(Error::NotCyclic { overlap: overlap.norm() });
    }
    let total = overlap.arg();
    let dynamic = dynamic_phase_numeric(traj, h)?;
    Ok(CyclicPhases { total, dynamic, geometric: wrap_angle(total + dynamic), overlap: overlap.norm() })
}

pub fn geometric_phase_numeric(traj: &Trajectory, h: &HamiltonianSchedule) -> Result<f64> {
    Ok(cyclic_phases(traj, h)?.geometric)
}

/// Lower-triangular Cholesky attempt; succeeds iff the Hermitian input is positive definite.
fn is_positive_definite(m: &ComplexMatrix) -> bool {
    let n = m.dim();
    let mut l = [[C64::new(0.0, 0.0); 4]; 4];
    for j in 0..n {
        let mut d = m.get(j, j).re;
        d -= l[j][..j].iter().map(|x| x.norm_sqr()).sum::<f64>();
        if !(d > 0.0) {
            return false;
        }
        let djj = d.sqrt();
        l[j][j] = C64::new(djj, 0.0);
        for i in j + 1..n {
            let s = m.get(i, j) - l[i][..j].iter().zip(&l[j][..j]).map(|(a, b)| a * b.conj()).sum::<C64>();
            l[i][j] = s / djj;
        }
    }
    true
}

/// ρ(t) = U(t) ρ(0) U†(t) with U from a certified propagation.
pub fn density_evolution(rho0: &ComplexMatrix, h: &HamiltonianSchedule, t_final: f64) -> Result<ComplexMatrix> {
    if rho0.dim() != h.dim() {
        return Err(Error::contract("density matrix and Hamiltonian dimensions differ"));
    }
    if rho0.hermiticity_defect() > 1e-10 {
        return Err(Error::contract("density matrix is not Hermitian"));
    }
    let tr = rho0.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::contract(format!("density matrix trace is {tr}, expected 1")));
    }
    let shifted = *rho0 + ComplexMatrix::identity(rho0.dim())?.scale_re(1e-10);
    if !is_positive_definite(&shifted) {
        return Err(Error::contract("density matrix is not positive semidefinite"));
    }
    if t_final == 0.0 {
        return Ok(*rho0);
    }
    let traj = propagate_converged(h, 0.0, t_final, 256, 1 << 22, DEFAULT_TOLERANCE)?;
    let u = traj.final_propagator().matrix();
    Ok(u * rho0 * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use crate::linalg::{spin_x, spin_y, spin_z, su2_exp, ONE, ZERO};

    fn drive(omega: f64) -> HamiltonianSchedule {
        HamiltonianSchedule::new(2, move |t| {
            spin_z().scale_re(1.3) + spin_x().scale_re(0.8 * (omega * t).cos()) + spin_y().scale_re(0.8 * (omega * t).sin())
        })
        .unwrap()
    }

    #[test]
    fn constant_hamiltonian_matches_closed_form() {
        let h = spin_x().scale_re(0.6) + spin_z().scale_re(0.8);
        let sched = HamiltonianSchedule::constant(h.scale_re(2.0)).unwrap();
        let traj = propagate(&sched, 3.0, 400).unwrap();
        let exact = su2_exp([0.6, 0.0, 0.8], 2.0 * 3.0).unwrap();
        assert!(frobenius_distance(traj.final_propagator().matrix(), exact.matrix()).unwrap() < 1e-9);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let sched = HamiltonianSchedule::zero(4).unwrap();
        let traj = propagate(&sched, 1.0, 100).unwrap();
        let id = ComplexMatrix::identity(4).unwrap();
        for u in &traj.propagators {
            assert!(frobenius_distance(u.matrix(), &id).unwrap() < 1e-15);
        }
        assert_eq!(dynamic_phase_numeric(&traj, &sched).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let sched = HamiltonianSchedule::zero(2).unwrap();
        assert!(propagate(&sched, 1.0, 99).is_err());
        assert!(propagate(&sched, 0.0, 200).is_err());
        let non_hermitian = ComplexMatrix::m2(ZERO, ONE, ZERO, ZERO);
        assert!(HamiltonianSchedule::constant(non_hermitian).is_err());
    }

    #[test]
    fn certificate_failure_reports_achieved_defect() {
        let sched = drive(400.0);
        match propagate(&sched, 10.0, 100) {
            Err(Error::IntegratorAccuracy { achieved, tolerance }) => {
                assert!(achieved > tolerance);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn eigenstate_dynamic_phase_is_energy_times_time() {
        let sched = HamiltonianSchedule::constant(spin_z().scale_re(2.0)).unwrap();
        let traj = propagate(&sched, 1.5, 200).unwrap();
        // |up> has energy +1
        assert!((dynamic_phase_numeric(&traj, &sched).unwrap() - 1.5).abs() < 1e-12);
        let phases = cyclic_phases(&traj, &sched).unwrap();
        assert!(phases.geometric.abs() < 1e-10);
    }

    #[test]
    fn non_cyclic_state_is_rejected() {
        let sched = HamiltonianSchedule::constant(spin_x()).unwrap();
        let traj = propagate(&sched, 1.0, 200).unwrap();
        assert!(matches!(geometric_phase_numeric(&traj, &sched), Err(Error::NotCyclic { .. })));
    }

    #[test]
    fn composition_over_half_intervals() {
        let sched = drive(2.0);
        let t = PI;
        let full = propagate_interval(&sched, 0.0, t, 400, 1e-8).unwrap();
        let a = propagate_interval(&sched, 0.0, t / 2.0, 200, 1e-8).unwrap();
        let b = propagate_interval(&sched, t / 2.0, t, 200, 1e-8).unwrap();
        let composed = b.final_propagator().matrix() * a.final_propagator().matrix();
        assert!(frobenius_distance(full.final_propagator().matrix(), &composed).unwrap() < 1e-8);
    }

    #[test]
    fn states_stay_normalised() {
        let sched = drive(1.0);
        let traj = propagate(&sched, 2.0 * PI, 400).unwrap();
        for s in &traj.states {
            assert!((s.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn density_evolution_contracts() {
        let sched = drive(1.5);
        let mixed = ComplexMatrix::identity(2).unwrap().scale_re(0.5);
        let out = density_evolution(&mixed, &sched, 2.0).unwrap();
        assert!(frobenius_distance(&out, &mixed).unwrap() < 1e-8);

        let psi = StateVector::new(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let rho = psi.projector();
        let out = density_evolution(&rho, &sched, 2.0).unwrap();
        let purity = (out * out).trace().re;
        assert!((purity - 1.0).abs() < 1e-8);
        assert!((out.trace().re - 1.0).abs() < 1e-8);
        assert!(out.hermiticity_defect() < 1e-8);

        let not_psd = ComplexMatrix::m2(C64::new(1.5, 0.0), ZERO, ZERO, C64::new(-0.5, 0.0));
        assert!(density_evolution(&not_psd, &sched, 1.0).is_err());
        let bad_trace = ComplexMatrix::identity(2).unwrap();
        assert!(density_evolution(&bad_trace, &sched, 1.0).is_err());
    }
}
