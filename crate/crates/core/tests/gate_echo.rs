// SPDX-License-Identifier: Apache-2.0

mod common;

use std::f64::consts::PI;

use common::{rk4_reference, spin_drive};
use geophase::gate::{
    diagonality_defect, echo_evolution, echo_evolution_lab, echo_schedule, geometric_gate, spin_hamiltonian,
    TwoSpinParams,
};
use geophase::linalg::{frobenius_distance, global_phase_distance, ComplexMatrix, UnitaryOperator, C64};
use geophase::synthesis::{synthesize, SynthesisTarget};
use geophase::Error;

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            out.set(r, c, a.get(r / 2, c / 2) * b.get(r % 2, c % 2));
        }
    }
    out
}

fn ry(b: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * b).sin_cos();
    ComplexMatrix::m2(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

fn pair_hamiltonian(w01: f64, w02: f64, w1: f64, wr: f64, j: f64, t: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2).unwrap();
    let zz = ComplexMatrix::from_diagonal(&[0.25, -0.25, -0.25, 0.25].map(|x| C64::new(j * x, 0.0))).unwrap();
    kron(&spin_drive(w01, w1, wr, t), &id) + kron(&id, &spin_drive(w02, w1, wr, t)) + zz
}

/// Lab-frame compound contour assembled from RK4 cycles.
fn reference_echo(p: &TwoSpinParams, steps: usize) -> ComplexMatrix {
    let s = echo_schedule(p).unwrap();
    let [a, b] = s.partners;
    let t = 2.0 * PI / p.omega_r;
    let c1 = rk4_reference(|x| pair_hamiltonian(p.omega01, p.omega02, p.omega1, p.omega_r, p.j, x), 4, 0.0, t, steps);
    let c2 = rk4_reference(|x| pair_hamiltonian(a.omega0, b.omega0, p.omega1, p.omega_r, p.j, x), 4, 0.0, t, steps);
    let forward = kron(&ry(a.beta), &ry(b.beta));
    let back = kron(&ry(-a.beta), &ry(-b.beta));
    back * c2 * forward * c1
}

fn single_spin_echo(w0: f64, partner_w0: f64, beta: f64, w1: f64, wr: f64, steps: usize) -> ComplexMatrix {
    let t = 2.0 * PI / wr;
    let c1 = rk4_reference(|x| spin_drive(w0, w1, wr, x), 2, 0.0, t, steps);
    let c2 = rk4_reference(|x| spin_drive(partner_w0, w1, wr, x), 2, 0.0, t, steps);
    ry(-beta) * c2 * ry(beta) * c1
}

#[test]
fn hamiltonian_matches_hand_built_operator() {
    let p = TwoSpinParams::new(2.0, -3.5, 0.7, 1.5, 1.3).unwrap();
    for t in [0.0, 0.4, 2.2] {
        let d = frobenius_distance(&spin_hamiltonian(&p, t), &pair_hamiltonian(2.0, -3.5, 1.5, 1.3, 0.7, t)).unwrap();
        assert!(d < 1e-14);
    }
}

#[test]
fn coupled_echo_matches_rk4() {
    let p = TwoSpinParams::new(2.0, 3.5, 0.7, 1.5, 1.0).unwrap();
    let lab = echo_evolution_lab(&p, 1000).unwrap();
    let d = frobenius_distance(lab.matrix(), &reference_echo(&p, 6000)).unwrap();
    assert!(d <= 1e-8, "{d:e}");
}

#[test]
fn uncoupled_echo_factorizes_into_single_spin_echoes() {
    let p = TwoSpinParams::new(4.0, -2.5, 0.0, 1.2, 0.9).unwrap();
    let s = echo_schedule(&p).unwrap();
    let [a, b] = s.partners;
    let e1 = single_spin_echo(p.omega01, a.omega0, a.beta, p.omega1, p.omega_r, 4000);
    let e2 = single_spin_echo(p.omega02, b.omega0, b.beta, p.omega1, p.omega_r, 4000);
    let lab = echo_evolution_lab(&p, 1000).unwrap();
    let d = frobenius_distance(lab.matrix(), &kron(&e1, &e2)).unwrap();
    assert!(d <= 1e-8, "{d:e}");
}

#[test]
fn undriven_echo_is_identity_up_to_phase() {
    let p = TwoSpinParams::new(3.0, 5.0, 0.0, 0.0, 1.0).unwrap();
    let u = echo_evolution(&p, 1000).unwrap();
    let d = global_phase_distance(&u, &UnitaryOperator::identity(4).unwrap()).unwrap();
    assert!(d <= 1e-8, "{d:e}");
}

#[test]
fn uncoupled_echo_is_the_diagonal_gate() {
    for (w01, w02, w1, wr) in [(10.0, 14.0, 3.0, 1.0), (2.0, 3.5, 1.5, 1.0), (-1.0, 4.0, 2.0, 1.5)] {
        let p = TwoSpinParams::new(w01, w02, 0.0, w1, wr).unwrap();
        let u = echo_evolution(&p, 1000).unwrap();
        assert!(diagonality_defect(&u) <= 1e-6);
        let g = geometric_gate(&p, true).unwrap();
        assert!(global_phase_distance(&u, &g.matrix).unwrap() <= 1e-6);
    }
}

#[test]
fn synthesized_controls_realize_the_quarter_phase_gate() {
    // γ2 = π/4 − 2π gives the same gate as π/4 but a distinct second spin.
    let target = SynthesisTarget::new(PI / 4.0, PI / 4.0 - 2.0 * PI, 1.0, 2.0, true);
    let s = synthesize(&target).unwrap();
    let u = echo_evolution(&s.params, 1000).unwrap();
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let expected = UnitaryOperator::new(ComplexMatrix::from_diagonal(&[i, one, one, -i]).unwrap()).unwrap();
    let d = global_phase_distance(&u, &expected).unwrap();
    assert!(d <= 1e-6, "{d:e}");
}

#[test]
fn warning_does_not_change_the_gate() {
    let p = TwoSpinParams::new(10.0, 14.0, 0.0, 3.0, 1.0).unwrap();
    let warned = geometric_gate(&p.with_decoherence(1.0).unwrap(), true).unwrap();
    let plain = geometric_gate(&p, true).unwrap();
    assert!(warned.warning.is_some());
    assert_eq!(warned.matrix, plain.matrix);
}

#[test]
fn echo_requires_enough_steps() {
    let p = TwoSpinParams::new(10.0, 14.0, 0.0, 3.0, 1.0).unwrap();
    assert!(matches!(echo_evolution(&p, 999), Err(Error::Contract(_))));
}
