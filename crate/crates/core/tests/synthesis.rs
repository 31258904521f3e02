// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use geophase::exec::Execution;
use geophase::gate::{geometric_gate, TwoSpinParams};
use geophase::synthesis::{
    cone_angle, invert_theta_star, solve_theta, sweep, synthesize, Axis, SweepGrid, SynthesisTarget,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ω0 = ω1 cotθ* − ω_R, the closed-form inverse of θ* = atan2(ω1, ω0 + ω_R).
fn closed_form_omega0(theta_star: f64, omega1: f64, omega_r: f64) -> f64 {
    omega1 / theta_star.tan() - omega_r
}

#[test]
fn synthesis_agrees_with_closed_form_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let omega1 = rng.gen_range(0.2..5.0);
        let omega_r = rng.gen_range(0.1..3.0);
        let g1 = rng.gen_range(-0.95..0.95) * 2.0 * PI;
        let g2 = rng.gen_range(-0.95..0.95) * 2.0 * PI;
        let s = synthesize(&SynthesisTarget::new(g1, g2, omega_r, omega1, true)).unwrap();
        for (w0, g) in [(s.params.omega01, g1), (s.params.omega02, g2)] {
            let ts = (-g / (2.0 * PI)).acos();
            let expect = closed_form_omega0(ts, omega1, omega_r);
            assert!((w0 - expect).abs() <= 1e-8 * expect.abs().max(1.0), "{w0} vs {expect}");
        }
    }
}

#[test]
fn forward_inverse_round_trip_recovers_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let omega1 = rng.gen_range(0.5..4.0);
        let omega_r = rng.gen_range(0.2..2.0);
        let p = TwoSpinParams::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0), 0.0, omega1, omega_r).unwrap();
        for doubled in [true, false] {
            let g = geometric_gate(&p, doubled).unwrap();
            let s = synthesize(&SynthesisTarget::new(g.gamma1, g.gamma2, omega_r, omega1, doubled)).unwrap();
            for (got, want) in [(s.params.omega01, p.omega01), (s.params.omega02, p.omega02)] {
                assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0), "{got} vs {want}");
            }
            assert!(s.residual <= 1e-9);
        }
    }
}

#[test]
fn cone_angle_is_increasing_for_slow_and_critical_rotation() {
    for r in [0.01, 0.1, 1.0] {
        let mesh: Vec<f64> = (1..1000).map(|k| PI * k as f64 / 1000.0).collect();
        for w in mesh.windows(2) {
            assert!(cone_angle(w[1], r) > cone_angle(w[0], r), "r={r} at {}", w[0]);
        }
    }
    // r = 10: increasing up to θ = arccos(−1/r) only
    let top = (-0.1f64).acos();
    let mesh: Vec<f64> = (1..1000).map(|k| top * k as f64 / 1000.0).collect();
    for w in mesh.windows(2) {
        assert!(cone_angle(w[1], 10.0) > cone_angle(w[0], 10.0));
    }
}

#[test]
fn solve_theta_inverts_cone_angle() {
    for r in [0.01_f64, 0.1, 0.7, 1.0, 4.0] {
        for k in 1..40 {
            let theta = if r > 1.0 { (-1.0 / r).acos() * k as f64 / 40.0 } else { PI * k as f64 / 40.0 };
            let back = solve_theta(cone_angle(theta, r), r).unwrap();
            assert!((back - theta).abs() < 1e-9, "r={r} theta={theta} back={back}");
        }
    }
}

#[test]
fn invert_theta_star_round_trips() {
    for k in 0..=20 {
        let gamma = -2.0 * PI + 4.0 * PI * k as f64 / 20.0;
        let ts = invert_theta_star(gamma, 0.5, 2).unwrap();
        assert!((-2.0 * PI * ts.cos() - gamma).abs() < 1e-12);
    }
}

#[test]
fn synthesis_is_bit_reproducible() {
    let t = SynthesisTarget::new(1.234, -4.5, 0.7, 1.9, true);
    assert_eq!(synthesize(&t).unwrap(), synthesize(&t).unwrap());
}

fn grid() -> SweepGrid {
    SweepGrid {
        omega01: Axis { min: 1.0, max: 4.0, n: 3 },
        omega02: Axis { min: -2.0, max: 2.0, n: 2 },
        omega1: Axis::fixed(0.9),
        omega_r: Axis { min: 0.5, max: 1.5, n: 2 },
        j: Axis { min: 0.0, max: 0.8, n: 2 },
        doubled: true,
    }
}

#[test]
fn sweep_single_point_matches_direct_gate() {
    let g = SweepGrid {
        omega01: Axis::fixed(3.0),
        omega02: Axis::fixed(5.0),
        omega1: Axis::fixed(1.0),
        omega_r: Axis::fixed(0.8),
        j: Axis::fixed(0.1),
        doubled: false,
    };
    let rows = sweep(&g, Execution::Sequential, None).unwrap();
    assert_eq!(rows.len(), 1);
    let v = rows[0].outcome.clone().unwrap();
    let direct = geometric_gate(&TwoSpinParams::new(3.0, 5.0, 0.1, 1.0, 0.8).unwrap(), false).unwrap();
    assert_eq!(v.gamma, [direct.gamma1, direct.gamma2]);
    assert_eq!(v.oracle_residual, None);
}

#[test]
fn sweep_order_is_lexicographic_and_execution_independent() {
    let seq = sweep(&grid(), Execution::Sequential, None).unwrap();
    let par = sweep(&grid(), Execution::Parallel, None).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.len(), 24);
    let points: Vec<[f64; 5]> = seq.iter().map(|r| r.point).collect();
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(points, sorted);
}

#[test]
fn sweep_gamma_columns_do_not_depend_on_coupling() {
    let rows = sweep(&grid(), Execution::Parallel, None).unwrap();
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].point[..4], pair[1].point[..4]);
        assert_ne!(pair[0].point[4], pair[1].point[4]);
        assert_eq!(pair[0].outcome.as_ref().unwrap().gamma, pair[1].outcome.as_ref().unwrap().gamma);
    }
}

#[test]
fn sweep_reports_invalid_points_in_place() {
    let mut g = grid();
    g.omega02 = Axis::fixed(1.0);
    let rows = sweep(&g, Execution::Sequential, None).unwrap();
    let bad: Vec<_> = rows.iter().filter(|r| r.outcome.is_err()).collect();
    assert_eq!(bad.len(), 4);
    assert!(bad.iter().all(|r| r.point[0] == 1.0));
}

#[test]
fn sweep_oracle_column() {
    let g = SweepGrid {
        omega01: Axis::fixed(10.0),
        omega02: Axis::fixed(14.0),
        omega1: Axis::fixed(3.0),
        omega_r: Axis::fixed(1.0),
        j: Axis::fixed(0.0),
        doubled: true,
    };
    let rows = sweep(&g, Execution::Sequential, Some(1000)).unwrap();
    assert!(rows[0].outcome.as_ref().unwrap().oracle_residual.unwrap() < 1e-6);
}
