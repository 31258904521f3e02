// SPDX-License-Identifier: Apache-2.0

//! Closed-form results checked against the numerical integrator on fixed
//! parameter grids. Every check reports its worst residual.

use std::f64::consts::PI;

use crate::error::Result;
use crate::exec::{map_ordered, Execution};
use crate::gate::{diagonality_defect, echo_evolution, geometric_gate, swap_gate, TwoSpinParams};
use crate::linalg::{frobenius_distance, global_phase_distance, wrap_angle, StateVector};
use crate::oracle::{cyclic_phases, integrate_final, propagate_converged, propagate_interval, DEFAULT_TOLERANCE};
use crate::spin::{analytic_propagator, cycle_phases, cyclic_state, derive_angles, DriveParams, SpinProjection};
use crate::synthesis::{synthesize, SynthesisTarget};

/// Tilt angles 0.1, 0.4222…, 3.0.
pub fn grid_thetas() -> Vec<f64> {
    (0..10).map(|k| 0.1 + 2.9 * k as f64 / 9.0).collect()
}

/// Rotation ratios ω_R/|B|.
pub const GRID_RATIOS: [f64; 5] = [0.01, 0.1, 0.5, 1.0, 2.0];
/// Frequency scales ω_R in rad/s.
pub const GRID_SCALES: [f64; 2] = [1.0, 3.7];

/// The 10×5×2 single-spin grid, θ slowest.
pub fn spin_grid() -> Vec<DriveParams> {
    let mut out = Vec::new();
    for theta in grid_thetas() {
        for r in GRID_RATIOS {
            for omega_r in GRID_SCALES {
                out.push(DriveParams::from_tilt(theta, r, omega_r).expect("grid drives are valid"));
            }
        }
    }
    out
}

/// Exactly resonant drives, cosθ = −r (Δω = 0).
pub fn resonant_points() -> Vec<DriveParams> {
    [0.01, 0.1, 0.5, 1.0]
        .iter()
        .map(|&r: &f64| DriveParams::from_tilt((-r).acos(), r, 1.0).expect("valid"))
        .collect()
}

/// (ω01, ω02, ω1, ω_R) with ω_R/|B_a| ≤ 0.1 for both spins.
pub const SLOW_ECHO_REGIMES: [[f64; 4]; 4] =
    [[10.0, 14.0, 3.0, 1.0], [30.0, 41.0, 5.0, 1.0], [12.0, -15.0, 4.0, 0.8], [25.0, 18.0, 10.0, 2.0]];
/// Regimes outside the slow-rotation window.
pub const FAST_ECHO_REGIMES: [[f64; 4]; 2] = [[2.0, 3.5, 1.5, 1.0], [-1.0, 4.0, 2.0, 1.5]];
/// Coupling values for the J sweep, in units of ω01.
pub const J_FRACTIONS: [f64; 3] = [0.0, 0.1, 0.3];
/// Adiabatic sequence of rotation ratios at θ = 1.
pub const ADIABATIC_RATIOS: [f64; 5] = [1.0, 0.5, 0.1, 0.01, 0.001];

/// Twenty synthesis targets from a fixed low-discrepancy sequence.
pub fn synthesis_targets() -> Vec<SynthesisTarget> {
    const G: f64 = 0.618_033_988_749_894_8;
    const H: f64 = 0.754_877_666_246_692_7;
    (1..=20)
        .map(|k| {
            let u = (k as f64 * G).fract();
            let v = (k as f64 * H).fract();
            let w = (k as f64 * G * H).fract();
            let doubled = k % 4 != 0;
            let bound = if doubled { 2.0 * PI } else { PI };
            SynthesisTarget {
                gamma1: 0.95 * bound * (2.0 * u - 1.0),
                gamma2: 0.95 * bound * (2.0 * v - 1.0),
                omega_r: 0.5 + 2.0 * w,
                omega1: 0.5 + 3.0 * (1.0 - w),
                doubled,
                j: 0.0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// `max_residual <= tolerance` (≥ for [`Check::at_least`] checks).
    pub pass: bool,
}

impl Check {
    fn at_most(name: &'static str, residuals: &[f64], tolerance: f64) -> Self {
        let finite = residuals.iter().all(|r| r.is_finite());
        let max = if finite { residuals.iter().copied().fold(0.0, f64::max) } else { f64::NAN };
        Check { name, points: residuals.len(), max_residual: max, tolerance, pass: max <= tolerance }
    }

    /// Passes when every value is at least `bound`; reports the smallest.
    fn at_least(name: &'static str, values: &[f64], bound: f64) -> Self {
        let finite = values.iter().all(|r| r.is_finite());
        let min = if finite { values.iter().copied().fold(f64::INFINITY, f64::min) } else { f64::NAN };
        Check { name, points: values.len(), max_residual: min, tolerance: bound, pass: min >= bound }
    }

    fn failed(name: &'static str, tolerance: f64) -> Self {
        Check { name, points: 0, max_residual: f64::NAN, tolerance, pass: false }
    }
}

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn propagator_residual(p: &DriveParams, initial_steps: usize) -> Result<f64> {
    let t = p.period();
    let traj = propagate_converged(&p.schedule()?, 0.0, t, initial_steps, 1 << 22, DEFAULT_TOLERANCE)?;
    frobenius_distance(analytic_propagator(p, t)?.propagator.matrix(), traj.final_propagator().matrix())
}

/// (|dynamic − φ_D|, |wrap(geometric − AA)|) for each m, plus the solid-angle residual.
fn phase_residuals(p: &DriveParams, initial_steps: usize) -> Result<[f64; 3]> {
    let schedule = p.schedule()?;
    let t = p.period();
    let traj = propagate_converged(&schedule, 0.0, t, initial_steps, 1 << 22, DEFAULT_TOLERANCE)?;
    let mut dyn_res: f64 = 0.0;
    let mut geo_res: f64 = 0.0;
    let mut geometric = [0.0; 2];
    for (slot, m) in SpinProjection::BOTH.into_iter().enumerate() {
        let numeric = cyclic_phases(&traj.clone().with_initial_state(cyclic_state(p, m)?)?, &schedule)?;
        let exact = cycle_phases(p, m)?;
        dyn_res = dyn_res.max((numeric.dynamic - exact.dynamic).abs());
        geo_res = geo_res.max(wrap_angle(numeric.geometric - exact.aharonov_anandan()).abs());
        // undo the 2πm spinor offset to recover γ_m itself
        geometric[slot] = numeric.geometric - 2.0 * PI * m.m();
    }
    let theta_star = derive_angles(p)?.theta_star;
    let solid = wrap_angle(geometric[0] - geometric[1] + 2.0 * PI * theta_star.cos()).abs();
    Ok([dyn_res, geo_res, solid])
}

fn echo_pair(w: [f64; 4], j: f64) -> Result<TwoSpinParams> {
    TwoSpinParams::new(w[0], w[1], j, w[2], w[3])
}

fn oracle_health() -> Result<[f64; 3]> {
    let p = DriveParams::new(1.3, 0.8, 2.0)?;
    let h = p.schedule()?;
    let t = p.period();
    let u1 = integrate_final(&h, 0.0, t, 64)?;
    let u2 = integrate_final(&h, 0.0, t, 128)?;
    let u4 = integrate_final(&h, 0.0, t, 256)?;
    let order = frobenius_distance(&u1, &u2)? / frobenius_distance(&u2, &u4)?;
    let traj = propagate_interval(&h, 0.0, t, 2000, DEFAULT_TOLERANCE)?;
    let drift = traj.states.iter().map(|s: &StateVector| (s.norm() - 1.0).abs()).fold(0.0, f64::max);
    let first = propagate_interval(&h, 0.0, 0.5 * t, 1000, DEFAULT_TOLERANCE)?;
    let second = propagate_interval(&h, 0.5 * t, t, 1000, DEFAULT_TOLERANCE)?;
    let composed = second.final_propagator().compose(first.final_propagator())?;
    let composition = frobenius_distance(composed.matrix(), traj.final_propagator().matrix())?;
    Ok([order, drift, composition])
}

/// Runs every check; `steps` seeds the integrator step count.
pub fn run_checks(steps: usize, execution: Execution) -> Vec<Check> {
    let grid = spin_grid();
    let mut checks = Vec::new();

    let mut points = grid.clone();
    points.extend(resonant_points());
    let propagator = map_ordered(&points, execution, |p| or_nan(propagator_residual(p, steps)));
    checks.push(Check::at_most("propagator_closed_form", &propagator, 1e-8));

    let phases = map_ordered(&grid, execution, |p| phase_residuals(p, steps).unwrap_or([f64::NAN; 3]));
    let column = |k: usize| phases.iter().map(|r| r[k]).collect::<Vec<_>>();
    checks.push(Check::at_most("dynamic_phase", &column(0), 1e-6));
    checks.push(Check::at_most("geometric_phase", &column(1), 1e-6));
    checks.push(Check::at_most("solid_angle", &column(2), 1e-6));

    let gaps: Vec<f64> = ADIABATIC_RATIOS
        .iter()
        .map(|&r| or_nan(DriveParams::from_tilt(1.0, r, 1.0).and_then(|p| derive_angles(&p)).map(|a| (a.theta_star - a.theta).abs())))
        .collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let mut adiabatic = Check::at_most("adiabatic_limit", &gaps[gaps.len() - 1..], 1e-2);
    adiabatic.points = gaps.len();
    adiabatic.pass &= monotone;
    checks.push(adiabatic);

    let slow: Vec<f64> = map_ordered(&SLOW_ECHO_REGIMES, execution, |w| {
        or_nan(echo_pair(*w, 0.0).and_then(|p| {
            let u = echo_evolution(&p, steps.max(1000))?;
            global_phase_distance(&u, &geometric_gate(&p, true)?.matrix)
        }))
    });
    checks.push(Check::at_most("echo_matches_gate", &slow, 1e-4));
    let all: Vec<[f64; 4]> = SLOW_ECHO_REGIMES.iter().chain(&FAST_ECHO_REGIMES).copied().collect();
    let diag: Vec<f64> = map_ordered(&all, execution, |w| {
        or_nan(echo_pair(*w, 0.0).and_then(|p| Ok(diagonality_defect(&echo_evolution(&p, steps.max(1000))?))))
    });
    checks.push(Check::at_most("echo_diagonal", &diag, 1e-6));

    let base = SLOW_ECHO_REGIMES[0];
    let runs: Vec<Result<_>> = map_ordered(&J_FRACTIONS, execution, |f| {
        echo_pair(base, f * base[0]).and_then(|p| echo_evolution(&p, steps.max(1000)))
    });
    match runs.into_iter().collect::<Result<Vec<_>>>() {
        Ok(us) => {
            let mut d = Vec::new();
            for a in 0..us.len() {
                for b in a + 1..us.len() {
                    d.push(or_nan(global_phase_distance(&us[a], &us[b])));
                }
            }
            checks.push(Check::at_most("j_independence", &d, 1e-6));
        }
        Err(_) => checks.push(Check::failed("j_independence", 1e-6)),
    }

    let swap: Vec<f64> = all
        .iter()
        .map(|w| {
            or_nan(echo_pair(*w, 0.3).and_then(|p| {
                let g = geometric_gate(&p, true)?;
                let s = geometric_gate(&p.swapped(), true)?;
                let w = swap_gate();
                frobenius_distance(w.compose(&g.matrix)?.compose(&w)?.matrix(), s.matrix.matrix())
            }))
        })
        .collect();
    checks.push(Check::at_most("swap_symmetry", &swap, 1e-12));

    let targets = synthesis_targets();
    let synth: Vec<[f64; 2]> = targets
        .iter()
        .map(|t| synthesize(t).map(|r| [r.residual, r.bisection_residual]).unwrap_or([f64::NAN; 2]))
        .collect();
    checks.push(Check::at_most("synthesis_round_trip", &synth.iter().map(|r| r[0]).collect::<Vec<_>>(), 1e-8));
    checks.push(Check::at_most("synthesis_bisection", &synth.iter().map(|r| r[1]).collect::<Vec<_>>(), 1e-12));

    let [order, drift, composition] = oracle_health().unwrap_or([f64::NAN; 3]);
    checks.push(Check::at_least("oracle_order_factor", &[order], 12.0));
    checks.push(Check::at_most("oracle_norm_drift", &[drift], 1e-8));
    checks.push(Check::at_most("oracle_composition", &[composition], 1e-8));
    checks
}
