// SPDX-License-Identifier: Apache-2.0

//! Inverse problem: longitudinal frequencies (ω01, ω02) that realize target
//! gate phases for a fixed shared drive (ω1, ω_R), and grid sweeps of the
//! forward map.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::gate::{echo_evolution, geometric_gate, TwoSpinParams};
use crate::linalg::global_phase_distance;

/// Bracket width at which [`solve_theta`] stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
/// Largest sweep accepted.
pub const MAX_SWEEP_POINTS: usize = 1_000_000;
const MAX_ITERATIONS: usize = 200;
const BOUNDARY_SLACK: f64 = 1e-12;

/// Cone angle of the cyclic axis, atan2(sinθ, cosθ + r) with r = ω_R/|B|.
pub fn cone_angle(theta: f64, r: f64) -> f64 {
    theta.sin().atan2(theta.cos() + r)
}

/// θ* = arccos(−γ / (2π m · cycles)).
pub fn invert_theta_star(gamma: f64, m: f64, cycles: u32) -> Result<f64> {
    if m.abs() != 0.5 || cycles == 0 {
        return Err(Error::contract(format!("need m = ±1/2 and cycles >= 1, got m = {m}, cycles = {cycles}")));
    }
    let scale = 2.0 * PI * m * f64::from(cycles);
    let c = -gamma / scale;
    if !(c.abs() <= 1.0 + BOUNDARY_SLACK) {
        let bound = scale.abs();
        return Err(Error::InfeasibleTarget { value: gamma, lo: -bound, hi: bound });
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Finds θ with cone_angle(θ, r) = `theta_star` by bisection.
///
/// For r ≤ 1 the map is increasing on [0, π]. For r > 1 it rises to
/// arcsin(1/r) at θ = arccos(−1/r) and falls afterwards; only the rising
/// branch is searched.
pub fn solve_theta(theta_star: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) || !theta_star.is_finite() {
        return Err(Error::contract(format!("solve_theta needs r > 0, got r = {r}, target = {theta_star}")));
    }
    let top = if r > 1.0 { (-1.0 / r).acos() } else { PI };
    let (f_lo, f_hi) = (cone_angle(0.0, r), cone_angle(top, r));
    if !(f_lo <= f_hi) {
        return Err(Error::Internal(format!("cone angle not increasing on [0, {top}] for r = {r}")));
    }
    if theta_star < f_lo - BOUNDARY_SLACK || theta_star > f_hi + BOUNDARY_SLACK {
        return Err(Error::InfeasibleTarget { value: theta_star, lo: f_lo, hi: f_hi });
    }
    let (mut lo, mut hi) = (0.0, top);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if cone_angle(mid, r) < theta_star {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisTarget {
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega_r: f64,
    pub omega1: f64,
    pub doubled: bool,
    /// Passed through to the returned parameters; the phases do not depend on it.
    pub j: f64,
}

impl SynthesisTarget {
    pub fn new(gamma1: f64, gamma2: f64, omega_r: f64, omega1: f64, doubled: bool) -> Self {
        SynthesisTarget { gamma1, gamma2, omega_r, omega1, doubled, j: 0.0 }
    }

    fn cycles(&self) -> u32 {
        if self.doubled {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub params: TwoSpinParams,
    pub theta_star: [f64; 2],
    /// max_a |γ_a(params) − γ_a target| by forward evaluation.
    pub residual: f64,
    /// max_a |θ*_a(θ_a) − θ*_a target| at the bisection output.
    pub bisection_residual: f64,
    pub iterations: usize,
}

struct SpinSolution {
    omega0: f64,
    mismatch: f64,
    iterations: usize,
}

/// Solves θ*(θ) = target with ω0 = ω1 cotθ and |B| = ω1 / sinθ substituted,
/// which makes the map strictly increasing on (0, π).
fn solve_spin(theta_star: f64, omega1: f64, omega_r: f64) -> Result<SpinSolution> {
    let map = |theta: f64| {
        let (s, c) = theta.sin_cos();
        s.atan2(c + omega_r * s / omega1)
    };
    let (mut lo, mut hi) = (0.0_f64, PI);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if map(mid) < theta_star {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let mismatch = (map(theta) - theta_star).abs();
    if !(mismatch <= BISECTION_TOLERANCE) || theta <= 0.0 || theta >= PI {
        return Err(Error::SynthesisFailure { iterations, last: theta });
    }
    let (s, c) = theta.sin_cos();
    Ok(SpinSolution { omega0: omega1 * c / s, mismatch, iterations })
}

pub fn synthesize(target: &SynthesisTarget) -> Result<SynthesisResult> {
    let t = target;
    if !(t.omega1 > 0.0 && t.omega1.is_finite()) || !(t.omega_r > 0.0 && t.omega_r.is_finite()) {
        return Err(Error::contract(format!(
            "synthesis needs omega1 > 0 and omega_R > 0, got {} and {}",
            t.omega1, t.omega_r
        )));
    }
    let bound = PI * f64::from(t.cycles());
    let mut theta_star = [0.0; 2];
    for (slot, gamma) in theta_star.iter_mut().zip([t.gamma1, t.gamma2]) {
        // |γ| = bound needs θ* ∈ {0, π}, i.e. an infinite static field.
        if !(gamma.abs() < bound) {
            return Err(Error::InfeasibleTarget { value: gamma, lo: -bound, hi: bound });
        }
        *slot = invert_theta_star(gamma, 0.5, t.cycles())?;
    }
    let s1 = solve_spin(theta_star[0], t.omega1, t.omega_r)?;
    let s2 = solve_spin(theta_star[1], t.omega1, t.omega_r)?;
    let params = TwoSpinParams::new(s1.omega0, s2.omega0, t.j, t.omega1, t.omega_r)?;
    let gate = geometric_gate(&params, t.doubled)?;
    let residual = (gate.gamma1 - t.gamma1).abs().max((gate.gamma2 - t.gamma2).abs());
    Ok(SynthesisResult {
        params,
        theta_star,
        residual,
        bisection_residual: s1.mismatch.max(s2.mismatch),
        iterations: s1.iterations.max(s2.iterations),
    })
}

/// Evenly spaced values from `min` to `max` inclusive; `n = 1` gives `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Axis { min: value, max: value, n: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|k| if k + 1 == self.n { self.max } else { self.min + k as f64 * step }).collect()
    }
}

/// Axes in lexicographic order: ω01 slowest, J fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub omega01: Axis,
    pub omega02: Axis,
    pub omega1: Axis,
    pub omega_r: Axis,
    pub j: Axis,
    pub doubled: bool,
}

impl SweepGrid {
    pub const AXIS_NAMES: [&'static str; 5] = ["omega01", "omega02", "omega1", "omegaR", "J"];

    fn axes(&self) -> [Axis; 5] {
        [self.omega01, self.omega02, self.omega1, self.omega_r, self.j]
    }

    pub fn point_count(&self) -> Result<usize> {
        let mut total: usize = 1;
        for (axis, name) in self.axes().iter().zip(Self::AXIS_NAMES) {
            if axis.n == 0 {
                return Err(Error::contract(format!("sweep axis {name} is empty")));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min <= axis.max) {
                return Err(Error::contract(format!("sweep axis {name} needs finite min <= max")));
            }
            total = total.saturating_mul(axis.n);
        }
        if total > MAX_SWEEP_POINTS {
            return Err(Error::contract(format!("sweep of {total} points exceeds the limit of {MAX_SWEEP_POINTS}")));
        }
        Ok(total)
    }

    pub fn points(&self) -> Result<Vec<[f64; 5]>> {
        let count = self.point_count()?;
        let values = self.axes().map(|a| a.values());
        let mut out = Vec::with_capacity(count);
        for &a in &values[0] {
            for &b in &values[1] {
                for &c in &values[2] {
                    for &d in &values[3] {
                        for &e in &values[4] {
                            out.push([a, b, c, d, e]);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepValues {
    pub theta_star: [f64; 2],
    pub gamma: [f64; 2],
    /// Global-phase distance between the simulated echo and the gate.
    pub oracle_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// ω01, ω02, ω1, ω_R, J.
    pub point: [f64; 5],
    pub outcome: std::result::Result<SweepValues, String>,
}

/// Oracle settings for sweeps; `None` skips the echo simulation.
pub type OracleSteps = Option<usize>;

pub fn evaluate_point(point: [f64; 5], doubled: bool, oracle: OracleSteps) -> Result<SweepValues> {
    let [w01, w02, w1, wr, j] = point;
    let p = TwoSpinParams::new(w01, w02, j, w1, wr)?;
    let g = geometric_gate(&p, doubled)?;
    let oracle_residual = match oracle {
        Some(steps) => {
            let doubled_gate = geometric_gate(&p, true)?;
            Some(global_phase_distance(&echo_evolution(&p, steps)?, &doubled_gate.matrix)?)
        }
        None => None,
    };
    Ok(SweepValues { theta_star: g.theta_star, gamma: [g.gamma1, g.gamma2], oracle_residual })
}

/// One row per grid point in lexicographic axis order, independent of
/// `execution`. Points with invalid parameters carry the error text.
pub fn sweep(grid: &SweepGrid, execution: Execution, oracle: OracleSteps) -> Result<Vec<SweepRow>> {
    let points = grid.points()?;
    Ok(map_ordered(&points, execution, |&point| SweepRow {
        point,
        outcome: evaluate_point(point, grid.doubled, oracle).map_err(|e| e.to_string()),
    }))
}
