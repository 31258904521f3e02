// SPDX-License-Identifier: Apache-2.0

//! Exact single-spin evolution under a static field plus a circularly
//! polarized wave, and the dynamic/geometric split of the cyclic phase.
//!
//! Frequencies are Rabi frequencies in rad/s. The working Hamiltonian is
//!
//! ```text
//! H(t) = ω∥ S_z + ω⊥ (cos ω_R t S_x − sin ω_R t S_y)
//! ```
//!
//! i.e. the transverse field turns opposite to the Larmor precession of
//! ω∥ S_z. In the frame co-rotating with the field the generator is static,
//! `(ω∥ + ω_R) S_z + ω⊥ S_x`, so the detuning is `Δω = ω∥ + ω_R` and the
//! evolution operator is `U(t) = exp(iω_R t S_z) · exp(−it(Δω S_z + ω⊥ S_x))`.
//! Its eigenaxis has polar angle θ* with
//! `tan θ* = sin θ / (cos θ + ω_R/Ω)`, Ω = |B| = √(ω∥² + ω⊥²).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    spin_lower, spin_raise, spin_x, spin_y, spin_z, su2_exp, wrap_angle, ComplexMatrix, StateVector, UnitaryOperator, C64,
};
use crate::oracle::HamiltonianSchedule;

/// Control field of one spin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    /// Rabi frequency of the static field along z (signed).
    pub omega_parallel: f64,
    /// Rabi frequency of the rotating transverse field.
    pub omega_perp: f64,
    /// Angular velocity of the transverse field.
    pub omega_r: f64,
}

impl DriveParams {
    pub fn new(omega_parallel: f64, omega_perp: f64, omega_r: f64) -> Result<Self> {
        if !(omega_parallel.is_finite() && omega_perp.is_finite() && omega_r.is_finite()) {
            return Err(Error::contract("drive frequencies must be finite"));
        }
        if omega_perp < 0.0 {
            return Err(Error::contract(format!("omega_perp must be >= 0, got {omega_perp}")));
        }
        if omega_r <= 0.0 {
            return Err(Error::contract(format!("omega_R must be > 0, got {omega_r}")));
        }
        if omega_parallel == 0.0 && omega_perp == 0.0 {
            return Err(Error::DegenerateDrive("both field components vanish".into()));
        }
        // normalise -0.0 so that atan2 stays in [0, pi]
        Ok(Self { omega_parallel, omega_perp: omega_perp + 0.0, omega_r })
    }

    /// Drive with field tilt `theta`, ratio `r = ω_R / |B|`, and rotation frequency `omega_r`.
    pub fn from_tilt(theta: f64, r: f64, omega_r: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(r > 0.0) {
            return Err(Error::contract(format!("need theta in [0, pi] and r > 0, got theta={theta}, r={r}")));
        }
        let field = omega_r / r;
        Self::new(field * theta.cos(), (field * theta.sin()).max(0.0), omega_r)
    }

    /// One drive period 2π/ω_R.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_r
    }

    /// |B| in frequency units.
    pub fn field_magnitude(&self) -> f64 {
        self.omega_parallel.hypot(self.omega_perp)
    }

    pub fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        let (s, c) = (self.omega_r * t).sin_cos();
        spin_z().scale_re(self.omega_parallel)
            + spin_x().scale_re(self.omega_perp * c)
            + spin_y().scale_re(-self.omega_perp * s)
    }

    pub fn schedule(&self) -> Result<HamiltonianSchedule> {
        let p = *self;
        HamiltonianSchedule::new(2, move |t| p.hamiltonian(t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedAngles {
    /// Rotating-frame detuning ω∥ + ω_R.
    pub delta_omega: f64,
    /// Generalized Rabi frequency √(Δω² + ω⊥²).
    pub omega_rabi: f64,
    /// |B| = √(ω∥² + ω⊥²).
    pub field_magnitude: f64,
    /// Field tilt, cos θ = ω∥ / |B|.
    pub theta: f64,
    /// Cone angle of the cyclic states.
    pub theta_star: f64,
}

impl DerivedAngles {
    /// ω_R / |B|.
    pub fn rotation_ratio(&self, p: &DriveParams) -> f64 {
        p.omega_r / self.field_magnitude
    }
}

pub fn derive_angles(p: &DriveParams) -> Result<DerivedAngles> {
    let field_magnitude = p.field_magnitude();
    let delta_omega = p.omega_parallel + p.omega_r;
    let omega_rabi = delta_omega.hypot(p.omega_perp);
    if field_magnitude == 0.0 || omega_rabi == 0.0 {
        return Err(Error::DegenerateDrive(format!(
            "cone angle undefined: |B| = {field_magnitude}, generalized Rabi frequency = {omega_rabi}"
        )));
    }
    let theta = p.omega_perp.atan2(p.omega_parallel);
    let (sin_t, cos_t) = theta.sin_cos();
    let theta_star = sin_t.max(0.0).atan2(cos_t + p.omega_r / field_magnitude);
    Ok(DerivedAngles { delta_omega, omega_rabi, field_magnitude, theta, theta_star })
}

/// The continuous branch of arctan((Δω/Ω) tan(Ωt/2)).
fn alpha_unwrapped(delta_over_rabi: f64, half_angle: f64) -> f64 {
    let n = (half_angle / PI).round();
    let y = half_angle - n * PI;
    let branch = if delta_over_rabi == 0.0 { 0.0 } else { delta_over_rabi.signum() };
    (delta_over_rabi * y.sin()).atan2(y.cos()) + n * PI * branch
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::contract(format!("time must be finite and >= 0, got {t}")))
    }
}

/// |ξ(t)| = ω⊥ |sin(Ωt/2)| / Ω with Ω the generalized Rabi frequency.
pub fn xi_magnitude(p: &DriveParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let a = derive_angles(p)?;
    Ok(p.omega_perp * (0.5 * a.omega_rabi * t).sin().abs() / a.omega_rabi)
}

/// arg ξ(t) = ω_R t − α(t) − π/2 (+π while sin(Ωt/2) < 0), wrapped into (−π, π].
pub fn xi_phase(p: &DriveParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let a = derive_angles(p)?;
    let half = 0.5 * a.omega_rabi * t;
    let alpha = alpha_unwrapped(a.delta_omega / a.omega_rabi, half);
    let sign_flip = if half.sin() < 0.0 { PI } else { 0.0 };
    Ok(wrap_angle(p.omega_r * t - alpha - 0.5 * PI + sign_flip))
}

/// The closed-form propagator and its factorisation
/// V = exp(ηS₊ − η*S₋) · exp(−iφS_z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorDecomposition {
    /// ξ = sin|η| · e^{i arg η}; this is the amplitude |ξ| = ω⊥ sin(Ωt/2)/Ω.
    pub xi: C64,
    /// Angle of the trailing S_z rotation, in (−2π, 2π].
    pub phi: f64,
    pub propagator: UnitaryOperator,
}

impl PropagatorDecomposition {
    /// The exponent η of the leading factor, |η| = arcsin|ξ|.
    pub fn generator(&self) -> C64 {
        let mag = self.xi.norm().min(1.0).asin();
        if self.xi.norm() == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            self.xi * (mag / self.xi.norm())
        }
    }

    /// exp(ηS₊ − η*S₋) · exp(−iφS_z), rebuilt from (ξ, φ).
    pub fn reassemble(&self) -> ComplexMatrix {
        let eta = self.generator();
        let lead = (spin_raise().scale(eta) - spin_lower().scale(eta.conj())).expm();
        let trail = spin_z().scale(C64::new(0.0, -self.phi)).expm();
        lead * trail
    }
}

/// exp(iω_R t S_z) · exp(−it(Δω S_z + ω⊥ S_x)).
fn closed_form_propagator(p: &DriveParams, a: &DerivedAngles, t: f64) -> Result<UnitaryOperator> {
    let frame = su2_exp([0.0, 0.0, 1.0], -p.omega_r * t)?;
    let axis = [p.omega_perp / a.omega_rabi, 0.0, a.delta_omega / a.omega_rabi];
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    let axis = axis.map(|x| x / norm);
    let body = su2_exp(axis, a.omega_rabi * t)?;
    frame.compose(&body)
}

pub fn analytic_propagator(p: &DriveParams, t: f64) -> Result<PropagatorDecomposition> {
    check_time(t)?;
    let a = derive_angles(p)?;
    let propagator = closed_form_propagator(p, &a, t)?;
    let m = propagator.matrix();
    let (diag, off) = (m.get(0, 0), m.get(0, 1));
    let tiny = 1e-300;
    let (xi, phi) = if off.norm() <= tiny {
        // pure S_z rotation: read φ off the diagonal
        (C64::new(0.0, 0.0), wrap_angle(-diag.arg()) * 2.0)
    } else if diag.norm() <= tiny {
        // complete population transfer: φ is not determined, take 0
        (off, 0.0)
    } else {
        let phi = -2.0 * diag.arg();
        (C64::from_polar(off.norm(), off.arg() + diag.arg()), phi)
    };
    Ok(PropagatorDecomposition { xi, phi, propagator })
}

/// Spin projection of a cyclic state on its cone axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinProjection {
    Up,
    Down,
}

impl SpinProjection {
    pub const BOTH: [SpinProjection; 2] = [SpinProjection::Up, SpinProjection::Down];

    pub fn m(self) -> f64 {
        match self {
            SpinProjection::Up => 0.5,
            SpinProjection::Down => -0.5,
        }
    }

    pub fn from_m(m: f64) -> Result<Self> {
        if m == 0.5 {
            Ok(SpinProjection::Up)
        } else if m == -0.5 {
            Ok(SpinProjection::Down)
        } else {
            Err(Error::contract(format!("m must be +1/2 or -1/2, got {m}")))
        }
    }
}

/// Dynamic and geometric phase of one cyclic state over a period 2π/ω_R.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSplit {
    pub m: f64,
    /// φ_D = 2πm (|B|/ω_R) cos(θ − θ*).
    pub dynamic: f64,
    /// γ = −2πm cos θ*.
    pub geometric: f64,
}

impl PhaseSplit {
    /// γ + 2πm wrapped into (−π, π]: the Aharonov–Anandan phase, which also
    /// counts the sign change of a spinor under a full turn of the frame.
    pub fn aharonov_anandan(&self) -> f64 {
        wrap_angle(self.geometric + 2.0 * PI * self.m)
    }

    /// Phase of ⟨m(0)|m(T)⟩: −φ_D + γ_AA, wrapped.
    pub fn total(&self) -> f64 {
        wrap_angle(-self.dynamic + self.aharonov_anandan())
    }
}

pub fn cycle_phases(p: &DriveParams, m: SpinProjection) -> Result<PhaseSplit> {
    let a = derive_angles(p)?;
    let m = m.m();
    let dynamic = 2.0 * PI * m * (a.field_magnitude / p.omega_r) * (a.theta - a.theta_star).cos();
    let geometric = -2.0 * PI * m * a.theta_star.cos();
    Ok(PhaseSplit { m, dynamic, geometric })
}

/// γ(+1/2) − γ(−1/2) = −2π cos θ*, the solid angle of the cone.
pub fn geometric_phase_shift(p: &DriveParams) -> Result<f64> {
    let up = cycle_phases(p, SpinProjection::Up)?;
    let down = cycle_phases(p, SpinProjection::Down)?;
    Ok(up.geometric - down.geometric)
}

/// R_y(θ*): maps |↑⟩, |↓⟩ onto the cyclic states at t = 0.
pub fn cyclic_basis(theta_star: f64) -> UnitaryOperator {
    su2_exp([0.0, 1.0, 0.0], theta_star).expect("unit axis")
}

/// The cyclic state with projection `m` on the cone axis at t = 0.
pub fn cyclic_state(p: &DriveParams, m: SpinProjection) -> Result<StateVector> {
    let a = derive_angles(p)?;
    let basis = StateVector::basis(2, if m == SpinProjection::Up { 0 } else { 1 })?;
    cyclic_basis(a.theta_star).matrix().apply(&basis)
}
