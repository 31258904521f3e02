// SPDX-License-Identifier: Apache-2.0

//! Two coupled spins under one shared circularly polarized drive, the
//! diagonal geometric gate, and the compound contour that removes the
//! dynamic phases.
//!
//! Basis order is |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ (spin 1 is the left factor).

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    identity2, off_diagonal_norm, spin_x, spin_y, spin_z, su2_exp, tensor_product, tensor_unitary, ComplexMatrix,
    UnitaryOperator, C64, ONE,
};
use crate::oracle::{propagate_converged, HamiltonianSchedule, DEFAULT_TOLERANCE};
use crate::spin::{cyclic_basis, derive_angles, DriveParams};

/// Minimum relative gap |ω01 − ω02| / max(|ω01|, |ω02|).
pub const DISTINCTNESS_GAP: f64 = 1e-6;
/// τ must exceed this many drive periods for the gate to be trusted.
pub const VALIDITY_PERIODS: f64 = 10.0;
/// Smallest step count accepted by [`echo_evolution`].
pub const ECHO_MIN_STEPS: usize = 1000;
const ECHO_MAX_STEPS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinParams {
    pub omega01: f64,
    pub omega02: f64,
    pub j: f64,
    pub omega1: f64,
    pub omega_r: f64,
    pub tau_decoherence: Option<f64>,
}

impl TwoSpinParams {
    pub fn new(omega01: f64, omega02: f64, j: f64, omega1: f64, omega_r: f64) -> Result<Self> {
        let p = TwoSpinParams { omega01, omega02, j, omega1, omega_r, tau_decoherence: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_decoherence(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::contract(format!("decoherence time must be positive, got {tau}")));
        }
        self.tau_decoherence = Some(tau);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega01, self.omega02, self.j, self.omega1, self.omega_r];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::contract("two-spin parameters must be finite"));
        }
        if self.omega1 < 0.0 {
            return Err(Error::contract(format!("omega1 must be >= 0, got {}", self.omega1)));
        }
        if self.omega_r <= 0.0 {
            return Err(Error::contract(format!("omega_R must be > 0, got {}", self.omega_r)));
        }
        let scale = self.omega01.abs().max(self.omega02.abs());
        if !((self.omega01 - self.omega02).abs() >= DISTINCTNESS_GAP * scale) || scale == 0.0 {
            return Err(Error::IndistinctSpins { omega01: self.omega01, omega02: self.omega02 });
        }
        Ok(())
    }

    /// T = 2π/ω_R.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_r
    }

    /// Single-spin drive seen by spin `a` (0 or 1).
    pub fn spin(&self, a: usize) -> Result<DriveParams> {
        let omega0 = match a {
            0 => self.omega01,
            1 => self.omega02,
            _ => return Err(Error::contract(format!("spin index must be 0 or 1, got {a}"))),
        };
        DriveParams::new(omega0, self.omega1, self.omega_r)
    }

    pub fn swapped(&self) -> Self {
        TwoSpinParams { omega01: self.omega02, omega02: self.omega01, ..*self }
    }

    pub fn with_coupling(&self, j: f64) -> Self {
        TwoSpinParams { j, ..*self }
    }

    fn with_longitudinal(&self, omega01: f64, omega02: f64) -> Self {
        TwoSpinParams { omega01, omega02, ..*self }
    }
}

fn single_site(omega0: f64, omega1: f64, omega_r: f64, t: f64) -> ComplexMatrix {
    let (s, c) = (omega_r * t).sin_cos();
    spin_z().scale_re(omega0) + spin_x().scale_re(omega1 * c) - spin_y().scale_re(omega1 * s)
}

fn lift(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(a, b).expect("2x2 factors")
}

/// H_S(t) = Σ_a [ω0a S_z + ω1 (cos ω_R t S_x − sin ω_R t S_y)]_a + J S_z⊗S_z.
pub fn spin_hamiltonian(p: &TwoSpinParams, t: f64) -> ComplexMatrix {
    let h1 = single_site(p.omega01, p.omega1, p.omega_r, t);
    let h2 = single_site(p.omega02, p.omega1, p.omega_r, t);
    lift(&h1, &identity2()) + lift(&identity2(), &h2) + interaction_hamiltonian(p)
}

/// The undriven single-spin part, ω01 S_z⊗1 + 1⊗ω02 S_z.
pub fn free_hamiltonian(p: &TwoSpinParams) -> ComplexMatrix {
    lift(&spin_z().scale_re(p.omega01), &identity2()) + lift(&identity2(), &spin_z().scale_re(p.omega02))
}

/// J S_z⊗S_z.
pub fn interaction_hamiltonian(p: &TwoSpinParams) -> ComplexMatrix {
    lift(&spin_z(), &spin_z()).scale_re(p.j)
}

pub fn two_spin_schedule(p: &TwoSpinParams) -> Result<HamiltonianSchedule> {
    p.validate()?;
    let p = *p;
    HamiltonianSchedule::new(4, move |t| spin_hamiltonian(&p, t))
}

/// diag(e^{i(γ1+γ2)}, e^{i(γ1−γ2)}, e^{i(−γ1+γ2)}, e^{−i(γ1+γ2)}).
pub fn gate_matrix(gamma1: f64, gamma2: f64) -> UnitaryOperator {
    let d = [gamma1 + gamma2, gamma1 - gamma2, -gamma1 + gamma2, -gamma1 - gamma2].map(|x| C64::from_polar(1.0, x));
    UnitaryOperator::new(ComplexMatrix::from_diagonal(&d).expect("4 entries")).expect("diagonal phases")
}

/// Distance of a 4×4 matrix from the set of tensor products of diagonal 2×2
/// matrices: off-diagonal weight plus |d00·d11 − d01·d10|.
pub fn diagonal_factorization_defect(m: &ComplexMatrix) -> Result<f64> {
    if m.dim() != 4 {
        return Err(Error::contract("factorization defect needs a 4x4 matrix"));
    }
    let d = m.diagonal();
    Ok(off_diagonal_norm(m) + (d[0] * d[3] - d[1] * d[2]).norm())
}

pub fn swap_gate() -> UnitaryOperator {
    let mut m = ComplexMatrix::zeros(4).expect("dim 4");
    for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        m.set(r, c, ONE);
    }
    UnitaryOperator::new(m).expect("permutation")
}

/// Set when τ ≤ 10·T; the gate values are unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityWarning {
    pub tau: f64,
    pub period: f64,
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "decoherence time {} is not much longer than the drive period {} (need tau > {} T)",
            self.tau, self.period, VALIDITY_PERIODS
        )
    }
}

#[derive(Debug, Clone)]
pub struct GeometricGate {
    pub gamma1: f64,
    pub gamma2: f64,
    pub theta_star: [f64; 2],
    pub matrix: UnitaryOperator,
    pub echo_doubled: bool,
    pub warning: Option<ValidityWarning>,
}

/// γ_a = −π cosθ*_a per cycle, or −2π cosθ*_a when `echo_doubled`.
pub fn geometric_gate(p: &TwoSpinParams, echo_doubled: bool) -> Result<GeometricGate> {
    p.validate()?;
    let t1 = derive_angles(&p.spin(0)?)?.theta_star;
    let t2 = derive_angles(&p.spin(1)?)?.theta_star;
    let scale = if echo_doubled { -2.0 * PI } else { -PI };
    let (gamma1, gamma2) = (scale * t1.cos(), scale * t2.cos());
    let warning = p
        .tau_decoherence
        .filter(|tau| *tau <= VALIDITY_PERIODS * p.period())
        .map(|tau| ValidityWarning { tau, period: p.period() });
    Ok(GeometricGate {
        gamma1,
        gamma2,
        theta_star: [t1, t2],
        matrix: gate_matrix(gamma1, gamma2),
        echo_doubled,
        warning,
    })
}

/// Second-cycle partner of one spin in the compound contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPartner {
    pub theta_star: f64,
    /// Longitudinal frequency during the second cycle.
    pub omega0: f64,
    /// Cone angle of the second cycle.
    pub theta_star_partner: f64,
    /// y-rotation applied between the cycles.
    pub beta: f64,
    /// Number of extra ω_R quanta added to reach a real partner.
    pub branch: u32,
}

/// Picks the second cycle so that its dressed energy splitting cancels the
/// first cycle's dynamic phase modulo 2π while the geometric phase repeats.
pub fn matched_partner(omega0: f64, omega1: f64, omega_r: f64) -> Result<MatchedPartner> {
    let first = DriveParams::new(omega0, omega1, omega_r)?;
    let a = derive_angles(&first)?;
    let dressed = a.field_magnitude * (a.theta - a.theta_star).cos();
    let base = dressed - omega_r * a.theta_star.cos();
    let mut branch = 0u32;
    let mut target = base;
    while target < omega1 || target <= 0.0 {
        branch += 1;
        target = base + f64::from(branch) * omega_r;
    }
    let partner_omega0 = -omega_r + (target * target - omega1 * omega1).max(0.0).sqrt();
    let theta_star_partner = omega1.atan2(partner_omega0 + omega_r);
    Ok(MatchedPartner {
        theta_star: a.theta_star,
        omega0: partner_omega0,
        theta_star_partner,
        beta: PI + theta_star_partner - a.theta_star,
        branch,
    })
}

// A schedule is a few words; a 4×4 pulse is 256 bytes. Sequences hold four segments.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum EchoSegment {
    /// Continuous drive over [0, duration] with the given longitudinal frequencies.
    Drive { schedule: HamiltonianSchedule, duration: f64, omega0: [f64; 2] },
    /// Instantaneous spin-selective rotation.
    Pulse { unitary: UnitaryOperator, beta: [f64; 2] },
}

#[derive(Debug, Clone)]
pub struct EchoSchedule {
    pub segments: Vec<EchoSegment>,
    pub partners: [MatchedPartner; 2],
    /// R_y(θ1*)⊗R_y(θ2*), columns are the cyclic product states.
    pub dressed_basis: UnitaryOperator,
}

impl EchoSchedule {
    pub fn drive_duration(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match s {
                EchoSegment::Drive { duration, .. } => *duration,
                EchoSegment::Pulse { .. } => 0.0,
            })
            .sum()
    }
}

fn ry(angle: f64) -> UnitaryOperator {
    su2_exp([0.0, 1.0, 0.0], angle).expect("unit axis")
}

/// Cycle C, R_y(β1)⊗R_y(β2), cycle C′, R_y(−β1)⊗R_y(−β2).
///
/// Each drive segment spans exactly one period, so restarting its clock at
/// zero leaves the field phase continuous.
pub fn echo_schedule(p: &TwoSpinParams) -> Result<EchoSchedule> {
    p.validate()?;
    let m1 = matched_partner(p.omega01, p.omega1, p.omega_r)?;
    let m2 = matched_partner(p.omega02, p.omega1, p.omega_r)?;
    let second = p.with_longitudinal(m1.omega0, m2.omega0);
    let period = p.period();
    let forward = tensor_unitary(&ry(m1.beta), &ry(m2.beta))?;
    let segments = vec![
        EchoSegment::Drive { schedule: two_spin_schedule(p)?, duration: period, omega0: [p.omega01, p.omega02] },
        EchoSegment::Pulse { unitary: forward, beta: [m1.beta, m2.beta] },
        EchoSegment::Drive {
            schedule: HamiltonianSchedule::new(4, move |t| spin_hamiltonian(&second, t))?,
            duration: period,
            omega0: [m1.omega0, m2.omega0],
        },
        EchoSegment::Pulse { unitary: forward.adjoint(), beta: [-m1.beta, -m2.beta] },
    ];
    let dressed_basis = tensor_unitary(&cyclic_basis(m1.theta_star), &cyclic_basis(m2.theta_star))?;
    Ok(EchoSchedule { segments, partners: [m1, m2], dressed_basis })
}

/// Net lab-frame operator of the compound contour, each drive segment
/// integrated to the default certificate tolerance.
pub fn echo_evolution_lab(p: &TwoSpinParams, steps: usize) -> Result<UnitaryOperator> {
    if steps < ECHO_MIN_STEPS {
        return Err(Error::contract(format!("echo evolution needs at least {ECHO_MIN_STEPS} steps, got {steps}")));
    }
    let schedule = echo_schedule(p)?;
    let mut net = UnitaryOperator::identity(4)?;
    for segment in &schedule.segments {
        let step = match segment {
            EchoSegment::Drive { schedule, duration, .. } => {
                *propagate_converged(schedule, 0.0, *duration, steps, ECHO_MAX_STEPS, DEFAULT_TOLERANCE)?
                    .final_propagator()
            }
            EchoSegment::Pulse { unitary, .. } => *unitary,
        };
        net = step.compose(&net)?;
    }
    Ok(net)
}

/// Net operator expressed in the cyclic product basis, where it is
/// compared with [`gate_matrix`].
pub fn echo_evolution(p: &TwoSpinParams, steps: usize) -> Result<UnitaryOperator> {
    let lab = echo_evolution_lab(p, steps)?;
    let v = echo_schedule(p)?.dressed_basis;
    v.adjoint().compose(&lab)?.compose(&v)
}

/// Exact J = 0 net operator built from closed-form single-cycle exponentials.
pub fn echo_evolution_uncoupled(p: &TwoSpinParams) -> Result<UnitaryOperator> {
    p.validate()?;
    let schedule = echo_schedule(p)?;
    let factor = |omega0: f64, partner: &MatchedPartner| -> Result<UnitaryOperator> {
        let c1 = single_cycle(omega0, p.omega1, p.omega_r)?;
        let c2 = single_cycle(partner.omega0, p.omega1, p.omega_r)?;
        ry(-partner.beta).compose(&c2)?.compose(&ry(partner.beta))?.compose(&c1)
    };
    let lab = tensor_unitary(&factor(p.omega01, &schedule.partners[0])?, &factor(p.omega02, &schedule.partners[1])?)?;
    let v = schedule.dressed_basis;
    v.adjoint().compose(&lab)?.compose(&v)
}

fn single_cycle(omega0: f64, omega1: f64, omega_r: f64) -> Result<UnitaryOperator> {
    let d = DriveParams::new(omega0, omega1, omega_r)?;
    Ok(crate::spin::analytic_propagator(&d, d.period())?.propagator)
}

/// Zero for a diagonal matrix.
pub fn diagonality_defect(u: &UnitaryOperator) -> f64 {
    off_diagonal_norm(u.matrix())
}
