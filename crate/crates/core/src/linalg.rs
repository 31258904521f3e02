// SPDX-License-Identifier: Apache-2.0

//! Fixed-size dense complex linear algebra for one and two spin-1/2 systems.
//!
//! Matrices are either 2×2 or 4×4 and stored row-major in a stack array. The
//! two-spin basis order is |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ with ↑ the m = +1/2 state,
//! which is what [`tensor_product`] produces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Maximum Frobenius norm of U†U − I accepted by [`UnitaryOperator::new`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[inline]
fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::contract(format!("matrix dimension must be 2 or 4, got {dim}")))
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: [ZERO; 16] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::contract(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim)?;
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = d;
        }
        Ok(m)
    }

    /// 2×2 constructor for literals.
    pub fn m2(a: C64, b: C64, c: C64, d: C64) -> Self {
        let mut data = [ZERO; 16];
        data[0] = a;
        data[1] = b;
        data[2] = c;
        data[3] = d;
        Self { dim: 2, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        debug_assert!(row < self.dim && col < self.dim);
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        debug_assert!(row < self.dim && col < self.dim);
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[r * self.dim + c] = self.data[c * self.dim + r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::contract(format!(
                "dimension mismatch in product: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    #[inline]
    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self { dim: n, data: [ZERO; 16] };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    /// AB − BA.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(self.matmul(rhs)? - rhs.matmul(self)?)
    }

    /// Frobenius norm of A − A†.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// Frobenius norm of A†A − I.
    pub fn unitarity_defect(&self) -> f64 {
        let id = Self::identity(self.dim).expect("dimension already validated");
        (self.adjoint().mul_unchecked(self) - id).frobenius_norm()
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim != v.dim {
            return Err(Error::contract(format!(
                "cannot apply a {}-dimensional operator to a {}-dimensional state",
                self.dim, v.dim
            )));
        }
        let n = self.dim;
        let mut out = StateVector { dim: n, data: [ZERO; 4] };
        for r in 0..n {
            out.data[r] = (0..n).map(|c| self.data[r * n + c] * v.data[c]).sum();
        }
        Ok(out)
    }

    /// Matrix exponential by Taylor series with scaling and squaring.
    ///
    /// Accurate to double precision for the moderately sized arguments the
    /// integrator produces (−i·h·H with small step h).
    pub fn expm(&self) -> Self {
        let n = self.dim;
        let norm = self.frobenius_norm();
        let squarings = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
        let x = self.scale_re(0.5f64.powi(squarings as i32));
        let mut result = Self::identity(n).expect("dimension already validated");
        let mut term = result;
        for k in 1..=30 {
            term = term.mul_unchecked(&x).scale_re(1.0 / k as f64);
            result = result + term;
            if term.frobenius_norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul_unchecked(&result);
        }
        result
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        self.mul_unchecked(&rhs)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A complex state vector of dimension 2 or 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    data: [C64; 4],
}

impl StateVector {
    pub fn new(entries: &[C64]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut data = [ZERO; 4];
        data[..entries.len()].copy_from_slice(entries);
        Ok(Self { dim: entries.len(), data })
    }

    /// Computational basis vector `index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::contract(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut data = [ZERO; 4];
        data[index] = ONE;
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim]
    }

    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ (antilinear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        self.entries().iter().zip(other.entries()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    /// ⟨self|op|self⟩.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        Ok(self.inner(&op.apply(self)?))
    }

    /// |self⟩⟨self|.
    pub fn projector(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim).expect("dimension already validated");
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(r, c, self.data[r] * self.data[c].conj());
            }
        }
        m
    }
}

/// A matrix certified unitary at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
    unitarity_defect: f64,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARITY_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let defect = matrix.unitarity_defect();
        if !(defect <= tolerance) {
            return Err(Error::contract(format!(
                "matrix is not unitary: ||U^dag U - I|| = {defect:e} exceeds {tolerance:e}"
            )));
        }
        Ok(Self { matrix, unitarity_defect: defect })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(Self { matrix: ComplexMatrix::identity(dim)?, unitarity_defect: 0.0 })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_defect
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), unitarity_defect: self.unitarity_defect }
    }

    /// Product `self · rhs`; the defect is recomputed.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        let m = self.matrix.matmul(&rhs.matrix)?;
        Ok(Self { unitarity_defect: m.unitarity_defect(), matrix: m })
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Pauli matrices σx, σy, σz.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::m2(ONE, ZERO, ZERO, -ONE)
}

/// Spin-1/2 operators S = σ/2.
pub fn spin_x() -> ComplexMatrix {
    pauli_x().scale_re(0.5)
}

pub fn spin_y() -> ComplexMatrix {
    pauli_y().scale_re(0.5)
}

pub fn spin_z() -> ComplexMatrix {
    pauli_z().scale_re(0.5)
}

/// S+ = Sx + iSy.
pub fn spin_raise() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, ONE, ZERO, ZERO)
}

/// S− = Sx − iSy.
pub fn spin_lower() -> ComplexMatrix {
    ComplexMatrix::m2(ZERO, ZERO, ONE, ZERO)
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("2 is a valid dimension")
}

/// Kronecker product of two 2×2 matrices: row index of `a` outer, of `b` inner.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::contract(format!(
            "tensor_product needs two 2x2 factors, got {}x{} and {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for ra in 0..2 {
        for ca in 0..2 {
            for rb in 0..2 {
                for cb in 0..2 {
                    out.set(2 * ra + rb, 2 * ca + cb, a.get(ra, ca) * b.get(rb, cb));
                }
            }
        }
    }
    Ok(out)
}

/// Tensor product of two single-spin unitaries.
pub fn tensor_unitary(a: &UnitaryOperator, b: &UnitaryOperator) -> Result<UnitaryOperator> {
    UnitaryOperator::new(tensor_product(a.matrix(), b.matrix())?)
}

/// exp(−i·angle·(axis·S)) = cos(angle/2)·I − i·sin(angle/2)·(axis·σ).
pub fn su2_exp(axis: [f64; 3], angle: f64) -> Result<UnitaryOperator> {
    let len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !((len - 1.0).abs() <= 1e-12) {
        return Err(Error::contract(format!("rotation axis must be a unit vector, |axis| = {len}")));
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let [nx, ny, nz] = axis;
    // -i s (nx σx + ny σy + nz σz)
    let m = ComplexMatrix::m2(
        C64::new(c, -s * nz),
        C64::new(-s * ny, -s * nx),
        C64::new(s * ny, -s * nx),
        C64::new(c, s * nz),
    );
    UnitaryOperator::new(m)
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::contract(format!(
            "frobenius_distance: dimension mismatch {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// min over φ of ‖e^{iφ}a − b‖_F, attained at φ = arg tr(a†b).
///
/// When tr(a†b) vanishes every φ gives the same distance, so the raw
/// Frobenius distance is returned.
pub fn global_phase_distance(a: &UnitaryOperator, b: &UnitaryOperator) -> Result<f64> {
    let overlap = a.matrix().adjoint().matmul(b.matrix())?.trace();
    if overlap.norm() == 0.0 {
        return frobenius_distance(a.matrix(), b.matrix());
    }
    let phase = overlap / overlap.norm();
    frobenius_distance(&a.matrix().scale(phase), b.matrix())
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Frobenius norm of the off-diagonal part.
pub fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            if r != c {
                acc += m.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn power_series_exp(m: &ComplexMatrix, terms: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::identity(m.dim()).unwrap();
        let mut term = sum;
        for k in 1..terms {
            term = (term * *m).scale_re(1.0 / k as f64);
            sum = sum + term;
        }
        sum
    }

    #[test]
    fn tensor_product_examples() {
        let id2 = identity2();
        let id4 = ComplexMatrix::identity(4).unwrap();
        assert_eq!(tensor_product(&id2, &id2).unwrap(), id4);

        let zi = tensor_product(&pauli_z(), &id2).unwrap();
        let expect = ComplexMatrix::from_diagonal(&[ONE, ONE, -ONE, -ONE]).unwrap();
        assert_eq!(zi, expect);

        let zz = tensor_product(&pauli_z(), &pauli_z()).unwrap();
        let expect = ComplexMatrix::from_diagonal(&[ONE, -ONE, -ONE, ONE]).unwrap();
        assert_eq!(zz, expect);
    }

    #[test]
    fn tensor_product_rejects_4x4() {
        let id4 = ComplexMatrix::identity(4).unwrap();
        assert!(matches!(tensor_product(&id4, &identity2()), Err(Error::Contract(_))));
    }

    #[test]
    fn su2_exp_examples() {
        let u = su2_exp([0.0, 0.0, 1.0], 2.0 * PI).unwrap();
        let minus_id = identity2().scale_re(-1.0);
        assert!(frobenius_distance(u.matrix(), &minus_id).unwrap() < 1e-14);

        let u = su2_exp([0.0, 0.0, 1.0], PI).unwrap();
        let expect = ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, -PI / 2.0), C64::from_polar(1.0, PI / 2.0)])
            .unwrap();
        assert!(frobenius_distance(u.matrix(), &expect).unwrap() < 1e-14);

        let u = su2_exp([1.0, 0.0, 0.0], 0.7).unwrap();
        let generator = spin_x().scale(C64::new(0.0, -0.7));
        let series = power_series_exp(&generator, 40);
        assert!(frobenius_distance(u.matrix(), &series).unwrap() < 1e-14);
    }

    #[test]
    fn su2_exp_rejects_non_unit_axis() {
        assert!(matches!(su2_exp([1.0, 1.0, 0.0], 0.3), Err(Error::Contract(_))));
    }

    #[test]
    fn expm_matches_power_series() {
        let h = (spin_x().scale_re(3.0) + spin_z().scale_re(-1.2)).scale(C64::new(0.0, -2.5));
        let a = h.expm();
        let b = power_series_exp(&h, 80);
        assert!(frobenius_distance(&a, &b).unwrap() < 1e-12);
    }

    #[test]
    fn frobenius_examples() {
        let id = identity2();
        assert_eq!(frobenius_distance(&id, &id).unwrap(), 0.0);
        let d = frobenius_distance(&id, &id.scale_re(-1.0)).unwrap();
        assert!((d - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(frobenius_distance(&id, &ComplexMatrix::identity(4).unwrap()).is_err());
    }

    #[test]
    fn global_phase_distance_examples() {
        let u = su2_exp([0.6, 0.0, 0.8], 1.1).unwrap();
        let shifted = UnitaryOperator::new(u.matrix().scale(C64::from_polar(1.0, PI / 3.0))).unwrap();
        assert!(global_phase_distance(&u, &shifted).unwrap() < 1e-12);
        assert!(global_phase_distance(&u, &u).unwrap() < 1e-12);

        // tr(a^dag b) = 0: every global phase gives |e^{i phi} - 1|^2 + |e^{i phi} + 1|^2 = 4.
        let id = UnitaryOperator::identity(2).unwrap();
        let z = UnitaryOperator::new(pauli_z()).unwrap();
        let brute = (0..3600)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / 3600.0;
                frobenius_distance(&id.matrix().scale(C64::from_polar(1.0, phi)), z.matrix()).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        let d = global_phase_distance(&id, &z).unwrap();
        assert!((d - brute).abs() < 1e-12);
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(0.5) - 0.5).abs() < 1e-15);
    }
}
