//! Truncated power series: holomorphic functions on the disc
//! ([`ComplexSeries`]) and slice regular functions on the ball
//! ([`SliceSeries`]).
//!
//! A slice `B_I` is identified with the disc through `x + yI -> x + yi`;
//! every conversion between the two goes through [`to_slice`] and
//! [`from_slice`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};

/// Degree used by generated test functions unless overridden.
pub const DEFAULT_DEGREE: usize = 64;

/// Tolerance for deciding that a coefficient is real.
pub const REAL_COEFF_TOLERANCE: f64 = 1e-14;

/// `c = a + bi` mapped to `a + bI`.
pub fn to_slice(c: Complex64, unit: &ImaginaryUnit) -> Quaternion {
    unit.point(c.re, c.im)
}

/// The `C_I`-component of `q`, read back as a complex number.
pub fn from_slice(q: &Quaternion, unit: &ImaginaryUnit) -> Complex64 {
    Complex64::new(q.w, unit.dot_imag(q))
}

/// `F(z) = sum z^n alpha_n`, serialized as a list of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexSeries {
    coeffs: Vec<Complex64>,
}

impl ComplexSeries {
    /// An empty coefficient list is read as the zero function.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return ComplexSeries::zero();
        }
        ComplexSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        ComplexSeries::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexSeries {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        ComplexSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation. Meaningful on the closed disc for polynomials.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return ComplexSeries::zero();
        }
        ComplexSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a * n as f64)
                .collect(),
        )
    }

    /// `(JF)(z) = conj(F(conj z))`, which conjugates every coefficient.
    pub fn j_operator(&self) -> Self {
        ComplexSeries::new(self.coeffs.iter().map(|a| a.conj()).collect())
    }

    /// `F1 = (F + JF) / 2`: the series of real parts of the coefficients.
    pub fn real_part(&self) -> Self {
        ComplexSeries::new(
            self.coeffs
                .iter()
                .map(|a| Complex64::new(a.re, 0.0))
                .collect(),
        )
    }

    /// `F2 = (F - JF) / 2i`: the series of imaginary parts, so `F = F1 + i F2`.
    pub fn imag_part(&self) -> Self {
        ComplexSeries::new(
            self.coeffs
                .iter()
                .map(|a| Complex64::new(a.im, 0.0))
                .collect(),
        )
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(|a| a.im.abs() <= REAL_COEFF_TOLERANCE)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.re == 0.0 && a.im == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexSeries::new(self.coeffs.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &ComplexSeries) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        ComplexSeries::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &ComplexSeries) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}

/// Free-function form of [`ComplexSeries::j_operator`].
pub fn j_operator(f: &ComplexSeries) -> ComplexSeries {
    f.j_operator()
}

/// `f(q) = sum q^n a_n` with quaternionic coefficients on the right of the
/// powers. Serialized as a list of `[w, x, y, z]` quadruples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SliceSeries {
    coeffs: Vec<Quaternion>,
}

impl SliceSeries {
    /// An empty coefficient list is read as the zero function.
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        if coeffs.is_empty() {
            return SliceSeries::zero();
        }
        SliceSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        SliceSeries::new(coeffs.iter().map(|&c| Quaternion::real(c)).collect())
    }

    pub fn zero() -> Self {
        SliceSeries {
            coeffs: vec![Quaternion::ZERO],
        }
    }

    pub fn constant(c: Quaternion) -> Self {
        SliceSeries { coeffs: vec![c] }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = Quaternion::ONE;
        SliceSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `f(q)` for `|q| < 1`.
    pub fn eval(&self, q: &Quaternion) -> Result<Quaternion> {
        let modulus = q.norm();
        if modulus.is_nan() || modulus >= 1.0 {
            return Err(Error::OutsideBall { modulus });
        }
        Ok(self.eval_unchecked(q))
    }

    /// Horner scheme `a0 + q(a1 + q(a2 + ...))`; the variable multiplies from
    /// the left because the powers sit left of the coefficients.
    pub fn eval_unchecked(&self, q: &Quaternion) -> Quaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::ZERO, |acc, a| *q * acc + *a)
    }

    /// `f(x + yI)` without the ball check.
    pub fn eval_on_slice(&self, x: f64, y: f64, unit: &ImaginaryUnit) -> Quaternion {
        self.eval_unchecked(&unit.point(x, y))
    }

    /// Cullen derivative: `b_n = (n + 1) a_{n+1}`.
    pub fn slice_derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return SliceSeries::zero();
        }
        SliceSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, a)| a.scale(n as f64))
                .collect(),
        )
    }

    /// `f^c(q) = sum q^n conj(a_n)`.
    pub fn regular_conjugate(&self) -> Self {
        SliceSeries::new(self.coeffs.iter().map(Quaternion::conj).collect())
    }

    /// True iff every coefficient is real, i.e. `f(B_I) ⊆ C_I` for all `I`.
    pub fn is_slice_preserving(&self) -> bool {
        self.coeffs
            .iter()
            .all(|a| a.imag_norm() <= REAL_COEFF_TOLERANCE)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == Quaternion::ZERO)
    }

    pub fn add(&self, other: &SliceSeries) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        SliceSeries::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO)
                        + other.coeffs.get(k).copied().unwrap_or(Quaternion::ZERO)
                })
                .collect(),
        )
    }

    /// `f * c`, multiplying every coefficient on the right.
    pub fn mul_right(&self, c: &Quaternion) -> Self {
        SliceSeries::new(self.coeffs.iter().map(|a| *a * *c).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        SliceSeries::new(self.coeffs.iter().map(|a| a.scale(s)).collect())
    }

    /// Splitting `f = F + G J` on the slice `B_I`.
    ///
    /// Each coefficient is written in the real basis `{1, I, J, IJ}` as
    /// `a = (p + qI) + (r + sI)J`; `F` collects `p + qi` and `G` collects
    /// `r + si`.
    pub fn split(
        &self,
        unit: &ImaginaryUnit,
        orth: &ImaginaryUnit,
    ) -> Result<(ComplexSeries, ComplexSeries)> {
        unit.check_orthogonal(orth)?;
        let ij = unit.cross(orth);
        let (f, g) = self
            .coeffs
            .iter()
            .map(|a| {
                let p = a.w;
                let q = unit.dot_imag(a);
                let r = orth.dot_imag(a);
                let s = ij[0] * a.x + ij[1] * a.y + ij[2] * a.z;
                (Complex64::new(p, q), Complex64::new(r, s))
            })
            .unzip();
        Ok((ComplexSeries::new(f), ComplexSeries::new(g)))
    }

    /// Inverse of [`SliceSeries::split`]: coefficients `alpha_n + beta_n J`
    /// with `alpha_n, beta_n` read in `C_I`.
    pub fn from_split(
        f: &ComplexSeries,
        g: &ComplexSeries,
        unit: &ImaginaryUnit,
        orth: &ImaginaryUnit,
    ) -> Result<Self> {
        unit.check_orthogonal(orth)?;
        let j = orth.as_quaternion();
        let n = f.coeffs.len().max(g.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Ok(SliceSeries::new(
            (0..n)
                .map(|k| {
                    let alpha = f.coeffs.get(k).copied().unwrap_or(zero);
                    let beta = g.coeffs.get(k).copied().unwrap_or(zero);
                    to_slice(alpha, unit) + to_slice(beta, unit) * j
                })
                .collect(),
        ))
    }

    /// Regular extension of a holomorphic `F` living on `B_I`:
    /// `alpha = p + qi` becomes the coefficient `p + qI`.
    pub fn extend(f: &ComplexSeries, unit: &ImaginaryUnit) -> Self {
        SliceSeries::new(f.coeffs.iter().map(|a| to_slice(*a, unit)).collect())
    }

    /// Slice-preserving extension of a real-coefficient `F` (the imaginary
    /// parts of the coefficients are ignored).
    pub fn extend_real(f: &ComplexSeries) -> Self {
        SliceSeries::new(f.coeffs.iter().map(|a| Quaternion::real(a.re)).collect())
    }

    /// `f = f0 + f1 I + f2 J + f3 IJ` with slice-preserving `f0..f3`.
    ///
    /// With `f = F + GJ` on `B_I`: `f0 = (F + JF)/2`, `f1 = (F - JF)/2i`, and
    /// likewise `f2`, `f3` from `G`.
    pub fn symmetric_decomposition(
        &self,
        unit: &ImaginaryUnit,
        orth: &ImaginaryUnit,
    ) -> Result<[SliceSeries; 4]> {
        let (f, g) = self.split(unit, orth)?;
        Ok([
            SliceSeries::extend_real(&f.real_part()),
            SliceSeries::extend_real(&f.imag_part()),
            SliceSeries::extend_real(&g.real_part()),
            SliceSeries::extend_real(&g.imag_part()),
        ])
    }

    /// Reassembles `f0 + f1 I + f2 J + f3 IJ`.
    pub fn from_symmetric_parts(
        parts: &[SliceSeries; 4],
        unit: &ImaginaryUnit,
        orth: &ImaginaryUnit,
    ) -> Self {
        let i = unit.as_quaternion();
        let j = orth.as_quaternion();
        parts[0]
            .add(&parts[1].mul_right(&i))
            .add(&parts[2].mul_right(&j))
            .add(&parts[3].mul_right(&(i * j)))
    }
}

/// Representation formula: `f(x + yJ)` from `fplus = f(x + yI)` and
/// `fminus = f(x - yI)`,
/// `1/2 [fplus + fminus] + J (I/2) [fminus - fplus]`.
pub fn representation_eval(
    fplus: Quaternion,
    fminus: Quaternion,
    unit: &ImaginaryUnit,
    target: &ImaginaryUnit,
) -> Quaternion {
    let half_sum = (fplus + fminus).scale(0.5);
    let ji = target.as_quaternion() * unit.as_quaternion();
    half_sum + ji * (fminus - fplus).scale(0.5)
}
