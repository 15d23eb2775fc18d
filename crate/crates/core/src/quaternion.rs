//! Quaternion algebra and the slice coordinates `q = x + yI` of points of
//! the unit ball.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to validate unit length and orthogonality of imaginary units.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// An element `w + x i + y j + z k` of the quaternions.
///
/// Serializes as the JSON array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Quaternion with zero real part and the given imaginary vector.
    pub const fn pure(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn imag(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn imag_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Euclidean inner product on R^4.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        (n > 0.0).then(|| self.conj().scale(1.0 / n))
    }

    /// Hamilton product `self * other`.
    pub fn multiply(&self, other: &Quaternion) -> Self {
        let (a, b) = (self, other);
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Quaternion::ONE, |acc, _| acc * *self)
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        self.multiply(&o)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        self.scale(1.0 / s)
    }
}

/// Hamilton product as a free function.
pub fn multiply(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// A purely imaginary quaternion of unit length, i.e. an element of the
/// sphere `S = { q : q^2 = -1 }`.
///
/// Serializes as `[ux, uy, uz]`; deserialization validates the length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryUnit {
    v: [f64; 3],
}

impl TryFrom<[f64; 3]> for ImaginaryUnit {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        ImaginaryUnit::new(v[0], v[1], v[2])
    }
}

impl From<ImaginaryUnit> for [f64; 3] {
    fn from(u: ImaginaryUnit) -> Self {
        u.v
    }
}

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit { v: [1.0, 0.0, 0.0] };
    pub const J: ImaginaryUnit = ImaginaryUnit { v: [0.0, 1.0, 0.0] };
    pub const K: ImaginaryUnit = ImaginaryUnit { v: [0.0, 0.0, 1.0] };

    /// Validating constructor: the vector must have length 1 within
    /// [`UNIT_TOLERANCE`].
    pub fn new(ux: f64, uy: f64, uz: f64) -> Result<Self> {
        let length = (ux * ux + uy * uy + uz * uz).sqrt();
        if !length.is_finite() || (length - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { length });
        }
        Ok(ImaginaryUnit { v: [ux, uy, uz] })
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let length = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NotUnit { length });
        }
        Ok(ImaginaryUnit {
            v: [v[0] / length, v[1] / length, v[2] / length],
        })
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::pure(self.v)
    }

    pub fn dot(&self, other: &ImaginaryUnit) -> f64 {
        self.v[0] * other.v[0] + self.v[1] * other.v[1] + self.v[2] * other.v[2]
    }

    /// Inner product with the imaginary part of a quaternion.
    pub fn dot_imag(&self, q: &Quaternion) -> f64 {
        self.v[0] * q.x + self.v[1] * q.y + self.v[2] * q.z
    }

    /// The unit `I * J` for `J` orthogonal to `self` (their cross product).
    pub fn cross(&self, other: &ImaginaryUnit) -> [f64; 3] {
        let (a, b) = (self.v, other.v);
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// `x + yI` as a quaternion.
    pub fn point(&self, x: f64, y: f64) -> Quaternion {
        Quaternion::new(x, y * self.v[0], y * self.v[1], y * self.v[2])
    }

    pub fn negated(&self) -> Self {
        ImaginaryUnit {
            // 0.0 - x keeps zero components positive
            v: [0.0 - self.v[0], 0.0 - self.v[1], 0.0 - self.v[2]],
        }
    }

    /// Checks that `(self, other)` is an orthonormal pair of imaginary units.
    pub fn check_orthogonal(&self, other: &ImaginaryUnit) -> Result<()> {
        let dot = self.dot(other);
        if dot.abs() > UNIT_TOLERANCE {
            return Err(Error::NotOrthogonal { dot });
        }
        Ok(())
    }
}

/// Deterministic unit orthogonal to `unit`: the standard basis vector with the
/// smallest `|<unit, e>|` (first index on ties), projected onto the orthogonal
/// complement of `unit` and normalized. Maps `i` to `j`.
pub fn orthogonal_unit(unit: &ImaginaryUnit) -> ImaginaryUnit {
    let u = unit.components();
    let mut best = 0;
    for idx in 1..3 {
        if u[idx].abs() < u[best].abs() {
            best = idx;
        }
    }
    let mut e = [0.0; 3];
    e[best] = 1.0;
    let d = u[best];
    let w = [e[0] - d * u[0], e[1] - d * u[1], e[2] - d * u[2]];
    // |<u, e>| <= 1/sqrt(3), so the projection has length >= sqrt(2/3).
    ImaginaryUnit::normalized(w).expect("projection of a basis vector is nonzero")
}

/// A point `x + yI` of the ball in slice coordinates with `y >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlicePoint {
    x: f64,
    y: f64,
    unit: ImaginaryUnit,
}

impl SlicePoint {
    /// Builds a point from slice data. A negative `y` is canonicalized by
    /// flipping the unit (`x + yI = x + (-y)(-I)`).
    pub fn new(x: f64, y: f64, unit: ImaginaryUnit) -> Result<Self> {
        let (y, unit) = if y < 0.0 { (-y, unit.negated()) } else { (y, unit) };
        let modulus = (x * x + y * y).sqrt();
        if modulus.is_nan() || modulus >= 1.0 {
            return Err(Error::OutsideBall { modulus });
        }
        Ok(SlicePoint { x, y, unit })
    }

    /// Point at modulus `rho` and angle `alpha` on the slice of `unit`.
    pub fn polar(rho: f64, alpha: f64, unit: ImaginaryUnit) -> Result<Self> {
        SlicePoint::new(rho * alpha.cos(), rho * alpha.sin(), unit)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn unit(&self) -> ImaginaryUnit {
        self.unit
    }

    pub fn is_real(&self) -> bool {
        self.y == 0.0
    }

    pub fn modulus(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Angle `atan2(y, x)`, in `[0, pi]` because `y >= 0`.
    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn to_quaternion(&self) -> Quaternion {
        self.unit.point(self.x, self.y)
    }
}

/// Slice coordinates of `q`. Real points get the unit `i`.
pub fn decompose(q: &Quaternion) -> Result<SlicePoint> {
    let modulus = q.norm();
    if modulus.is_nan() || modulus >= 1.0 {
        return Err(Error::OutsideBall { modulus });
    }
    let y = q.imag_norm();
    let unit = if y == 0.0 {
        ImaginaryUnit::I
    } else {
        ImaginaryUnit::normalized(q.imag())?
    };
    Ok(SlicePoint { x: q.w, y, unit })
}
