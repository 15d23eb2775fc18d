//! Finite atomic measures on the ball `B` and on the disc `D`.
//!
//! Atoms on `B` are stored in slice coordinates with `y >= 0`. The slice
//! projection `mu^s` sends an atom at `x + yI` to `x + yi`, collapsing each
//! sphere `x + yS` onto one point of the upper half disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{abs_pow, pairwise_sum};
use crate::quaternion::{ImaginaryUnit, Quaternion, SlicePoint};
use crate::series::{ComplexSeries, SliceSeries};
use crate::spaces::check_exponent;

/// Projected points closer than this (in each coordinate) merge into one atom.
pub const MERGE_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub point: SlicePoint,
    pub mass: f64,
}

impl Atom {
    pub fn new(point: SlicePoint, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        Ok(Atom { point, mass })
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidMeasure(format!("atom mass {mass} is not positive")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    x: f64,
    y: f64,
    #[serde(rename = "I")]
    unit: ImaginaryUnit,
    mass: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureRecord<T> {
    atoms: Vec<T>,
}

/// A finite nonnegative measure on `B` made of weighted atoms.
///
/// JSON: `{"atoms":[{"x":..,"y":..,"I":[ux,uy,uz],"mass":..}, ..]}`. Atoms
/// with `y < 0` are canonicalized on load.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRecord<AtomRecord>", into = "MeasureRecord<AtomRecord>")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<MeasureRecord<AtomRecord>> for AtomicMeasure {
    type Error = Error;
    fn try_from(rec: MeasureRecord<AtomRecord>) -> Result<Self> {
        let atoms = rec
            .atoms
            .into_iter()
            .map(|a| Atom::new(SlicePoint::new(a.x, a.y, a.unit)?, a.mass))
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomicMeasure { atoms })
    }
}

impl From<AtomicMeasure> for MeasureRecord<AtomRecord> {
    fn from(m: AtomicMeasure) -> Self {
        MeasureRecord {
            atoms: m
                .atoms
                .into_iter()
                .map(|a| AtomRecord {
                    x: a.point.x(),
                    y: a.point.y(),
                    unit: a.point.unit(),
                    mass: a.mass,
                })
                .collect(),
        }
    }
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            check_mass(a.mass)?;
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn empty() -> Self {
        AtomicMeasure::default()
    }

    /// Single atom of the given mass at `q`.
    pub fn dirac(q: &Quaternion, mass: f64) -> Result<Self> {
        Ok(AtomicMeasure {
            atoms: vec![Atom::new(crate::quaternion::decompose(q)?, mass)?],
        })
    }

    pub fn push(&mut self, point: SlicePoint, mass: f64) -> Result<()> {
        self.atoms.push(Atom::new(point, mass)?);
        Ok(())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        let m: Vec<f64> = self.atoms.iter().map(|a| a.mass).collect();
        pairwise_sum(&m)
    }

    /// Sum of two measures (atom lists concatenated).
    pub fn combine(&self, other: &AtomicMeasure) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        AtomicMeasure { atoms }
    }

    /// `int phi dmu` with a fixed summation order.
    pub fn integrate<F: Fn(&Atom) -> f64>(&self, phi: F) -> f64 {
        let v: Vec<f64> = self.atoms.iter().map(|a| a.mass * phi(a)).collect();
        pairwise_sum(&v)
    }

    /// `int |f|^p dmu`.
    pub fn lp_integral(&self, f: &SliceSeries, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.integrate(|a| abs_pow(f.eval_unchecked(&a.point.to_quaternion()).norm(), p)))
    }

    /// Splits off the atoms on the real axis: `mu = mu_R + mu_tilde`.
    pub fn decompose_real(&self) -> (AtomicMeasure, AtomicMeasure) {
        let (real, rest): (Vec<Atom>, Vec<Atom>) =
            self.atoms.iter().partition(|a| a.point.is_real());
        (AtomicMeasure { atoms: real }, AtomicMeasure { atoms: rest })
    }

    /// `mu^s(E) = mu(E ∩ R) + mu({x + yI : y > 0, x + yi ∈ E})`.
    pub fn project_slice(&self) -> ComplexAtomicMeasure {
        let mut pts: Vec<(f64, f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (a.point.x(), a.point.y(), a.mass))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut atoms: Vec<ComplexAtom> = Vec::with_capacity(pts.len());
        for (x, y, m) in pts {
            match atoms.last_mut() {
                Some(last)
                    if (last.z.re - x).abs() <= MERGE_TOLERANCE
                        && (last.z.im - y).abs() <= MERGE_TOLERANCE =>
                {
                    last.mass += m
                }
                _ => atoms.push(ComplexAtom {
                    z: Complex64::new(x, y),
                    mass: m,
                }),
            }
        }
        ComplexAtomicMeasure { atoms }
    }

    /// Disintegration over the sphere of units: `nu` is the pushforward of
    /// the non-real atoms to their units, each fiber holds the atoms of one
    /// half slice `B_I^+`. Fibers appear in order of first occurrence.
    pub fn disintegrate(&self) -> Disintegration {
        let (real, rest) = self.decompose_real();
        let mut fibers: Vec<Fiber> = Vec::new();
        for a in rest.atoms {
            let unit = a.point.unit();
            match fibers.iter_mut().find(|f| f.unit == unit) {
                Some(f) => f.atoms.push((a.point.x(), a.point.y(), a.mass)),
                None => fibers.push(Fiber {
                    unit,
                    atoms: vec![(a.point.x(), a.point.y(), a.mass)],
                }),
            }
        }
        Disintegration { real, fibers }
    }
}

/// Atoms of one half slice `B_I^+` as `(x, y, mass)`; the fiber measures are
/// kept unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Fiber {
    pub unit: ImaginaryUnit,
    pub atoms: Vec<(f64, f64, f64)>,
}

impl Fiber {
    /// `nu({I})`.
    pub fn mass(&self) -> f64 {
        let m: Vec<f64> = self.atoms.iter().map(|a| a.2).collect();
        pairwise_sum(&m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Disintegration {
    pub real: AtomicMeasure,
    pub fibers: Vec<Fiber>,
}

impl Disintegration {
    /// `int_R phi dmu_R + int_S int_{B_I^+} phi dmu_I^+ dnu(I)`.
    pub fn integrate<F: Fn(&Quaternion) -> f64>(&self, phi: F) -> f64 {
        let real = self.real.integrate(|a| phi(&a.point.to_quaternion()));
        let per_fiber: Vec<f64> = self
            .fibers
            .iter()
            .map(|f| {
                let v: Vec<f64> = f
                    .atoms
                    .iter()
                    .map(|&(x, y, m)| m * phi(&f.unit.point(x, y)))
                    .collect();
                pairwise_sum(&v)
            })
            .collect();
        real + pairwise_sum(&per_fiber)
    }

    /// Pushforward of the non-real mass to the sphere.
    pub fn sphere_marginal(&self) -> Vec<(ImaginaryUnit, f64)> {
        self.fibers.iter().map(|f| (f.unit, f.mass())).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexAtom {
    pub z: Complex64,
    pub mass: f64,
}

#[derive(Serialize, Deserialize)]
struct ComplexAtomRecord {
    re: f64,
    im: f64,
    mass: f64,
}

/// A finite nonnegative measure on `D` made of weighted atoms.
///
/// JSON: `{"atoms":[{"re":..,"im":..,"mass":..}, ..]}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "MeasureRecord<ComplexAtomRecord>",
    into = "MeasureRecord<ComplexAtomRecord>"
)]
pub struct ComplexAtomicMeasure {
    atoms: Vec<ComplexAtom>,
}

impl TryFrom<MeasureRecord<ComplexAtomRecord>> for ComplexAtomicMeasure {
    type Error = Error;
    fn try_from(rec: MeasureRecord<ComplexAtomRecord>) -> Result<Self> {
        ComplexAtomicMeasure::new(
            rec.atoms
                .into_iter()
                .map(|a| ComplexAtom {
                    z: Complex64::new(a.re, a.im),
                    mass: a.mass,
                })
                .collect(),
        )
    }
}

impl From<ComplexAtomicMeasure> for MeasureRecord<ComplexAtomRecord> {
    fn from(m: ComplexAtomicMeasure) -> Self {
        MeasureRecord {
            atoms: m
                .atoms
                .into_iter()
                .map(|a| ComplexAtomRecord {
                    re: a.z.re,
                    im: a.z.im,
                    mass: a.mass,
                })
                .collect(),
        }
    }
}

impl ComplexAtomicMeasure {
    pub fn new(atoms: Vec<ComplexAtom>) -> Result<Self> {
        for a in &atoms {
            check_mass(a.mass)?;
            if a.z.norm().is_nan() || a.z.norm() >= 1.0 {
                return Err(Error::OutsideBall { modulus: a.z.norm() });
            }
        }
        Ok(ComplexAtomicMeasure { atoms })
    }

    pub fn empty() -> Self {
        ComplexAtomicMeasure::default()
    }

    pub fn atoms(&self) -> &[ComplexAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        let m: Vec<f64> = self.atoms.iter().map(|a| a.mass).collect();
        pairwise_sum(&m)
    }

    pub fn combine(&self, other: &ComplexAtomicMeasure) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        ComplexAtomicMeasure { atoms }
    }

    /// `nu_hat(E) = nu(conj E)`.
    pub fn reflect(&self) -> Self {
        ComplexAtomicMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| ComplexAtom {
                    z: a.z.conj(),
                    mass: a.mass,
                })
                .collect(),
        }
    }

    pub fn integrate<F: Fn(&ComplexAtom) -> f64>(&self, phi: F) -> f64 {
        let v: Vec<f64> = self.atoms.iter().map(|a| a.mass * phi(a)).collect();
        pairwise_sum(&v)
    }

    /// `int |F|^p dnu`.
    pub fn lp_integral(&self, f: &ComplexSeries, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.integrate(|a| abs_pow(f.eval(a.z).norm(), p)))
    }
}

pub fn decompose_real(mu: &AtomicMeasure) -> (AtomicMeasure, AtomicMeasure) {
    mu.decompose_real()
}

pub fn project_slice(mu: &AtomicMeasure) -> ComplexAtomicMeasure {
    mu.project_slice()
}

pub fn reflect(nu: &ComplexAtomicMeasure) -> ComplexAtomicMeasure {
    nu.reflect()
}

/// `(int |f|^p dmu)^(1/p)`.
pub fn lp_norm_quat(f: &SliceSeries, mu: &AtomicMeasure, p: f64) -> Result<f64> {
    Ok(mu.lp_integral(f, p)?.powf(1.0 / p))
}

/// `(int |F|^p dnu)^(1/p)`.
pub fn lp_norm_complex(f: &ComplexSeries, nu: &ComplexAtomicMeasure, p: f64) -> Result<f64> {
    Ok(nu.lp_integral(f, p)?.powf(1.0 / p))
}
