//! Seeded generators for measures, units and series.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` using uniform
//! draws only, so a seed pins the output across platforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::quaternion::{ImaginaryUnit, Quaternion, SlicePoint};
use crate::series::{ComplexSeries, SliceSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform unit on the sphere by rejection from the cube.
pub fn random_unit<R: Rng>(rng: &mut R) -> ImaginaryUnit {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return ImaginaryUnit::normalized(v).expect("nonzero vector");
        }
    }
}

pub fn random_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

pub fn random_slice_series<R: Rng>(rng: &mut R, degree: usize) -> SliceSeries {
    SliceSeries::new((0..=degree).map(|_| random_quaternion(rng)).collect())
}

pub fn random_real_series<R: Rng>(rng: &mut R, degree: usize) -> SliceSeries {
    SliceSeries::new(
        (0..=degree)
            .map(|_| Quaternion::real(rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

pub fn random_complex_series<R: Rng>(rng: &mut R, degree: usize) -> ComplexSeries {
    ComplexSeries::new(
        (0..=degree)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

/// Random atomic measure with `n` atoms of modulus below `max_modulus`.
///
/// Every fifth atom sits on the real axis and every seventh reuses the
/// previous atom's `(x, y)` on a fresh unit, so sphere fibers carry more than
/// one atom.
pub fn random_measure<R: Rng>(rng: &mut R, n: usize, max_modulus: f64) -> AtomicMeasure {
    let mut mu = AtomicMeasure::empty();
    let mut last: Option<(f64, f64)> = None;
    for k in 0..n {
        let unit = random_unit(rng);
        let (x, y) = match last {
            Some(xy) if k % 7 == 6 => xy,
            _ => {
                let rho = max_modulus * rng.random_range(0.0f64..1.0).sqrt();
                let alpha = if k % 5 == 4 {
                    if rng.random_bool(0.5) { 0.0 } else { PI }
                } else {
                    rng.random_range(0.0..PI)
                };
                (rho * alpha.cos(), rho * alpha.sin())
            }
        };
        let mass = rng.random_range(0.05..1.0);
        mu.push(SlicePoint::new(x, y, unit).expect("inside the ball"), mass)
            .expect("positive mass");
        last = Some((x, y));
    }
    mu
}

/// Mass profile of a dyadic ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayWeights {
    /// `2^-k`: Carleson, not vanishing.
    Geometric2,
    /// `k 2^-k`: not Carleson as the depth grows.
    Linear2,
    /// `4^-k`: vanishing Carleson.
    Geometric4,
}

impl RayWeights {
    pub fn mass(&self, k: usize) -> f64 {
        let k_f = k as f64;
        match self {
            RayWeights::Geometric2 => 0.5f64.powi(k as i32),
            RayWeights::Linear2 => k_f * 0.5f64.powi(k as i32),
            RayWeights::Geometric4 => 0.25f64.powi(k as i32),
        }
    }
}

fn default_angle() -> f64 {
    0.0
}

fn default_ray_unit() -> ImaginaryUnit {
    ImaginaryUnit::I
}

/// Atoms at modulus `1 - 2^-k`, `k = 1..=depth`, along one ray.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicRay {
    pub weights: RayWeights,
    pub depth: usize,
    #[serde(default = "default_angle")]
    pub angle: f64,
    #[serde(default = "default_ray_unit", rename = "I")]
    pub unit: ImaginaryUnit,
}

impl DyadicRay {
    pub fn new(weights: RayWeights, depth: usize) -> Self {
        DyadicRay {
            weights,
            depth,
            angle: 0.0,
            unit: ImaginaryUnit::I,
        }
    }

    pub fn measure(&self) -> Result<AtomicMeasure> {
        if self.depth == 0 || self.depth > 52 {
            return Err(Error::Config(format!(
                "ray depth {} outside 1..=52",
                self.depth
            )));
        }
        if !(0.0..=PI).contains(&self.angle) {
            return Err(Error::Config(format!("ray angle {} outside [0, pi]", self.angle)));
        }
        let mut mu = AtomicMeasure::empty();
        for k in 1..=self.depth {
            let rho = 1.0 - 0.5f64.powi(k as i32);
            mu.push(SlicePoint::polar(rho, self.angle, self.unit)?, self.weights.mass(k))?;
        }
        Ok(mu)
    }

    /// Same ray truncated at another depth.
    pub fn with_depth(&self, depth: usize) -> Self {
        DyadicRay { depth, ..self.clone() }
    }
}

/// Shells `1 - 2^-k`, `k = 1..=count`.
pub fn dyadic_shells(count: usize) -> Vec<f64> {
    (1..=count).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_reproducible() {
        let a = random_measure(&mut rng(42), 50, 0.95);
        let b = random_measure(&mut rng(42), 50, 0.95);
        assert_eq!(a, b);
        let c = random_measure(&mut rng(43), 50, 0.95);
        assert_ne!(a, c);
        assert!(a.atoms().iter().all(|x| x.point.modulus() < 0.95 + 1e-15));
        assert!(a.atoms().iter().any(|x| x.point.is_real()));
        assert!(a.project_slice().len() < a.len());
    }

    #[test]
    fn dyadic_ray_atoms() {
        let mu = DyadicRay::new(RayWeights::Geometric2, 20).measure().unwrap();
        assert_eq!(mu.len(), 20);
        for (k, a) in mu.atoms().iter().enumerate() {
            let k = k as i32 + 1;
            assert_eq!(1.0 - a.point.modulus(), 0.5f64.powi(k));
            assert_eq!(a.mass, 0.5f64.powi(k));
        }
        assert_eq!(RayWeights::Linear2.mass(3), 3.0 / 8.0);
        assert_eq!(RayWeights::Geometric4.mass(2), 1.0 / 16.0);
        assert!(DyadicRay::new(RayWeights::Geometric2, 0).measure().is_err());
        assert_eq!(dyadic_shells(3), vec![0.5, 0.75, 0.875]);
    }

    #[test]
    fn ray_json() {
        let r: DyadicRay = serde_json::from_str(r#"{"weights":"linear2","depth":12}"#).unwrap();
        assert_eq!(r, DyadicRay::new(RayWeights::Linear2, 12));
    }
}
