//! Finite families of test functions for embedding-constant estimates.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::generators::{random_complex_series, random_slice_series, rng};
use crate::measures::AtomicMeasure;
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::series::{ComplexSeries, SliceSeries};
use crate::spaces::SpaceSpec;

fn default_degree() -> usize {
    16
}
fn default_random_quat() -> usize {
    48
}
fn default_random_complex() -> usize {
    48
}
fn default_probes() -> usize {
    16
}

/// Sizes of the seeded family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_random_quat")]
    pub random_quat: usize,
    #[serde(default = "default_random_complex")]
    pub random_complex: usize,
    /// Number of atoms of the measure used as kernel probe points.
    #[serde(default = "default_probes")]
    pub probes: usize,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            degree: default_degree(),
            random_quat: default_random_quat(),
            random_complex: default_random_complex(),
            probes: default_probes(),
        }
    }
}

/// Quaternionic and complex members, closed under splitting.
///
/// Every quaternionic member `f = F + G j` on `B_i` contributes `F1, F2, G1, G2`
/// (real and imaginary coefficient parts) to the complex side, and every
/// complex member contributes the slice-preserving extensions of `F1, F2` to
/// the quaternionic side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestFamily {
    pub quaternionic: Vec<SliceSeries>,
    pub complex: Vec<ComplexSeries>,
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

fn kernel_quat(w: &Quaternion, degree: usize, spec: &SpaceSpec) -> SliceSeries {
    let wc = w.conj();
    let mut pow = Quaternion::ONE;
    let mut coeffs = Vec::with_capacity(degree + 1);
    for n in 0..=degree {
        coeffs.push(pow.scale(1.0 / spec.kernel_weight(n)));
        pow = pow * wc;
    }
    SliceSeries::new(coeffs)
}

fn kernel_complex(z: Complex64, degree: usize, spec: &SpaceSpec) -> ComplexSeries {
    let zc = z.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(degree + 1);
    for n in 0..=degree {
        coeffs.push(pow / spec.kernel_weight(n));
        pow *= zc;
    }
    ComplexSeries::new(coeffs)
}

/// Evenly spaced indices into `0..len`, at most `count` of them.
fn probe_indices(len: usize, count: usize) -> Vec<usize> {
    if len == 0 || count == 0 {
        return Vec::new();
    }
    let count = count.min(len);
    let mut idx: Vec<usize> = (0..count).map(|k| k * len / count).collect();
    idx.dedup();
    idx
}

impl TestFamily {
    /// Seeded family: monomials, random polynomials, kernel-like functions
    /// at atoms of `mu`, then closed under splitting.
    pub fn generate(cfg: &FamilyConfig, spec: &SpaceSpec, mu: &AtomicMeasure, seed: u64) -> Self {
        let mut rng = rng(seed);
        let d = cfg.degree;
        let mut quat: Vec<SliceSeries> = Vec::new();
        let mut cplx: Vec<ComplexSeries> = Vec::new();

        for n in 0..=d {
            quat.push(SliceSeries::monomial(n));
            cplx.push(ComplexSeries::monomial(n));
        }
        for _ in 0..cfg.random_quat {
            let deg = rng.random_range(0..=d);
            quat.push(random_slice_series(&mut rng, deg));
        }
        for _ in 0..cfg.random_complex {
            let deg = rng.random_range(0..=d);
            cplx.push(random_complex_series(&mut rng, deg));
        }
        let nu = mu.project_slice();
        for k in probe_indices(mu.len(), cfg.probes) {
            quat.push(kernel_quat(&mu.atoms()[k].point.to_quaternion(), d, spec));
        }
        for k in probe_indices(nu.len(), cfg.probes) {
            cplx.push(kernel_complex(nu.atoms()[k].z, d, spec));
        }
        TestFamily {
            quaternionic: quat,
            complex: cplx,
        }
        .closed()
    }

    /// Adds the splitting components and their extensions, drops zero and
    /// duplicate members.
    pub fn closed(self) -> Self {
        let mut quat: Vec<SliceSeries> = Vec::new();
        let mut cplx: Vec<ComplexSeries> = Vec::new();
        let add_complex_parts = |f: &ComplexSeries, quat: &mut Vec<SliceSeries>, cplx: &mut Vec<ComplexSeries>| {
            for part in [f.real_part(), f.imag_part()] {
                if !part.is_zero() {
                    push_unique(quat, SliceSeries::extend_real(&part));
                    push_unique(cplx, part);
                }
            }
        };
        for f in &self.quaternionic {
            if f.is_zero() {
                continue;
            }
            push_unique(&mut quat, f.clone());
            let (ff, gg) = f
                .split(&ImaginaryUnit::I, &ImaginaryUnit::J)
                .expect("i and j are orthonormal");
            add_complex_parts(&ff, &mut quat, &mut cplx);
            add_complex_parts(&gg, &mut quat, &mut cplx);
        }
        for f in &self.complex {
            if f.is_zero() {
                continue;
            }
            push_unique(&mut cplx, f.clone());
            add_complex_parts(f, &mut quat, &mut cplx);
        }
        TestFamily {
            quaternionic: quat,
            complex: cplx,
        }
    }

    pub fn len(&self) -> usize {
        self.quaternionic.len() + self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slice-preserving quaternionic members and real-coefficient complex
    /// members.
    pub fn real_subfamily(&self) -> TestFamily {
        TestFamily {
            quaternionic: self
                .quaternionic
                .iter()
                .filter(|f| f.is_slice_preserving())
                .cloned()
                .collect(),
            complex: self
                .complex
                .iter()
                .filter(|f| f.has_real_coefficients())
                .cloned()
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_measure;
    use crate::spaces::Preset;

    fn family() -> TestFamily {
        let mu = random_measure(&mut rng(5), 40, 0.9);
        TestFamily::generate(&FamilyConfig::default(), &Preset::Hardy2.spec(16), &mu, 11)
    }

    #[test]
    fn default_family_is_large_and_seeded() {
        let a = family();
        assert!(a.len() >= 200, "size {}", a.len());
        assert_eq!(a, family());
        assert!(a.quaternionic.iter().all(|f| !f.is_zero()));
        assert!(a.complex.iter().all(|f| !f.is_zero()));
    }

    #[test]
    fn family_is_closed() {
        let fam = family();
        for f in &fam.quaternionic {
            let (ff, gg) = f.split(&ImaginaryUnit::I, &ImaginaryUnit::J).unwrap();
            for part in [ff.real_part(), ff.imag_part(), gg.real_part(), gg.imag_part()] {
                if !part.is_zero() {
                    assert!(fam.complex.contains(&part));
                }
            }
        }
        for f in &fam.complex {
            for part in [f.real_part(), f.imag_part()] {
                if !part.is_zero() {
                    assert!(fam.quaternionic.contains(&SliceSeries::extend_real(&part)));
                }
            }
        }
    }

    #[test]
    fn real_subfamilies_correspond() {
        let real = family().real_subfamily();
        assert_eq!(real.quaternionic.len(), real.complex.len());
        for f in &real.complex {
            assert!(real.quaternionic.contains(&SliceSeries::extend_real(f)));
        }
    }

    #[test]
    fn kernel_coefficients() {
        let spec = Preset::Bergman.spec(4);
        let w = Quaternion::new(0.5, 0.0, 0.0, 0.0);
        let k = kernel_quat(&w, 2, &spec);
        assert_eq!(k.coeffs()[2], Quaternion::real(0.25 * 3.0));
        let kc = kernel_complex(Complex64::new(0.0, 0.5), 1, &spec);
        assert_eq!(kc.coeffs()[1], Complex64::new(0.0, -1.0));
    }
}
