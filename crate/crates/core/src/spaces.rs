//! Norms of the base spaces `X_D` on the disc and of their quaternionic lifts
//! `X_B`.
//!
//! The slice norm of `f` on `B_I` is `sqrt(|F|^2 + |G|^2)` where `f = F + GJ`
//! is the splitting with respect to `J = orthogonal_unit(I)`. The lift norm is
//! the supremum of slice norms over the sphere of imaginary units; for
//! coefficient-weighted Hilbert spaces it has the closed form
//! `sqrt(sum c_n |a_n|^2)`, otherwise it is estimated from below on a fixed
//! lattice of units.

use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{abs_pow, pairwise_sum};
use crate::quaternion::{orthogonal_unit, ImaginaryUnit};
use crate::series::{ComplexSeries, SliceSeries};

/// Lower bound on `c_n (n+1)^POLY_DECAY_ALLOWANCE`, the finite stand-in for
/// `liminf c_n^(1/n) >= 1`: weights may decay polynomially, not geometrically.
pub const POLY_DECAY_ALLOWANCE: f64 = 4.0;

/// Slack on the geometric rate in the weight sanity check.
pub const WEIGHT_RATE_SLACK: f64 = 1e-9;

/// Size of the Fibonacci lattice used for the supremum over the sphere.
pub const DEFAULT_SPHERE_SAMPLES: usize = 64;

/// Relative slack allowed when a sandwich bound is checked in floating point.
pub const SANDWICH_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKind {
    /// `|F|^2 = sum c_n |alpha_n|^2`.
    CoefficientWeighted { weights: Vec<f64> },
    /// `|F|^p = lim_{r -> 1} (1/2pi) int |F(re^{it})|^p dt`.
    Hardy { p: f64 },
    /// `|F|^p = |F(0)|^p + int_D |F'(z)|^p (1 - |z|^2)^alpha dA(z)`.
    Besov { p: f64, alpha: f64 },
}

fn default_j_norm() -> f64 {
    1.0
}

/// A base space `X_D` together with the operator norm of `J F = conj(F(conj z))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    #[serde(flatten)]
    pub kind: SpaceKind,
    #[serde(default = "default_j_norm")]
    pub j_norm: f64,
}

/// Named coefficient-weighted spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `c_n = 1`.
    Hardy2,
    /// `c_n = 1/(n+1)`: area measure normalized to 1.
    Bergman,
    /// `c_0 = 1`, `c_n = n`: `|F(0)|^2 + (1/pi) int |F'|^2 dA`.
    Dirichlet,
}

impl Preset {
    pub fn weight(&self, n: usize) -> f64 {
        match self {
            Preset::Hardy2 => 1.0,
            Preset::Bergman => 1.0 / (n as f64 + 1.0),
            Preset::Dirichlet => {
                if n == 0 {
                    1.0
                } else {
                    n as f64
                }
            }
        }
    }

    pub fn spec(&self, degree: usize) -> SpaceSpec {
        SpaceSpec::coefficient_weighted((0..=degree).map(|n| self.weight(n)).collect())
    }

    pub const ALL: [Preset; 3] = [Preset::Hardy2, Preset::Bergman, Preset::Dirichlet];
}

impl SpaceSpec {
    pub fn coefficient_weighted(weights: Vec<f64>) -> Self {
        SpaceSpec {
            kind: SpaceKind::CoefficientWeighted { weights },
            j_norm: 1.0,
        }
    }

    pub fn hardy(p: f64) -> Self {
        SpaceSpec {
            kind: SpaceKind::Hardy { p },
            j_norm: 1.0,
        }
    }

    pub fn besov(p: f64, alpha: f64) -> Self {
        SpaceSpec {
            kind: SpaceKind::Besov { p, alpha },
            j_norm: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j_norm.is_finite() && self.j_norm >= 1.0) {
            return Err(Error::InvalidSpace(format!(
                "j_norm must be a finite real >= 1, got {}",
                self.j_norm
            )));
        }
        match &self.kind {
            SpaceKind::CoefficientWeighted { weights } => {
                if weights.is_empty() {
                    return Err(Error::InvalidSpace("empty weight list".into()));
                }
                for (n, &c) in weights.iter().enumerate() {
                    if !(c.is_finite() && c > 0.0) {
                        return Err(Error::InvalidSpace(format!("weight c_{n} = {c} is not positive")));
                    }
                    if n >= 1 {
                        let floor = (n as f64 + 1.0).powf(-POLY_DECAY_ALLOWANCE)
                            * (1.0 - WEIGHT_RATE_SLACK).powi(n as i32);
                        if c < floor {
                            return Err(Error::InvalidSpace(format!(
                                "weight c_{n} = {c} decays geometrically (liminf c_n^(1/n) < 1)"
                            )));
                        }
                    }
                }
            }
            SpaceKind::Hardy { p } => check_exponent(*p)?,
            SpaceKind::Besov { p, alpha } => {
                check_exponent(*p)?;
                if !(alpha.is_finite() && *alpha > -1.0) {
                    return Err(Error::InvalidSpace(format!("alpha = {alpha} must exceed -1")));
                }
                if *p < alpha + 1.0 {
                    return Err(Error::InvalidSpace(format!(
                        "Besov exponent p = {p} must satisfy p >= alpha + 1 = {}",
                        alpha + 1.0
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_coefficient_weighted(&self) -> bool {
        matches!(self.kind, SpaceKind::CoefficientWeighted { .. })
    }

    /// Weight `c_n` of a coefficient-weighted space; `1` for the other kinds,
    /// where it only shapes kernel-like test functions.
    pub fn kernel_weight(&self, n: usize) -> f64 {
        match &self.kind {
            SpaceKind::CoefficientWeighted { weights } => {
                weights.get(n).copied().unwrap_or(*weights.last().unwrap_or(&1.0))
            }
            _ => 1.0,
        }
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn default_n_theta() -> usize {
    4096
}
fn default_radii() -> Vec<f64> {
    vec![0.9, 0.99, 0.999, 0.9999]
}
fn default_n_r() -> usize {
    256
}
fn default_n_phi() -> usize {
    1024
}

/// Sample counts for the Hardy circle means and the Besov area integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_n_r")]
    pub n_r: usize,
    #[serde(default = "default_n_phi")]
    pub n_phi: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            n_theta: default_n_theta(),
            radii: default_radii(),
            n_r: default_n_r(),
            n_phi: default_n_phi(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n_theta", self.n_theta), ("n_r", self.n_r), ("n_phi", self.n_phi)] {
            if v < 8 {
                return Err(Error::InvalidQuadrature(format!("{name} = {v} is below 8")));
            }
        }
        if self.radii.is_empty() {
            return Err(Error::InvalidQuadrature("no radii".into()));
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::InvalidQuadrature("radii must lie in (0, 1)".into()));
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidQuadrature("radii must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// `(1/n) sum_k |F(r e^{2 pi i k/n})|^p`.
pub fn circle_mean(f: &ComplexSeries, p: f64, r: f64, n_theta: usize) -> f64 {
    let values: Vec<f64> = (0..n_theta)
        .map(|k| {
            let t = TAU * k as f64 / n_theta as f64;
            abs_pow(f.eval(Complex64::from_polar(r, t)).norm(), p)
        })
        .collect();
    pairwise_sum(&values) / n_theta as f64
}

/// Hardy integral means at the quadrature radii and on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyProfile {
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    /// Mean on `|z| = 1`; the radial limit for polynomials.
    pub boundary_mean: f64,
    /// Whether the means are nondecreasing in `r` up to and including the
    /// boundary mean.
    pub monotone: bool,
}

pub fn hardy_profile(f: &ComplexSeries, p: f64, quad: &QuadratureSpec) -> Result<HardyProfile> {
    check_exponent(p)?;
    quad.validate()?;
    let means: Vec<f64> = quad
        .radii
        .iter()
        .map(|&r| circle_mean(f, p, r, quad.n_theta))
        .collect();
    let boundary_mean = circle_mean(f, p, 1.0, quad.n_theta);
    let monotone = means
        .iter()
        .chain(std::iter::once(&boundary_mean))
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| *w[1] >= *w[0] * (1.0 - 1e-12));
    Ok(HardyProfile {
        radii: quad.radii.clone(),
        means,
        boundary_mean,
        monotone,
    })
}

fn gauss_legendre_unit_interval(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("n_r >= 8"));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// `int_D |F'(z)|^p (1 - |z|^2)^alpha dA(z)`: Gauss-Legendre in the radius
/// times the trapezoid rule in the angle.
pub fn besov_area_integral(f: &ComplexSeries, p: f64, alpha: f64, quad: &QuadratureSpec) -> f64 {
    let df = f.derivative();
    let dphi = TAU / quad.n_phi as f64;
    let mut values = Vec::with_capacity(quad.n_r * quad.n_phi);
    for (r, w) in gauss_legendre_unit_interval(quad.n_r) {
        let radial = w * r * (1.0 - r * r).powf(alpha) * dphi;
        for k in 0..quad.n_phi {
            let z = Complex64::from_polar(r, dphi * k as f64);
            values.push(radial * abs_pow(df.eval(z).norm(), p));
        }
    }
    pairwise_sum(&values)
}

/// Norm of `F` in the base space `X_D`.
pub fn complex_norm(f: &ComplexSeries, spec: &SpaceSpec, quad: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    match &spec.kind {
        SpaceKind::CoefficientWeighted { weights } => {
            let mut terms = Vec::with_capacity(f.coeffs().len());
            for (n, a) in f.coeffs().iter().enumerate() {
                let m = a.norm_sqr();
                match weights.get(n) {
                    Some(c) => terms.push(c * m),
                    None if m == 0.0 => {}
                    None => {
                        return Err(Error::InvalidSpace(format!(
                            "series degree {} exceeds the {} supplied weights",
                            f.degree(),
                            weights.len()
                        )))
                    }
                }
            }
            Ok(pairwise_sum(&terms).sqrt())
        }
        SpaceKind::Hardy { p } => {
            quad.validate()?;
            Ok(circle_mean(f, *p, 1.0, quad.n_theta).powf(1.0 / p))
        }
        SpaceKind::Besov { p, alpha } => {
            quad.validate()?;
            let at_zero = abs_pow(f.coeffs()[0].norm(), *p);
            Ok((at_zero + besov_area_integral(f, *p, *alpha, quad)).powf(1.0 / p))
        }
    }
}

/// Splitting `f = F + GJ` on `B_I` with `J = orthogonal_unit(I)`.
pub fn slice_split(f: &SliceSeries, unit: &ImaginaryUnit) -> (ComplexSeries, ComplexSeries) {
    f.split(unit, &orthogonal_unit(unit))
        .expect("orthogonal_unit returns an orthonormal partner")
}

/// `|f|_{X_{B_I}} = sqrt(|F|^2 + |G|^2)`.
pub fn slice_norm(
    f: &SliceSeries,
    unit: &ImaginaryUnit,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (ff, gg) = slice_split(f, unit);
    let a = complex_norm(&ff, spec, quad)?;
    let b = if gg.is_zero() { 0.0 } else { complex_norm(&gg, spec, quad)? };
    Ok(a.hypot(b))
}

/// The six axis units followed by a Fibonacci lattice of `n` units.
pub fn sphere_samples(n: usize) -> Vec<ImaginaryUnit> {
    let mut units = vec![
        ImaginaryUnit::I,
        ImaginaryUnit::J,
        ImaginaryUnit::K,
        ImaginaryUnit::I.negated(),
        ImaginaryUnit::J.negated(),
        ImaginaryUnit::K.negated(),
    ];
    let golden = PI * (3.0 - 5f64.sqrt());
    for k in 0..n {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let phi = golden * k as f64;
        units.push(
            ImaginaryUnit::normalized([rho * phi.cos(), rho * phi.sin(), z])
                .expect("lattice point is on the sphere"),
        );
    }
    units
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftNorm {
    pub value: f64,
    /// Unit where the sampled maximum was attained (`i` for the closed form).
    pub argmax: ImaginaryUnit,
    /// `true` for the exact closed form; `false` when `value` is the maximum
    /// over sampled slices, a lower bound for the supremum.
    pub exact: bool,
}

/// Maximum of slice norms over the given units.
pub fn lift_norm_over(
    f: &SliceSeries,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    units: &[ImaginaryUnit],
) -> Result<LiftNorm> {
    if units.is_empty() {
        return Err(Error::Config("no sphere samples".into()));
    }
    let norms: Vec<f64> = units
        .par_iter()
        .map(|u| slice_norm(f, u, spec, quad))
        .collect::<Result<_>>()?;
    let (idx, value) = norms
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
    Ok(LiftNorm {
        value,
        argmax: units[idx],
        exact: false,
    })
}

/// Norm of `f` in the lift `X_B`.
pub fn lift_norm(
    f: &SliceSeries,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    sphere_samples_count: usize,
) -> Result<LiftNorm> {
    spec.validate()?;
    if sphere_samples_count == 0 {
        return Err(Error::Config("sphere_samples must be at least 1".into()));
    }
    if let SpaceKind::CoefficientWeighted { weights } = &spec.kind {
        let mut terms = Vec::with_capacity(f.coeffs().len());
        for (n, a) in f.coeffs().iter().enumerate() {
            let m = a.norm_sqr();
            match weights.get(n) {
                Some(c) => terms.push(c * m),
                None if m == 0.0 => {}
                None => {
                    return Err(Error::InvalidSpace(format!(
                        "series degree {} exceeds the {} supplied weights",
                        f.degree(),
                        weights.len()
                    )))
                }
            }
        }
        return Ok(LiftNorm {
            value: pairwise_sum(&terms).sqrt(),
            argmax: ImaginaryUnit::I,
            exact: true,
        });
    }
    if f.is_slice_preserving() {
        return Ok(LiftNorm {
            value: slice_norm(f, &ImaginaryUnit::I, spec, quad)?,
            argmax: ImaginaryUnit::I,
            exact: true,
        });
    }
    lift_norm_over(f, spec, quad, &sphere_samples(sphere_samples_count))
}

/// `|f|_{B_I} <= |f|_B <= 2(1 + |J|) |f|_{B_I}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub slice_norm: f64,
    pub lift_norm: f64,
    /// `2 (1 + |J|)`.
    pub constant: f64,
    /// `|f|_{B_I} / |f|_B`, at most 1.
    pub lower_ratio: f64,
    /// `|f|_B / |f|_{B_I}`, at most `constant`.
    pub upper_ratio: f64,
    pub pass: bool,
}

pub fn sandwich_check(
    f: &SliceSeries,
    unit: &ImaginaryUnit,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    sphere_samples_count: usize,
) -> Result<SandwichReport> {
    let s = slice_norm(f, unit, spec, quad)?;
    let mut lift = lift_norm(f, spec, quad, sphere_samples_count)?;
    if !lift.exact {
        // the supremum runs over every unit, `unit` included
        if s > lift.value {
            lift.value = s;
            lift.argmax = *unit;
        }
    }
    let constant = 2.0 * (1.0 + spec.j_norm);
    let (lower_ratio, upper_ratio) = if s == 0.0 && lift.value == 0.0 {
        (1.0, 1.0)
    } else {
        (s / lift.value, lift.value / s)
    };
    let pass = lower_ratio <= 1.0 + SANDWICH_SLACK && upper_ratio <= constant * (1.0 + SANDWICH_SLACK);
    Ok(SandwichReport {
        slice_norm: s,
        lift_norm: lift.value,
        constant,
        lower_ratio,
        upper_ratio,
        pass,
    })
}

/// `(1/2pi int |f(e^{It})|^p dt)^(1/p)` computed from `|f|` itself rather
/// than from the splitting components.
pub fn direct_slice_hardy_norm(f: &SliceSeries, unit: &ImaginaryUnit, p: f64, n_theta: usize) -> Result<f64> {
    check_exponent(p)?;
    let values: Vec<f64> = (0..n_theta)
        .map(|k| {
            let t = TAU * k as f64 / n_theta as f64;
            abs_pow(f.eval_on_slice(t.cos(), t.sin(), unit).norm(), p)
        })
        .collect();
    Ok((pairwise_sum(&values) / n_theta as f64).powf(1.0 / p))
}

/// Two-sided constants `(2^-e, 2^e)`, `e = |1/2 - 1/p|`, comparing the direct
/// Hardy slice norm with `sqrt(|F|^2 + |G|^2)`.
pub fn hardy_comparability_bounds(p: f64) -> (f64, f64) {
    let e = (0.5 - 1.0 / p).abs();
    (2f64.powf(-e), 2f64.powf(e))
}
