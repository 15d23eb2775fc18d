//! Symmetric Carleson boxes, box-ratio scans and embedding-constant
//! estimates.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::TestFamily;
use crate::generators::DyadicRay;
use crate::measures::{lp_norm_complex, lp_norm_quat, ComplexAtomicMeasure, AtomicMeasure};
use crate::numerics::rel_diff;
use crate::quaternion::SlicePoint;
use crate::series::{ComplexSeries, SliceSeries};
use crate::spaces::{check_exponent, complex_norm, lift_norm, QuadratureSpec, SpaceSpec};

/// Relative slack allowed on both inequalities of the constant chain.
pub const CHAIN_SLACK: f64 = 1e-12;
/// Tolerance on `|c_quat - c_cplx|` over the real-coefficient subfamily.
pub const REAL_SUBFAMILY_TOLERANCE: f64 = 1e-12;

/// Box `S_I(t, r)` around the angle `t ∈ [0, pi]`, read on every slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBox {
    pub t: f64,
    pub r: f64,
}

impl SymmetricBox {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&t) || !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidScan(format!("box (t={t}, r={r}) outside [0,pi]x(0,1)")));
        }
        Ok(SymmetricBox { t, r })
    }

    /// Box with apex height `1 - |q|` over the argument of `q`.
    pub fn from_point(q: &SlicePoint) -> Result<Self> {
        SymmetricBox::new(q.angle(), q.modulus())
    }

    pub fn side(&self) -> f64 {
        1.0 - self.r
    }

    fn contains_polar(&self, rho: f64, alpha: f64) -> bool {
        let h = 1.0 - rho;
        let d = (alpha - self.t).abs().min(alpha + self.t).min(2.0 * PI - alpha - self.t);
        h > 0.0 && h <= self.side() && d <= self.side()
    }

    /// Membership of `x + yI`, `y >= 0`: the angle test on `B_I^+` or on its
    /// mirror `B_{-I}^+`.
    pub fn contains(&self, q: &SlicePoint) -> bool {
        self.contains_polar(q.modulus(), q.angle())
    }

    /// `mu(S(t, r))`.
    pub fn mass(&self, mu: &AtomicMeasure) -> f64 {
        mu.integrate(|a| if self.contains(&a.point) { 1.0 } else { 0.0 })
    }

    /// Mass of the planar box `{z : 0 < 1 - |z| <= 1 - r, dist(arg z, t) <= 1 - r}`
    /// with circular angular distance.
    pub fn complex_mass(&self, nu: &ComplexAtomicMeasure) -> f64 {
        nu.integrate(|a| {
            let h = 1.0 - a.z.norm();
            let d = (a.z.arg() - self.t).abs();
            let d = d.min(2.0 * PI - d);
            if h > 0.0 && h <= self.side() && d <= self.side() {
                1.0
            } else {
                0.0
            }
        })
    }
}

pub fn box_mass(mu: &AtomicMeasure, b: &SymmetricBox) -> f64 {
    b.mass(mu)
}

/// Boxes over pairwise disjoint arcs of `[0, pi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxFamily {
    pub boxes: Vec<SymmetricBox>,
}

impl BoxFamily {
    /// One box per arc `(a, b)`: `t = (a + b)/2`, `r = 1 - (b - a)/2`.
    pub fn from_arcs(arcs: &[(f64, f64)]) -> Result<Self> {
        let mut sorted = arcs.to_vec();
        for &(a, b) in &sorted {
            if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= PI) {
                return Err(Error::InvalidArcs(format!("arc ({a}, {b}) is not inside [0, pi]")));
            }
            if (b - a) / 2.0 >= 1.0 {
                return Err(Error::InvalidArcs(format!("arc ({a}, {b}) is longer than 2")));
            }
        }
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in sorted.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::InvalidArcs(format!(
                    "arcs ({}, {}) and ({}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let boxes = arcs
            .iter()
            .map(|&(a, b)| SymmetricBox::new((a + b) / 2.0, 1.0 - (b - a) / 2.0))
            .collect::<Result<_>>()?;
        Ok(BoxFamily { boxes })
    }

    /// Mass of the union of the boxes.
    pub fn union_mass(&self, mu: &AtomicMeasure) -> f64 {
        mu.integrate(|a| {
            if self.boxes.iter().any(|b| b.contains(&a.point)) {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn masses(&self, mu: &AtomicMeasure) -> Vec<f64> {
        self.boxes.iter().map(|b| b.mass(mu)).collect()
    }
}

pub fn boxes_from_arcs(arcs: &[(f64, f64)]) -> Result<BoxFamily> {
    BoxFamily::from_arcs(arcs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRatio {
    pub t: f64,
    pub r: f64,
    pub mass: f64,
    pub ratio: f64,
}

/// `mu(S(t, r)) / (1 - r)` over a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub boxes: Vec<BoxRatio>,
    pub r_levels: Vec<f64>,
    /// Maximum ratio on each shell `r`.
    pub shell_max: Vec<f64>,
    pub sup: f64,
}

impl RatioReport {
    pub fn shell_csv(&self) -> String {
        let mut out = String::from("r,shell_max\n");
        for (r, m) in self.r_levels.iter().zip(&self.shell_max) {
            out.push_str(&format!("{r},{m}\n"));
        }
        out
    }
}

fn validate_grid(t_count: usize, r_levels: &[f64]) -> Result<()> {
    if t_count < 4 {
        return Err(Error::InvalidScan(format!("t_count {t_count} below 4")));
    }
    if r_levels.is_empty() {
        return Err(Error::InvalidScan("no r levels".into()));
    }
    if r_levels.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::InvalidScan("r levels must lie in (0, 1)".into()));
    }
    if r_levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidScan("r levels must increase strictly".into()));
    }
    Ok(())
}

/// Angles `pi k / (t_count - 1)`, `k = 0..t_count`.
pub fn t_grid(t_count: usize) -> Vec<f64> {
    (0..t_count)
        .map(|k| PI * k as f64 / (t_count - 1) as f64)
        .collect()
}

fn scan_with<M: Fn(&SymmetricBox) -> f64 + Sync>(
    mass: M,
    t_count: usize,
    r_levels: &[f64],
) -> Result<RatioReport> {
    validate_grid(t_count, r_levels)?;
    let ts = t_grid(t_count);
    let rows: Vec<Vec<BoxRatio>> = r_levels
        .par_iter()
        .map(|&r| {
            ts.iter()
                .map(|&t| {
                    let b = SymmetricBox { t, r };
                    let m = mass(&b);
                    BoxRatio {
                        t,
                        r,
                        mass: m,
                        ratio: m / b.side(),
                    }
                })
                .collect()
        })
        .collect();
    let shell_max: Vec<f64> = rows
        .iter()
        .map(|row| row.iter().fold(0.0, |m: f64, b| m.max(b.ratio)))
        .collect();
    let sup = shell_max.iter().fold(0.0, |m: f64, &x| m.max(x));
    Ok(RatioReport {
        boxes: rows.into_iter().flatten().collect(),
        r_levels: r_levels.to_vec(),
        shell_max,
        sup,
    })
}

/// Box ratios of `mu` over `t_count` angles and the given shells.
pub fn ratio_scan(mu: &AtomicMeasure, t_count: usize, r_levels: &[f64]) -> Result<RatioReport> {
    scan_with(|b| b.mass(mu), t_count, r_levels)
}

/// Planar box ratios of a measure on the disc.
pub fn complex_ratio_scan(
    nu: &ComplexAtomicMeasure,
    t_count: usize,
    r_levels: &[f64],
) -> Result<RatioReport> {
    scan_with(|b| b.complex_mass(nu), t_count, r_levels)
}

fn default_last_k() -> usize {
    5
}
fn default_rel_threshold() -> f64 {
    1e-3
}

/// Decision rule for vanishing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingRule {
    /// Number of trailing shells that must be nonincreasing.
    #[serde(default = "default_last_k")]
    pub last_k: usize,
    /// Final shell maximum relative to the global maximum.
    #[serde(default = "default_rel_threshold")]
    pub rel_threshold: f64,
}

impl Default for VanishingRule {
    fn default() -> Self {
        VanishingRule {
            last_k: default_last_k(),
            rel_threshold: default_rel_threshold(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub r_levels: Vec<f64>,
    pub shell_max: Vec<f64>,
    pub rule: VanishingRule,
    pub vanishing: bool,
    /// Least-squares slope of `log shell_max` against `log (1 - r)` over the
    /// positive entries; `None` with fewer than two of them.
    pub decay_slope: Option<f64>,
}

fn log_slope(r_levels: &[f64], shell_max: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = r_levels
        .iter()
        .zip(shell_max)
        .filter(|(_, m)| **m > 0.0)
        .map(|(r, m)| ((1.0 - r).ln(), m.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

pub fn vanishing_from_ratios(report: &RatioReport, rule: &VanishingRule) -> VanishingReport {
    let sm = &report.shell_max;
    let k = rule.last_k.max(1).min(sm.len());
    let tail = &sm[sm.len() - k..];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let last = *sm.last().unwrap_or(&0.0);
    let vanishing = report.sup == 0.0 || (nonincreasing && last <= rule.rel_threshold * report.sup);
    VanishingReport {
        r_levels: report.r_levels.clone(),
        shell_max: sm.clone(),
        rule: rule.clone(),
        vanishing,
        decay_slope: log_slope(&report.r_levels, sm),
    }
}

/// Shell maxima of the box ratios and the vanishing verdict.
pub fn vanishing_scan(
    mu: &AtomicMeasure,
    t_count: usize,
    r_levels: &[f64],
    rule: &VanishingRule,
) -> Result<VanishingReport> {
    Ok(vanishing_from_ratios(&ratio_scan(mu, t_count, r_levels)?, rule))
}

/// Largest ratio over a family together with the member attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingEstimate {
    pub constant: f64,
    pub argmax: usize,
    pub members: usize,
    /// `false` when some member norm is a sampled lower bound.
    pub exact_norms: bool,
}

fn best(ratios: &[f64]) -> (usize, f64) {
    ratios
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (k, &v)| if v > b.1 { (k, v) } else { b })
}

/// `max_f |f|_{L^p(mu)} / |f|_{X_B}` over the quaternionic members.
pub fn embedding_constant_quat(
    mu: &AtomicMeasure,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    p: f64,
    family: &[SliceSeries],
    sphere_samples: usize,
) -> Result<EmbeddingEstimate> {
    check_exponent(p)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let rows: Vec<(f64, bool)> = family
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let n = lift_norm(f, spec, quad, sphere_samples)?;
            if n.value == 0.0 {
                return Err(Error::ZeroNormMember { index: k });
            }
            Ok((lp_norm_quat(f, mu, p)? / n.value, n.exact))
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let (argmax, constant) = best(&ratios);
    Ok(EmbeddingEstimate {
        constant,
        argmax,
        members: family.len(),
        exact_norms: rows.iter().all(|r| r.1),
    })
}

/// `max_F |F|_{L^p(nu)} / |F|_X` over the complex members.
pub fn embedding_constant_complex(
    nu: &ComplexAtomicMeasure,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    p: f64,
    family: &[ComplexSeries],
) -> Result<EmbeddingEstimate> {
    check_exponent(p)?;
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let ratios: Vec<f64> = family
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let n = complex_norm(f, spec, quad)?;
            if n == 0.0 {
                return Err(Error::ZeroNormMember { index: k });
            }
            Ok(lp_norm_complex(f, nu, p)? / n)
        })
        .collect::<Result<_>>()?;
    let (argmax, constant) = best(&ratios);
    Ok(EmbeddingEstimate {
        constant,
        argmax,
        members: family.len(),
        exact_norms: true,
    })
}

/// `2^((p-1)/p)`, the factor in `c_cplx <= 2^((p-1)/p) (1 + |J|) c_quat`.
pub fn projection_constant(p: f64) -> f64 {
    2f64.powf((p - 1.0) / p)
}

/// Factor `K(p)` in `c_quat <= K(p) (1 + |J|) c_cplx`.
pub fn lift_constant(p: f64) -> f64 {
    if p >= 2.0 {
        4f64.powf((p - 1.0) / p)
    } else {
        (2f64.powf(2.0 - p) * 4f64.powf(p - 1.0)).powf(1.0 / p)
    }
}

fn default_t_count() -> usize {
    64
}
fn default_sphere() -> usize {
    crate::spaces::DEFAULT_SPHERE_SAMPLES
}

/// Parameters of the equivalence experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub p: f64,
    #[serde(default = "default_t_count")]
    pub t_count: usize,
    pub r_levels: Vec<f64>,
    #[serde(default = "default_sphere")]
    pub sphere_samples: usize,
    #[serde(default)]
    pub vanishing: VanishingRule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealSubfamilyCheck {
    pub members: usize,
    pub c_quat: f64,
    pub c_cplx: f64,
    pub abs_diff: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub p: f64,
    pub j_norm: f64,
    pub family_quat: usize,
    pub family_cplx: usize,
    pub c_quat: f64,
    pub c_cplx: f64,
    pub exact_norms: bool,
    /// `2^((p-1)/p) (1 + |J|) c_quat`, an upper bound for `c_cplx`.
    pub bound_cplx: f64,
    /// `K(p) (1 + |J|) c_cplx`, an upper bound for `c_quat`.
    pub bound_quat: f64,
    pub k_p: f64,
    pub slack_cplx: f64,
    pub slack_quat: f64,
    pub chain_ok: bool,
    pub real_subfamily: RealSubfamilyCheck,
    #[serde(flatten)]
    pub ratio: RatioReport,
    /// Box ratios of `mu` agree with the planar ratios of `mu^s`.
    pub boxes_match_projection: bool,
    pub vanishing: VanishingReport,
    /// Largest relative gap between `int |G|^p d(reflected nu)` and
    /// `int |JG|^p dnu` over the complex members.
    pub reflection_max_rel_diff: f64,
    pub violations: Vec<String>,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Estimates both embedding constants over a family and checks the chain
/// between them, alongside the box-ratio and vanishing scans of `mu`.
pub fn equivalence_experiment(
    mu: &AtomicMeasure,
    spec: &SpaceSpec,
    quad: &QuadratureSpec,
    family: &TestFamily,
    params: &ExperimentParams,
) -> Result<EquivalenceReport> {
    spec.validate()?;
    check_exponent(params.p)?;
    let p = params.p;
    let nu = mu.project_slice();
    let cq = embedding_constant_quat(mu, spec, quad, p, &family.quaternionic, params.sphere_samples)?;
    let cc = embedding_constant_complex(&nu, spec, quad, p, &family.complex)?;
    let one_j = 1.0 + spec.j_norm;
    let k_p = lift_constant(p);
    let bound_cplx = projection_constant(p) * one_j * cq.constant;
    let bound_quat = k_p * one_j * cc.constant;
    let mut violations = Vec::new();
    let ok_cplx = cc.constant <= bound_cplx * (1.0 + CHAIN_SLACK);
    let ok_quat = cq.constant <= bound_quat * (1.0 + CHAIN_SLACK);
    if !ok_cplx {
        violations.push(format!("c_cplx {} exceeds bound {}", cc.constant, bound_cplx));
    }
    if !ok_quat {
        violations.push(format!("c_quat {} exceeds bound {}", cq.constant, bound_quat));
    }

    let real = family.real_subfamily();
    let real_check = if real.quaternionic.is_empty() || real.complex.is_empty() {
        RealSubfamilyCheck {
            members: 0,
            c_quat: 0.0,
            c_cplx: 0.0,
            abs_diff: 0.0,
            ok: true,
        }
    } else {
        let a = embedding_constant_quat(mu, spec, quad, p, &real.quaternionic, params.sphere_samples)?;
        let b = embedding_constant_complex(&nu, spec, quad, p, &real.complex)?;
        let diff = (a.constant - b.constant).abs();
        RealSubfamilyCheck {
            members: real.len(),
            c_quat: a.constant,
            c_cplx: b.constant,
            abs_diff: diff,
            ok: diff <= REAL_SUBFAMILY_TOLERANCE * a.constant.max(b.constant).max(1.0),
        }
    };
    if !real_check.ok {
        violations.push(format!(
            "real-coefficient constants differ by {}",
            real_check.abs_diff
        ));
    }

    let ratio = ratio_scan(mu, params.t_count, &params.r_levels)?;
    let planar = complex_ratio_scan(&nu, params.t_count, &params.r_levels)?;
    let boxes_match_projection = ratio
        .boxes
        .iter()
        .zip(&planar.boxes)
        .all(|(a, b)| rel_diff(a.mass, b.mass) <= 1e-12);
    if !boxes_match_projection {
        violations.push("box masses of mu and mu^s disagree".into());
    }
    let vanishing = vanishing_from_ratios(&ratio, &params.vanishing);

    let reflected = nu.reflect();
    let reflection_max_rel_diff = family
        .complex
        .iter()
        .map(|g| -> Result<f64> {
            let a = reflected.lp_integral(g, p)?;
            let b = nu.lp_integral(&g.j_operator(), p)?;
            Ok(rel_diff(a, b))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if reflection_max_rel_diff > 1e-12 {
        violations.push(format!(
            "reflection identity off by {reflection_max_rel_diff}"
        ));
    }

    Ok(EquivalenceReport {
        p,
        j_norm: spec.j_norm,
        family_quat: family.quaternionic.len(),
        family_cplx: family.complex.len(),
        c_quat: cq.constant,
        c_cplx: cc.constant,
        exact_norms: cq.exact_norms && cc.exact_norms,
        bound_cplx,
        bound_quat,
        k_p,
        slack_cplx: bound_cplx - cc.constant,
        slack_quat: bound_quat - cq.constant,
        chain_ok: ok_cplx && ok_quat,
        real_subfamily: real_check,
        ratio,
        boxes_match_projection,
        vanishing,
        reflection_max_rel_diff,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationEntry {
    pub depth: usize,
    pub sup: f64,
    pub shell_max: Vec<f64>,
}

/// Box-ratio scans of a ray truncated at each depth, on common shells.
pub fn truncation_scan(
    ray: &DyadicRay,
    depths: &[usize],
    t_count: usize,
    r_levels: &[f64],
) -> Result<Vec<TruncationEntry>> {
    depths
        .iter()
        .map(|&d| {
            let rep = ratio_scan(&ray.with_depth(d).measure()?, t_count, r_levels)?;
            Ok(TruncationEntry {
                depth: d,
                sup: rep.sup,
                shell_max: rep.shell_max,
            })
        })
        .collect()
}

pub fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dyadic_shells, random_measure, rng, RayWeights};
    use crate::quaternion::ImaginaryUnit;

    fn pt(rho: f64, alpha: f64, unit: ImaginaryUnit) -> SlicePoint {
        SlicePoint::polar(rho, alpha, unit).unwrap()
    }

    #[test]
    fn box_membership_examples() {
        let b = SymmetricBox::new(0.0, 0.9).unwrap();
        assert!(b.contains(&pt(0.95, 0.0, ImaginaryUnit::I)));
        assert!(!b.contains(&pt(0.95, 0.2, ImaginaryUnit::I)));
        assert!(!b.contains(&pt(0.85, 0.0, ImaginaryUnit::I)));
        // the same angle on another slice
        assert!(b.contains(&pt(0.95, 0.05, ImaginaryUnit::K)));
        let top = SymmetricBox::new(PI, 0.9).unwrap();
        assert!(top.contains(&pt(0.95, PI - 0.05, ImaginaryUnit::J)));
        assert!(SymmetricBox::new(-0.1, 0.5).is_err());
        assert!(SymmetricBox::new(0.1, 1.0).is_err());
    }

    #[test]
    fn arcs_to_boxes() {
        let fam = boxes_from_arcs(&[(1.0, 1.2)]).unwrap();
        assert!((fam.boxes[0].t - 1.1).abs() < 1e-15);
        assert!((fam.boxes[0].r - 0.9).abs() < 1e-15);
        assert!(boxes_from_arcs(&[(0.0, 1.0), (0.5, 1.5)]).is_err());
        assert!(boxes_from_arcs(&[(0.0, 1.0), (1.0, 1.5)]).is_ok());
        assert!(boxes_from_arcs(&[(0.2, 0.1)]).is_err());
        assert!(boxes_from_arcs(&[(0.0, 3.0)]).is_err());
        assert!(boxes_from_arcs(&[(3.0, 3.5)]).is_err());
    }

    #[test]
    fn union_mass_counts_atoms_once() {
        let mut mu = AtomicMeasure::empty();
        mu.push(pt(0.95, 1.1, ImaginaryUnit::I), 0.25).unwrap();
        mu.push(pt(0.95, 2.0, ImaginaryUnit::J), 0.5).unwrap();
        let fam = boxes_from_arcs(&[(1.0, 1.2), (1.9, 2.1)]).unwrap();
        assert_eq!(fam.masses(&mu), vec![0.25, 0.5]);
        assert_eq!(fam.union_mass(&mu), 0.75);
    }

    #[test]
    fn box_mass_equals_planar_mass_of_projection() {
        let mu = random_measure(&mut rng(3), 150, 0.999);
        let nu = mu.project_slice();
        for t in t_grid(33) {
            for r in [0.5, 0.8, 0.9, 0.97, 0.99] {
                let b = SymmetricBox::new(t, r).unwrap();
                assert!(rel_diff(b.mass(&mu), b.complex_mass(&nu)) <= 1e-12);
            }
        }
    }

    // sup_k over shells 1 - 2^-k of sum_{j >= k} 2^-j / 2^-k
    fn geometric2_oracle(k: usize, depth: usize) -> f64 {
        (k..=depth).map(|j| 0.5f64.powi((j - k) as i32)).sum()
    }

    #[test]
    fn dyadic_geometric2_shells() {
        let mu = DyadicRay::new(RayWeights::Geometric2, 20).measure().unwrap();
        let rep = ratio_scan(&mu, 64, &dyadic_shells(20)).unwrap();
        for (k, m) in rep.shell_max.iter().enumerate() {
            assert!((m - geometric2_oracle(k + 1, 20)).abs() <= 1e-12);
        }
        assert!(rep.sup <= 4.0);
        let v = vanishing_from_ratios(&rep, &VanishingRule::default());
        assert!(!v.vanishing);
    }

    #[test]
    fn dyadic_geometric4_vanishes() {
        let mu = DyadicRay::new(RayWeights::Geometric4, 20).measure().unwrap();
        let v = vanishing_scan(&mu, 64, &dyadic_shells(20), &VanishingRule::default()).unwrap();
        assert!(v.vanishing);
        for (k, m) in v.shell_max.iter().enumerate() {
            let k = k as i32 + 1;
            let oracle: f64 = (k..=20).map(|j| 0.25f64.powi(j) / 0.5f64.powi(k)).sum();
            assert!((m - oracle).abs() <= 1e-12 * oracle.max(1.0));
        }
        let slope = v.decay_slope.unwrap();
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn dyadic_linear_truncations_grow() {
        let ray = DyadicRay::new(RayWeights::Linear2, 20);
        let depths: Vec<usize> = (5..=20).collect();
        let scan = truncation_scan(&ray, &depths, 64, &dyadic_shells(20)).unwrap();
        let sups: Vec<f64> = scan.iter().map(|e| e.sup).collect();
        assert!(strictly_increasing(&sups), "{sups:?}");
        for e in &scan {
            // oracle: max_k sum_{j=k}^{K} j 2^{k-j}
            let oracle = (1..=e.depth)
                .map(|k| (k..=e.depth).map(|j| j as f64 * 0.5f64.powi((j - k) as i32)).sum::<f64>())
                .fold(0.0, f64::max);
            assert!((e.sup - oracle).abs() <= 1e-12 * oracle);
        }
    }

    #[test]
    fn scan_validation_and_empty_measure() {
        let mu = AtomicMeasure::empty();
        assert!(ratio_scan(&mu, 3, &[0.5]).is_err());
        assert!(ratio_scan(&mu, 8, &[0.5, 0.5]).is_err());
        assert!(ratio_scan(&mu, 8, &[1.0]).is_err());
        let v = vanishing_scan(&mu, 8, &[0.5, 0.9], &VanishingRule::default()).unwrap();
        assert!(v.vanishing);
        assert_eq!(v.shell_max, vec![0.0, 0.0]);
    }

    #[test]
    fn constants() {
        assert!((lift_constant(2.0) - 2.0).abs() < 1e-15);
        assert!((lift_constant(1.0) - 2.0).abs() < 1e-15);
        assert!((projection_constant(2.0) - 2f64.sqrt()).abs() < 1e-15);
        // continuity at p = 2
        assert!((lift_constant(2.0 - 1e-9) - lift_constant(2.0)).abs() < 1e-8);
    }

    #[test]
    fn embedding_constant_errors() {
        let mu = AtomicMeasure::empty();
        let spec = crate::spaces::Preset::Hardy2.spec(8);
        let quad = QuadratureSpec::default();
        assert!(matches!(
            embedding_constant_quat(&mu, &spec, &quad, 2.0, &[], 8),
            Err(Error::EmptyFamily)
        ));
        assert!(matches!(
            embedding_constant_complex(&mu.project_slice(), &spec, &quad, 2.0, &[ComplexSeries::zero()]),
            Err(Error::ZeroNormMember { index: 0 })
        ));
    }

    #[test]
    fn dirac_embedding_constant_oracle() {
        // delta at w in H^2: sup |f(w)| / |f| over monomials is 1 (attained by z^0)
        let mut mu = AtomicMeasure::empty();
        mu.push(pt(0.5, 0.3, ImaginaryUnit::J), 1.0).unwrap();
        let spec = crate::spaces::Preset::Hardy2.spec(8);
        let quad = QuadratureSpec::default();
        let fam: Vec<SliceSeries> = (0..=8).map(SliceSeries::monomial).collect();
        let est = embedding_constant_quat(&mu, &spec, &quad, 2.0, &fam, 8).unwrap();
        assert_eq!(est.constant, 1.0);
        assert_eq!(est.argmax, 0);
        assert!(est.exact_norms);
    }
}
