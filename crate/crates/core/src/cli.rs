//! Batch driver behind the `slicereg` binary.
//!
//! A run reads a JSON [`RunConfig`], applies command-line overrides, resolves
//! file references, and produces a [`Report`] that embeds the resolved
//! config. Reports contain no timestamps and all maps serialize in a fixed
//! order, so identical configs give byte-identical output.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::carleson::{
    boxes_from_arcs, complex_ratio_scan, embedding_constant_complex, embedding_constant_quat,
    equivalence_experiment, ratio_scan, strictly_increasing, truncation_scan, vanishing_from_ratios,
    ExperimentParams, VanishingRule,
};
use crate::error::{Error, Result};
use crate::family::{FamilyConfig, TestFamily};
use crate::generators::{dyadic_shells, random_measure, rng, DyadicRay};
use crate::measures::AtomicMeasure;
use crate::numerics::rel_diff;
use crate::quaternion::{orthogonal_unit, ImaginaryUnit, Quaternion};
use crate::series::SliceSeries;
use crate::spaces::{
    complex_norm, hardy_profile, lift_norm, lift_norm_over, sandwich_check, slice_split,
    sphere_samples, Preset, QuadratureSpec, SpaceKind, SpaceSpec, DEFAULT_SPHERE_SAMPLES,
};

/// Seed offset of the test-family stream relative to the measure stream.
pub const FAMILY_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Parser)]
#[command(name = "slicereg", version, about = "Slice regular functions, lifted norms and Carleson checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Degree of the generated test functions.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Comma-separated shell radii for box scans.
    #[arg(long, global = true, value_delimiter = ',')]
    pub shells: Option<Vec<f64>>,
    /// Relative threshold of the vanishing rule.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Also write the shell maxima as CSV (carleson, vanishing).
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate a series at points.
    Eval,
    /// Complex, slice and lift norms.
    Norm,
    /// Splitting and symmetric decomposition.
    Split,
    /// Slice projection of a measure.
    Project,
    /// Box-ratio scans, arc families and truncation families.
    Carleson,
    /// Shell maxima and the vanishing verdict.
    Vanishing,
    /// Embedding-constant estimates.
    Embed,
    /// Both embedding constants and the chain between them.
    Equivalence,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Norm => "norm",
            Command::Split => "split",
            Command::Project => "project",
            Command::Carleson => "carleson",
            Command::Vanishing => "vanishing",
            Command::Embed => "embed",
            Command::Equivalence => "equivalence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSource {
    Path(String),
    Inline(SliceSeries),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSource {
    Path(String),
    Preset { preset: Preset },
    Spec(SpaceSpec),
}

fn default_max_modulus() -> f64 {
    0.98
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomMeasureConfig {
    pub atoms: usize,
    #[serde(default = "default_max_modulus")]
    pub max_modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSource {
    Path(String),
    Ray { ray: DyadicRay },
    Random { random: RandomMeasureConfig },
    Inline(AtomicMeasure),
}

/// Inputs and parameters of one run. Every field is optional in the file;
/// [`RunConfig::resolve`] fills the defaults and inlines referenced files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSource>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<SeriesSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Quaternion>>,
    #[serde(default, rename = "I", skip_serializing_if = "Option::is_none")]
    pub unit: Option<ImaginaryUnit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSource>,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_levels: Option<Vec<f64>>,
    #[serde(default)]
    pub vanishing: VanishingRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<usize>>,
    #[serde(default)]
    pub decompose_real: bool,
    #[serde(default)]
    pub reflect: bool,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    /// Applies flag overrides.
    pub fn with_overrides(mut self, cli: &Cli) -> Self {
        if let Some(s) = cli.seed {
            self.seed = s;
        }
        if let Some(p) = cli.p {
            self.p = Some(p);
        }
        if let Some(d) = cli.degree {
            self.family.degree = d;
        }
        if let Some(s) = &cli.shells {
            self.r_levels = Some(s.clone());
        }
        if let Some(t) = cli.threshold {
            self.vanishing.rel_threshold = t;
        }
        self
    }

    /// Fills defaults and replaces file references (relative to `base`) by
    /// their contents.
    pub fn resolve(mut self, base: &Path) -> Result<Self> {
        let at = |s: &str| base.join(s);
        self.p.get_or_insert(2.0);
        self.sphere_samples.get_or_insert(DEFAULT_SPHERE_SAMPLES);
        self.t_count.get_or_insert(64);
        self.r_levels.get_or_insert_with(|| dyadic_shells(20));
        if self.space.is_none() {
            self.space = Some(SpaceSource::Preset { preset: Preset::Hardy2 });
        }
        if let Some(SpaceSource::Path(s)) = &self.space {
            self.space = Some(SpaceSource::Spec(read_json(&at(s))?));
        }
        if let Some(SeriesSource::Path(s)) = &self.function {
            self.function = Some(SeriesSource::Inline(read_json(&at(s))?));
        }
        if let Some(MeasureSource::Path(s)) = &self.measure {
            self.measure = Some(MeasureSource::Inline(read_json(&at(s))?));
        }
        self.quadrature.validate()?;
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or(2.0)
    }

    fn sphere(&self) -> usize {
        self.sphere_samples.unwrap_or(DEFAULT_SPHERE_SAMPLES)
    }

    fn unit(&self) -> ImaginaryUnit {
        self.unit.unwrap_or(ImaginaryUnit::I)
    }

    /// Space specification; presets get weights up to `degree`.
    pub fn space_spec(&self, degree: usize) -> Result<SpaceSpec> {
        let spec = match &self.space {
            None => Preset::Hardy2.spec(degree),
            Some(SpaceSource::Preset { preset }) => preset.spec(degree),
            Some(SpaceSource::Spec(s)) => s.clone(),
            Some(SpaceSource::Path(s)) => {
                return Err(Error::Config(format!("unresolved space path {s}")))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn function(&self) -> Result<SliceSeries> {
        match &self.function {
            Some(SeriesSource::Inline(f)) => Ok(f.clone()),
            Some(SeriesSource::Path(s)) => Err(Error::Config(format!("unresolved function path {s}"))),
            None => Err(Error::Config("missing \"function\"".into())),
        }
    }

    pub fn measure(&self) -> Result<AtomicMeasure> {
        match &self.measure {
            Some(MeasureSource::Inline(m)) => Ok(m.clone()),
            Some(MeasureSource::Ray { ray }) => ray.measure(),
            Some(MeasureSource::Random { random }) => {
                if !(random.max_modulus > 0.0 && random.max_modulus < 1.0) {
                    return Err(Error::Config("max_modulus must lie in (0, 1)".into()));
                }
                Ok(random_measure(&mut rng(self.seed), random.atoms, random.max_modulus))
            }
            Some(MeasureSource::Path(s)) => Err(Error::Config(format!("unresolved measure path {s}"))),
            None => Err(Error::Config("missing \"measure\"".into())),
        }
    }

    fn ray(&self) -> Option<&DyadicRay> {
        match &self.measure {
            Some(MeasureSource::Ray { ray }) => Some(ray),
            _ => None,
        }
    }

    fn r_levels(&self) -> Vec<f64> {
        self.r_levels.clone().unwrap_or_else(|| dyadic_shells(20))
    }

    fn experiment_params(&self) -> ExperimentParams {
        ExperimentParams {
            p: self.p(),
            t_count: self.t_count.unwrap_or(64),
            r_levels: self.r_levels(),
            sphere_samples: self.sphere(),
            vanishing: self.vanishing.clone(),
        }
    }

    fn family_for(&self, spec: &SpaceSpec, mu: &AtomicMeasure) -> TestFamily {
        TestFamily::generate(&self.family, spec, mu, self.seed.wrapping_add(FAMILY_STREAM))
    }
}

/// Output of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub pass: bool,
    pub violations: Vec<String>,
    pub result: Value,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn report(cmd: Command, config: &RunConfig, violations: Vec<String>, result: Value) -> Report {
    Report {
        command: cmd.name().into(),
        config: config.clone(),
        pass: violations.is_empty(),
        violations,
        result,
        csv: None,
    }
}

pub fn cmd_eval(config: &RunConfig) -> Result<Report> {
    let f = config.function()?;
    let points = config
        .points
        .as_ref()
        .ok_or_else(|| Error::Config("missing \"points\"".into()))?;
    let values = points.iter().map(|q| f.eval(q)).collect::<Result<Vec<_>>>()?;
    Ok(report(Command::Eval, config, vec![], json!({ "values": values })))
}

#[derive(Serialize)]
struct NormResult {
    #[serde(rename = "I")]
    unit: ImaginaryUnit,
    #[serde(rename = "J")]
    orth: ImaginaryUnit,
    f_norm: f64,
    g_norm: f64,
    slice_norm: f64,
    lift: crate::spaces::LiftNorm,
    sampled: crate::spaces::LiftNorm,
    sandwich: crate::spaces::SandwichReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hardy_profile_f: Option<crate::spaces::HardyProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hardy_profile_g: Option<crate::spaces::HardyProfile>,
}

/// Tolerance between the closed-form lift norm and the sampled supremum for
/// coefficient-weighted spaces.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;

pub fn cmd_norm(config: &RunConfig) -> Result<Report> {
    let f = config.function()?;
    let spec = config.space_spec(f.degree())?;
    let quad = &config.quadrature;
    let unit = config.unit();
    let (ff, gg) = slice_split(&f, &unit);
    let f_norm = complex_norm(&ff, &spec, quad)?;
    let g_norm = complex_norm(&gg, &spec, quad)?;
    let lift = lift_norm(&f, &spec, quad, config.sphere())?;
    let mut units = sphere_samples(config.sphere());
    units.push(unit);
    let sampled = lift_norm_over(&f, &spec, quad, &units)?;
    let sandwich = sandwich_check(&f, &unit, &spec, quad, config.sphere())?;
    let mut violations = Vec::new();
    if !sandwich.pass {
        violations.push(format!(
            "sandwich: slice {} , lift {} , constant {}",
            sandwich.slice_norm, sandwich.lift_norm, sandwich.constant
        ));
    }
    if spec.is_coefficient_weighted() && rel_diff(lift.value, sampled.value) > CLOSED_FORM_TOLERANCE {
        violations.push(format!(
            "closed form {} differs from sampled sup {}",
            lift.value, sampled.value
        ));
    }
    let (hardy_profile_f, hardy_profile_g) = match spec.kind {
        SpaceKind::Hardy { p } => (Some(hardy_profile(&ff, p, quad)?), Some(hardy_profile(&gg, p, quad)?)),
        _ => (None, None),
    };
    let res = NormResult {
        unit,
        orth: orthogonal_unit(&unit),
        f_norm,
        g_norm,
        slice_norm: f_norm.hypot(g_norm),
        lift,
        sampled,
        sandwich,
        hardy_profile_f,
        hardy_profile_g,
    };
    Ok(report(Command::Norm, config, violations, to_value(&res)))
}

/// Tolerance of the split round trip.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;

pub fn cmd_split(config: &RunConfig) -> Result<Report> {
    let f = config.function()?;
    let unit = config.unit();
    let orth = orthogonal_unit(&unit);
    let (ff, gg) = f.split(&unit, &orth)?;
    let parts = f.symmetric_decomposition(&unit, &orth)?;
    let back = SliceSeries::from_symmetric_parts(&parts, &unit, &orth);
    let mut max_err: f64 = 0.0;
    for k in 1..10 {
        let rho = k as f64 / 10.0;
        for m in 0..32 {
            let t = 2.0 * PI * m as f64 / 32.0;
            let (x, y) = (rho * t.cos(), rho * t.sin());
            let z = num_complex::Complex64::new(x, y);
            let direct = f.eval_on_slice(x, y, &unit);
            let from_fg = crate::series::to_slice(ff.eval(z), &unit)
                + crate::series::to_slice(gg.eval(z), &unit) * orth.as_quaternion();
            let from_parts = back.eval_on_slice(x, y, &unit);
            max_err = max_err.max((direct - from_fg).norm()).max((direct - from_parts).norm());
        }
    }
    let mut violations = Vec::new();
    if max_err > ROUND_TRIP_TOLERANCE {
        violations.push(format!("round trip error {max_err} above {ROUND_TRIP_TOLERANCE}"));
    }
    let res = json!({
        "I": unit,
        "J": orth,
        "F": ff,
        "G": gg,
        "symmetric_parts": parts,
        "round_trip_max_error": max_err,
    });
    Ok(report(Command::Split, config, violations, res))
}

pub fn cmd_project(config: &RunConfig) -> Result<Report> {
    let mu = config.measure()?;
    let nu = mu.project_slice();
    let (before, after) = (mu.total_mass(), nu.total_mass());
    let mut violations = Vec::new();
    if rel_diff(before, after) > 1e-12 {
        violations.push(format!("mass {before} before projection, {after} after"));
    }
    let mut res = json!({
        "projection": nu,
        "total_mass": before,
        "projected_mass": after,
        "mass_defect": after - before,
    });
    if config.decompose_real {
        let (real, rest) = mu.decompose_real();
        res["real_part"] = to_value(&real);
        res["non_real_part"] = to_value(&rest);
    }
    if config.reflect {
        res["reflected"] = to_value(&nu.reflect());
    }
    Ok(report(Command::Project, config, violations, res))
}

fn ensure_measure(config: &RunConfig, cmd: Command) -> Result<AtomicMeasure> {
    config
        .measure()
        .map_err(|e| Error::Config(format!("{}: {e}", cmd.name())))
}

pub fn cmd_carleson(config: &RunConfig) -> Result<Report> {
    let mu = ensure_measure(config, Command::Carleson)?;
    let t_count = config.t_count.unwrap_or(64);
    let r_levels = config.r_levels();
    let rep = ratio_scan(&mu, t_count, &r_levels)?;
    let planar = complex_ratio_scan(&mu.project_slice(), t_count, &r_levels)?;
    let mut violations = Vec::new();
    let mismatches = rep
        .boxes
        .iter()
        .zip(&planar.boxes)
        .filter(|(a, b)| a.mass != b.mass)
        .count();
    if mismatches > 0 {
        violations.push(format!("{mismatches} boxes differ from the projected planar boxes"));
    }
    let mut res = to_value(&rep);
    if let Some(arcs) = &config.arcs {
        let fam = boxes_from_arcs(arcs)?;
        res["arc_boxes"] = to_value(&fam.boxes);
        res["arc_box_masses"] = to_value(&fam.masses(&mu));
        res["arc_union_mass"] = to_value(&fam.union_mass(&mu));
    }
    if let (Some(ray), Some(depths)) = (config.ray(), &config.depths) {
        let entries = truncation_scan(ray, depths, t_count, &r_levels)?;
        let sups: Vec<f64> = entries.iter().map(|e| e.sup).collect();
        res["truncations"] = to_value(&entries);
        res["sup_strictly_increasing"] = Value::Bool(strictly_increasing(&sups));
    }
    let mut out = report(Command::Carleson, config, violations, res);
    out.csv = Some(rep.shell_csv());
    Ok(out)
}

pub fn cmd_vanishing(config: &RunConfig) -> Result<Report> {
    let mu = ensure_measure(config, Command::Vanishing)?;
    let t_count = config.t_count.unwrap_or(64);
    let rep = ratio_scan(&mu, t_count, &config.r_levels())?;
    let v = vanishing_from_ratios(&rep, &config.vanishing);
    let mut res = to_value(&v);
    if let (Some(ray), Some(depths)) = (config.ray(), &config.depths) {
        let verdicts = depths
            .iter()
            .map(|&d| {
                let r = ratio_scan(&ray.with_depth(d).measure()?, t_count, &config.r_levels())?;
                Ok(json!({"depth": d, "vanishing": vanishing_from_ratios(&r, &config.vanishing).vanishing}))
            })
            .collect::<Result<Vec<Value>>>()?;
        res["truncations"] = Value::Array(verdicts);
    }
    let mut out = report(Command::Vanishing, config, vec![], res);
    out.csv = Some(rep.shell_csv());
    Ok(out)
}

pub fn cmd_embed(config: &RunConfig) -> Result<Report> {
    let mu = ensure_measure(config, Command::Embed)?;
    let spec = config.space_spec(config.family.degree)?;
    let fam = config.family_for(&spec, &mu);
    let p = config.p();
    let q = embedding_constant_quat(&mu, &spec, &config.quadrature, p, &fam.quaternionic, config.sphere())?;
    let c = embedding_constant_complex(&mu.project_slice(), &spec, &config.quadrature, p, &fam.complex)?;
    let res = json!({
        "c_quat": q,
        "c_cplx": c,
        "argmax_quat": fam.quaternionic[q.argmax],
        "argmax_cplx": fam.complex[c.argmax],
    });
    Ok(report(Command::Embed, config, vec![], res))
}

pub fn cmd_equivalence(config: &RunConfig) -> Result<Report> {
    let mu = ensure_measure(config, Command::Equivalence)?;
    let spec = config.space_spec(config.family.degree)?;
    let params = config.experiment_params();
    let fam = config.family_for(&spec, &mu);
    let exp = equivalence_experiment(&mu, &spec, &config.quadrature, &fam, &params)?;
    let mut violations = exp.violations.clone();
    let mut res = to_value(&exp);
    if let (Some(ray), Some(depths)) = (config.ray(), &config.depths) {
        let mut rows = Vec::new();
        let mut sups = Vec::new();
        for &d in depths {
            let mu_k = ray.with_depth(d).measure()?;
            let fam_k = config.family_for(&spec, &mu_k);
            let e = equivalence_experiment(&mu_k, &spec, &config.quadrature, &fam_k, &params)?;
            violations.extend(e.violations.iter().map(|v| format!("depth {d}: {v}")));
            sups.push(e.ratio.sup);
            rows.push(json!({
                "depth": d,
                "c_quat": e.c_quat,
                "c_cplx": e.c_cplx,
                "chain_ok": e.chain_ok,
                "sup": e.ratio.sup,
                "vanishing": e.vanishing.vanishing,
            }));
        }
        res["truncations"] = Value::Array(rows);
        res["sup_strictly_increasing"] = Value::Bool(strictly_increasing(&sups));
    }
    Ok(report(Command::Equivalence, config, violations, res))
}

pub fn execute(cmd: Command, config: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Eval => cmd_eval(config),
        Command::Norm => cmd_norm(config),
        Command::Split => cmd_split(config),
        Command::Project => cmd_project(config),
        Command::Carleson => cmd_carleson(config),
        Command::Vanishing => cmd_vanishing(config),
        Command::Embed => cmd_embed(config),
        Command::Equivalence => cmd_equivalence(config),
    }
}

/// Loads, overrides, resolves and runs; writes the report (and CSV) when
/// paths are given.
pub fn run(cli: &Cli) -> Result<Report> {
    let (config, base) = match &cli.config {
        Some(path) => (
            RunConfig::load(path)?,
            path.parent().map(Path::to_path_buf).unwrap_or_default(),
        ),
        None => (RunConfig::default(), PathBuf::new()),
    };
    let config = config.with_overrides(cli).resolve(&base)?;
    let rep = execute(cli.command, &config)?;
    if let Some(out) = &cli.out {
        std::fs::write(out, rep.to_json())?;
    }
    if let (Some(path), Some(csv)) = (&cli.csv, &rep.csv) {
        std::fs::write(path, csv)?;
    }
    Ok(rep)
}
