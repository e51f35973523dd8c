//! Scenario files, probes and the runner behind the command-line tool.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::convergence::{
    derivative_convergence, detect_blowup, flat_norm_upper, lsc_check, region_with_area, uniform_limit, LimitSpace,
    SequenceScenario, SequenceSpec, ViolationCause,
};
use crate::families::{FamilySpec, GeneratedManifold, ADM_TOL};
use crate::geometry::{adm_mass_chart, adm_mass_limit, hawking_mass_graph, hawking_mass_profile, validate_rotsym, Frame, Geometry};
use crate::numerics::{limit_extrapolate, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("probe {index} ({op}) failed: {diagnostic}")]
    ProbeFailed { index: usize, op: String, diagnostic: String },
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassMethod {
    #[default]
    Limit,
    Chart,
    Both,
}

/// Probes on a single manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldProbe {
    /// Membership report for the rotationally symmetric class.
    Validate,
    /// Mass, curvature sign and minimal spheres against the family metadata.
    Consistency,
    Mass {
        #[serde(default)]
        method: MassMethod,
        #[serde(default = "default_chart_radius")]
        chart_radius: f64,
    },
    MassCurve { range: [f64; 2], count: usize },
    Region {
        area: f64,
        #[serde(default)]
        expect_empty: Option<bool>,
        #[serde(default)]
        expect_boundary_hawking: Option<f64>,
    },
    FlatNorm { against: FamilySpec, window: [f64; 2] },
}

/// Probes on a sequence of manifolds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceProbe {
    /// Metadata consistency of every member.
    Consistency,
    MassCurves { range: [f64; 2], count: usize },
    DetectBlowup {
        #[serde(default)]
        expect_divergent: Option<bool>,
        #[serde(default)]
        expect_r_star: Option<f64>,
        #[serde(default = "default_blowup_tol")]
        tolerance: f64,
    },
    UniformLimit {
        #[serde(default)]
        against: Option<FamilySpec>,
        #[serde(default = "default_sup_tol")]
        sup_tol: f64,
    },
    DerivativeConvergence {
        limit: FamilySpec,
        r0: f64,
        #[serde(default)]
        expect_converges: Option<bool>,
    },
    /// Flat-norm bound of each member to a limit over the window.
    FlatNormToLimit {
        limit: FamilySpec,
        #[serde(default)]
        expect_nonincreasing: bool,
        #[serde(default)]
        expect_final_below: Option<f64>,
    },
    Lsc {
        #[serde(default)]
        limit: Option<FamilySpec>,
        #[serde(default)]
        expect_holds: Option<bool>,
        #[serde(default)]
        expect_cause: Option<ViolationCause>,
    },
    /// Area-`A` regions of every member and of the limit.
    Regions {
        area: f64,
        limit: FamilySpec,
        #[serde(default = "default_region_tol")]
        tolerance: f64,
    },
}

fn default_chart_radius() -> f64 {
    1e4
}

fn default_blowup_tol() -> f64 {
    0.05
}

fn default_sup_tol() -> f64 {
    1e-3
}

fn default_region_tol() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subject {
    Sequence { sequence: SequenceSpec, probes: Vec<SequenceProbe> },
    Manifold { manifold: FamilySpec, probes: Vec<ManifoldProbe> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub subject: Subject,
    #[serde(default)]
    pub output: Outputs,
}

/// Raw form used for strict parsing; `Scenario` flattens, which defeats `deny_unknown_fields`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: u32,
    name: String,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    manifold: Option<FamilySpec>,
    #[serde(default)]
    sequence: Option<SequenceSpec>,
    #[serde(default)]
    probes: Vec<Value>,
    #[serde(default)]
    output: Outputs,
}

fn parse_error(source_name: &str, e: serde_json::Error) -> ExperimentError {
    ExperimentError::Parse { source_name: source_name.to_string(), line: e.line(), column: e.column(), message: e.to_string() }
}

impl Scenario {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| parse_error(source_name, e))?;
        if raw.schema != SCHEMA_VERSION {
            return Err(ExperimentError::Invalid(format!(
                "{source_name}: unsupported schema {} (expected {SCHEMA_VERSION})",
                raw.schema
            )));
        }
        let probe_error = |k: usize, e: serde_json::Error| ExperimentError::Parse {
            source_name: source_name.to_string(),
            line: 0,
            column: 0,
            message: format!("probes[{k}]: {e}"),
        };
        let subject = match (raw.manifold, raw.sequence) {
            (Some(manifold), None) => {
                manifold.check().map_err(|e| ExperimentError::Invalid(format!("{source_name}: manifold: {e}")))?;
                let probes = raw
                    .probes
                    .into_iter()
                    .enumerate()
                    .map(|(k, v)| serde_json::from_value(v).map_err(|e| probe_error(k, e)))
                    .collect::<Result<_>>()?;
                Subject::Manifold { manifold, probes }
            }
            (None, Some(sequence)) => {
                sequence.expand().map_err(|e| ExperimentError::Invalid(format!("{source_name}: sequence: {e}")))?;
                let probes = raw
                    .probes
                    .into_iter()
                    .enumerate()
                    .map(|(k, v)| serde_json::from_value(v).map_err(|e| probe_error(k, e)))
                    .collect::<Result<_>>()?;
                Subject::Sequence { sequence, probes }
            }
            _ => {
                return Err(ExperimentError::Invalid(format!(
                    "{source_name}: give exactly one of `manifold` and `sequence`"
                )))
            }
        };
        Ok(Scenario { schema: raw.schema, name: raw.name, description: raw.description, subject, output: raw.output })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Scenario::parse(&text, &path.display().to_string())
    }
}

/// Built-in scenarios, by name.
pub const BUILTINS: [(&str, &str); 6] = [
    ("capped-horizon", include_str!("../scenarios/capped-horizon.json")),
    ("flattened-interior", include_str!("../scenarios/flattened-interior.json")),
    ("rescaled-masses", include_str!("../scenarios/rescaled-masses.json")),
    ("hidden-region", include_str!("../scenarios/hidden-region.json")),
    ("cylinder-blowup", include_str!("../scenarios/cylinder-blowup.json")),
    ("region-extraction", include_str!("../scenarios/region-extraction.json")),
];

pub fn builtin(name: &str) -> Result<Scenario> {
    let (_, text) = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ExperimentError::Invalid(format!("no built-in scenario `{name}`")))?;
    Scenario::parse(text, name)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub parallel: bool,
    pub tolerances: Tolerances,
}

impl RunOptions {
    /// Defaults, with tolerances from `ADMLAB_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let tolerances = Tolerances::from_env().map_err(|e| ExperimentError::Parse {
            source_name: "ADMLAB_TOL".into(),
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        Ok(RunOptions { parallel: false, tolerances })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeOutput {
    pub op: String,
    pub passed: bool,
    pub result: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub scenario: String,
    pub passed: bool,
    pub probes: Vec<ProbeOutput>,
    pub tolerances: Tolerances,
    /// Rows `(index, abscissa, hawking_mass, running_extrapolation)` from curve probes.
    #[serde(skip)]
    pub curve_rows: Vec<CurveRow>,
    /// Excluded from serialized output so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub index: f64,
    pub abscissa: f64,
    pub hawking_mass: f64,
    pub running_extrapolation: f64,
}

/// Hawking masses at `count` geometric abscissae in `range`, with the running limit estimate.
///
/// Area radii are used whenever the manifold has a graph picture; arclengths otherwise.
pub fn emit_mass_curve(gm: &GeneratedManifold, range: (f64, f64), count: usize) -> crate::geometry::Result<(Frame, Vec<CurveRow>)> {
    use crate::geometry::GeometryError;
    if count < 2 {
        return Err(GeometryError::InvalidParameter(format!("count must be at least 2, got {count}")));
    }
    if !(range.0 > 0.0 && range.1 > range.0) {
        return Err(GeometryError::InvalidParameter(format!("invalid range {range:?}")));
    }
    let ratio = (range.1 / range.0).powf(1.0 / (count as f64 - 1.0));
    let xs: Vec<f64> = (0..count).map(|k| if k + 1 == count { range.1 } else { range.0 * ratio.powi(k as i32) }).collect();
    let (frame, masses, noise) = match gm.graph() {
        Ok(g) => (Frame::Graph, xs.iter().map(|&r| hawking_mass_graph(&g, r)).collect::<crate::geometry::Result<Vec<_>>>()?, g.tol.limit_rel_tol),
        Err(_) => {
            let p = gm.profile().map_err(|e| GeometryError::Domain(e.to_string()))?;
            (Frame::Profile, xs.iter().map(|&s| hawking_mass_profile(&p, s)).collect::<crate::geometry::Result<Vec<_>>>()?, p.tol.limit_rel_tol)
        }
    };
    let rows = (0..count)
        .map(|k| {
            let running = if k >= 3 {
                limit_extrapolate(&xs[..=k], &masses[..=k], 1.0, noise).map_or(masses[k], |e| e.value.as_f64())
            } else {
                masses[k]
            };
            CurveRow { index: 0.0, abscissa: xs[k], hawking_mass: masses[k], running_extrapolation: running }
        })
        .collect();
    Ok((frame, rows))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

struct Runner {
    options: RunOptions,
    rows: Vec<CurveRow>,
}

type ProbeResult = std::result::Result<(bool, Value), String>;

impl Runner {
    fn build(&self, spec: &FamilySpec) -> std::result::Result<GeneratedManifold, String> {
        spec.build().map(|g| g.with_tolerances(self.options.tolerances)).map_err(|e| e.to_string())
    }

    fn manifold_probe(&mut self, gm: &GeneratedManifold, probe: &ManifoldProbe) -> ProbeResult {
        let err = |e: &dyn std::fmt::Display| e.to_string();
        match probe {
            ManifoldProbe::Validate => {
                let p = gm.profile().map_err(|e| err(&e))?;
                let report = validate_rotsym(&p);
                Ok((true, to_value(&report)))
            }
            ManifoldProbe::Consistency => {
                let c = gm.consistency().map_err(|e| err(&e))?;
                Ok((c.all(), to_value(&c)))
            }
            ManifoldProbe::Mass { method, chart_radius } => {
                let limit = match method {
                    MassMethod::Limit | MassMethod::Both => Some(adm_mass_limit(&gm.geometry).map_err(|e| err(&e))?),
                    MassMethod::Chart => None,
                };
                let chart = match method {
                    MassMethod::Chart | MassMethod::Both => {
                        let g = gm.graph().map_err(|e| err(&e))?;
                        Some(adm_mass_chart(&g, &[*chart_radius]).map_err(|e| err(&e))?[0].1)
                    }
                    MassMethod::Limit => None,
                };
                let mut passed = true;
                if let (Some(l), Some(expected)) = (limit, gm.expected_adm) {
                    passed &= match (l.value.finite(), expected.finite()) {
                        (Some(a), Some(b)) => (a - b).abs() <= ADM_TOL,
                        (None, None) => true,
                        _ => false,
                    };
                }
                if let (Some(l), Some(c)) = (limit.and_then(|l| l.value.finite()), chart) {
                    passed &= (l - c).abs() < 1e-3;
                }
                Ok((passed, json!({ "limit": limit, "chart": chart, "expected": gm.expected_adm })))
            }
            ManifoldProbe::MassCurve { range, count } => {
                let (frame, rows) = emit_mass_curve(gm, (range[0], range[1]), *count).map_err(|e| err(&e))?;
                let summary = json!({ "frame": frame, "rows": rows.len() });
                self.rows.extend(rows);
                Ok((true, summary))
            }
            ManifoldProbe::Region { area, expect_empty, expect_boundary_hawking } => {
                let reg = region_with_area(gm, *area).map_err(|e| err(&e))?;
                let mut passed = expect_empty.map_or(true, |e| e == reg.is_empty());
                if let Some(h) = expect_boundary_hawking {
                    passed &= reg.boundary_hawking.is_some_and(|b| (b - h).abs() <= ADM_TOL);
                }
                Ok((passed, to_value(&reg)))
            }
            ManifoldProbe::FlatNorm { against, window } => {
                let other = self.build(against)?;
                let (f, g) = (gm.graph().map_err(|e| err(&e))?, other.graph().map_err(|e| err(&e))?);
                let est = flat_norm_upper(&f, &g, window[0], window[1]).map_err(|e| err(&e))?;
                Ok((true, to_value(&est)))
            }
        }
    }

    fn sequence_probe(&mut self, seq: &SequenceScenario, probe: &SequenceProbe) -> ProbeResult {
        let err = |e: &dyn std::fmt::Display| e.to_string();
        match probe {
            SequenceProbe::Consistency => {
                let all = seq.members.iter().map(|m| m.consistency().map_err(|e| err(&e))).collect::<std::result::Result<Vec<_>, _>>()?;
                Ok((all.iter().all(|c| c.all()), to_value(&all)))
            }
            SequenceProbe::MassCurves { range, count } => {
                for (gm, &index) in seq.members.iter().zip(&seq.indices) {
                    let (_, rows) = emit_mass_curve(gm, (range[0], range[1]), *count).map_err(|e| err(&e))?;
                    self.rows.extend(rows.into_iter().map(|r| CurveRow { index, ..r }));
                }
                Ok((true, json!({ "members": seq.members.len() })))
            }
            SequenceProbe::DetectBlowup { expect_divergent, expect_r_star, tolerance } => {
                let rep = detect_blowup(seq).map_err(|e| err(&e))?;
                let passed = expect_divergent.map_or(true, |d| d == rep.r_star.is_some())
                    && match (expect_r_star, rep.r_star) {
                    (None, _) => true,
                    (Some(e), Some(r)) => (e - r).abs() <= *tolerance,
                    (Some(_), None) => false,
                };
                Ok((passed, to_value(&rep)))
            }
            SequenceProbe::UniformLimit { against, sup_tol } => {
                let lim = uniform_limit(seq).map_err(|e| err(&e))?;
                let mut passed = true;
                let mut sup_error = None;
                if let Some(spec) = against {
                    let g = self.build(spec)?.graph().map_err(|e| err(&e))?;
                    let mut worst = 0.0f64;
                    for k in 0..=seq.grid {
                        let r = seq.window.0 + (seq.window.1 - seq.window.0) * k as f64 / seq.grid as f64;
                        let d = (lim.graph.f(r).map_err(|e| err(&e))? - g.f(r).map_err(|e| err(&e))?).abs();
                        worst = worst.max(d);
                    }
                    passed = worst < *sup_tol;
                    sup_error = Some(worst);
                }
                Ok((passed, json!({ "sup_differences": lim.sup_differences, "sup_error": sup_error })))
            }
            SequenceProbe::DerivativeConvergence { limit, r0, expect_converges } => {
                let g = self.build(limit)?.graph().map_err(|e| err(&e))?;
                let rep = derivative_convergence(seq, &g, *r0).map_err(|e| err(&e))?;
                Ok((expect_converges.map_or(true, |e| e == rep.converges), to_value(&rep)))
            }
            SequenceProbe::FlatNormToLimit { limit, expect_nonincreasing, expect_final_below } => {
                let g = self.build(limit)?.graph().map_err(|e| err(&e))?;
                let (a, b) = seq.window;
                let bounds = seq
                    .member_graphs()
                    .map_err(|e| err(&e))?
                    .iter()
                    .map(|f| flat_norm_upper(f, &g, a, b).map(|e| e.upper_bound).map_err(|e| err(&e)))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                let mut passed = true;
                if *expect_nonincreasing {
                    passed &= bounds.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-12);
                }
                if let Some(t) = expect_final_below {
                    passed &= bounds.last().is_some_and(|b| b < t);
                }
                Ok((passed, json!({ "upper_bounds": bounds })))
            }
            SequenceProbe::Lsc { limit, expect_holds, expect_cause } => {
                let space = match limit {
                    Some(spec) => LimitSpace::Manifold(Box::new(self.build(spec)?)),
                    None => LimitSpace::Unknown,
                };
                let rep = lsc_check(seq, &space);
                let passed = expect_holds.map_or(true, |e| e == rep.inequality_holds)
                    && expect_cause.map_or(true, |c| c == rep.violation_cause);
                Ok((passed, to_value(&rep)))
            }
            SequenceProbe::Regions { area, limit, tolerance } => {
                let lim = region_with_area(&self.build(limit)?, *area).map_err(|e| err(&e))?;
                let members = seq.members.iter().map(|m| region_with_area(m, *area).map_err(|e| err(&e))).collect::<std::result::Result<Vec<_>, _>>()?;
                let masses: Vec<Option<f64>> = seq.members.iter().map(|m| adm_mass_limit(&m.geometry).ok().and_then(|e| e.value.finite())).collect();
                // Hawking mass monotonicity: each member's ADM mass bounds its region's boundary mass.
                let mut passed = members.iter().zip(&masses).all(|(r, m)| match (r.boundary_hawking, m) {
                    (Some(h), Some(m)) => h <= m + ADM_TOL,
                    _ => true,
                });
                if let (Some(last), Some(target)) = (members.last().and_then(|r| r.boundary_hawking), lim.boundary_hawking) {
                    passed &= (last - target).abs() <= *tolerance;
                }
                Ok((passed, json!({ "members": members, "limit": lim, "member_masses": masses })))
            }
        }
    }
}

fn op_name<T: Serialize>(probe: &T) -> String {
    to_value(probe).get("op").and_then(Value::as_str).unwrap_or("?").to_string()
}

pub fn run_scenario(scenario: &Scenario, options: RunOptions) -> Result<RunResult> {
    let start = Instant::now();
    let mut runner = Runner { options, rows: Vec::new() };
    let failed = |index: usize, op: String, diagnostic: String| ExperimentError::ProbeFailed { index, op, diagnostic };
    let mut probes = Vec::new();
    match &scenario.subject {
        Subject::Manifold { manifold, probes: list } => {
            if !list.is_empty() {
                let gm = runner.build(manifold).map_err(|d| failed(0, "build".into(), d))?;
                for (k, probe) in list.iter().enumerate() {
                    let op = op_name(probe);
                    let (passed, result) = runner.manifold_probe(&gm, probe).map_err(|d| failed(k, op.clone(), d))?;
                    probes.push(ProbeOutput { op, passed, result });
                }
            }
        }
        Subject::Sequence { sequence, probes: list } => {
            if !list.is_empty() {
                let mut seq = sequence.build(options.parallel).map_err(|e| failed(0, "build".into(), e.to_string()))?;
                seq.members = seq.members.into_iter().map(|m| m.with_tolerances(options.tolerances)).collect();
                for (k, probe) in list.iter().enumerate() {
                    let op = op_name(probe);
                    let (passed, result) = runner.sequence_probe(&seq, probe).map_err(|d| failed(k, op.clone(), d))?;
                    probes.push(ProbeOutput { op, passed, result });
                }
            }
        }
    }
    Ok(RunResult {
        scenario: scenario.name.clone(),
        passed: probes.iter().all(|p| p.passed),
        probes,
        tolerances: options.tolerances,
        curve_rows: runner.rows,
        wall_time: start.elapsed(),
    })
}

pub fn write_curve_csv<W: std::io::Write>(rows: &[CurveRow], with_index: bool, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if with_index {
        w.write_record(["index", "abscissa", "hawking_mass", "running_extrapolation"])?;
    } else {
        w.write_record(["abscissa", "hawking_mass", "running_extrapolation"])?;
    }
    for r in rows {
        let fields = [r.index, r.abscissa, r.hawking_mass, r.running_extrapolation].map(|v| format!("{v:e}"));
        let fields = if with_index { &fields[..] } else { &fields[1..] };
        w.write_record(fields)?;
    }
    w.flush()
}

/// Writes the requested outputs once, after the run.
pub fn write_outputs(result: &RunResult, outputs: &Outputs) -> Result<()> {
    let io = |path: &Path, e: std::io::Error| ExperimentError::Io { path: path.to_path_buf(), message: e.to_string() };
    if let Some(path) = &outputs.csv {
        let file = std::fs::File::create(path).map_err(|e| io(path, e))?;
        write_curve_csv(&result.curve_rows, true, std::io::BufWriter::new(file)).map_err(|e| io(path, e))?;
    }
    if let Some(path) = &outputs.json {
        let text = serde_json::to_string_pretty(result).expect("run results serialize");
        std::fs::write(path, text + "\n").map_err(|e| io(path, e))?;
    }
    Ok(())
}

/// Geometry summary used by the `mass` command.
pub fn geometry_form(g: &Geometry) -> &'static str {
    match g {
        Geometry::Profile(_) => "profile",
        Geometry::Graph(_) => "graph",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cylinder_append, flat, schwarzschild, Form};

    #[test]
    fn schwarzschild_curve_is_constant() {
        let gm = schwarzschild(1.0, 3, Form::Graph).unwrap();
        let (frame, rows) = emit_mass_curve(&gm, (3.0, 1000.0), 20).unwrap();
        assert_eq!(frame, Frame::Graph);
        assert_eq!(rows.len(), 20);
        assert!((rows[0].abscissa - 3.0).abs() < 1e-12 && rows[19].abscissa == 1000.0);
        for r in &rows {
            assert!((r.hawking_mass - 1.0).abs() < 1e-9);
            assert!((r.running_extrapolation - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn flat_and_cylinder_curves() {
        let (_, rows) = emit_mass_curve(&flat(3).unwrap(), (1.0, 100.0), 5).unwrap();
        assert!(rows.iter().all(|r| r.hawking_mass == 0.0));
        let (_, rows) = emit_mass_curve(&cylinder_append(1.0, 10.0, 0.0, 3).unwrap(), (2.0, 100.0), 8).unwrap();
        assert!(rows.iter().all(|r| (r.hawking_mass - 1.0).abs() < 1e-12));
        assert!(emit_mass_curve(&flat(3).unwrap(), (1.0, 100.0), 1).is_err());
    }

    #[test]
    fn builtins_parse() {
        for (name, _) in BUILTINS {
            let s = builtin(name).unwrap();
            assert_eq!(s.name, name);
        }
    }

    #[test]
    fn empty_probe_list_succeeds() {
        let s = Scenario::parse(
            r#"{"schema": 1, "name": "nothing", "manifold": {"family": "schwarzschild", "params": {"m": 1}}, "probes": []}"#,
            "inline",
        )
        .unwrap();
        let r = run_scenario(&s, RunOptions::default()).unwrap();
        assert!(r.passed && r.probes.is_empty());
    }

    #[test]
    fn strict_parsing() {
        let unknown = r#"{"schema": 1, "name": "x", "manifold": {"family": "flat"}, "colour": 3}"#;
        assert!(matches!(Scenario::parse(unknown, "t"), Err(ExperimentError::Parse { .. })));
        let version = r#"{"schema": 2, "name": "x", "manifold": {"family": "flat"}}"#;
        assert!(matches!(Scenario::parse(version, "t"), Err(ExperimentError::Invalid(_))));
        let bad_probe = r#"{"schema": 1, "name": "x", "manifold": {"family": "flat"}, "probes": [{"op": "warp"}]}"#;
        assert!(matches!(Scenario::parse(bad_probe, "t"), Err(ExperimentError::Parse { .. })));
        let wrong_kind = r#"{"schema": 1, "name": "x", "manifold": {"family": "flat"}, "probes": [{"op": "lsc"}]}"#;
        assert!(Scenario::parse(wrong_kind, "t").is_err());
        let bad_line = "{\"schema\": 1,\n \"name\": 3}";
        match Scenario::parse(bad_line, "t") {
            Err(ExperimentError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mass_probe_cross_checks_chart() {
        let s = Scenario::parse(
            r#"{"schema": 1, "name": "m", "manifold": {"family": "schwarzschild", "params": {"m": 1}},
                "probes": [{"op": "mass", "method": "both"}, {"op": "region", "area": 201.06192982974676, "expect_boundary_hawking": 1.0}]}"#,
            "inline",
        )
        .unwrap();
        let r = run_scenario(&s, RunOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
