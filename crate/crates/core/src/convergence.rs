//! Sequence analysis: flat-norm bounds, blow-up detection, uniform and
//! derivative convergence, area-bounded regions and the lower-semicontinuity verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{FamilyError, FamilySpec, GeneratedManifold};
use crate::geometry::validate::CURVATURE_TOL;
use crate::geometry::{
    adm_mass_limit, hawking_mass_profile, minimal_sphere_scan, unit_sphere_area, validate_rotsym, Geometry,
    GeometryError, GraphShape, RadialGraph,
};
use crate::numerics::{integrate_rel, limit_extrapolate, DerivativePolicy, LimitValue, Sampled1D};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvergenceError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("sup differences {sup_differences:?} do not decrease along the tail")]
    NotCauchy { sup_differences: Vec<f64> },
    #[error("limit is not differentiable at r = {r0}: one-sided slopes {left} and {right}")]
    NotDifferentiable { r0: f64, left: f64, right: f64 },
    #[error("graphs blow up beyond r = {r_star}")]
    Divergent { r_star: f64 },
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
}

impl From<crate::numerics::NumericsError> for ConvergenceError {
    fn from(e: crate::numerics::NumericsError) -> Self {
        ConvergenceError::Geometry(e.into())
    }
}

pub type Result<T> = std::result::Result<T, ConvergenceError>;

/// How member graphs are translated vertically before comparison.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    /// Graphs as generated.
    #[default]
    Unshifted,
    /// Each graph shifted to vanish at this radius.
    ZeroAt(f64),
}

/// An indexed family of manifolds and the settings of the probes run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceScenario {
    pub members: Vec<GeneratedManifold>,
    /// Index of each member; drives the liminf extrapolation.
    pub indices: Vec<f64>,
    pub window: (f64, f64),
    pub grid: usize,
    pub baseline: Baseline,
    /// Fan member-wise work across threads.
    #[serde(skip)]
    pub parallel: bool,
}

pub const DEFAULT_GRID: usize = 400;

impl SequenceScenario {
    pub fn new(members: Vec<GeneratedManifold>, window: (f64, f64)) -> Result<Self> {
        let indices = (1..=members.len()).map(|i| i as f64).collect();
        Self::with_indices(members, indices, window)
    }

    pub fn with_indices(members: Vec<GeneratedManifold>, indices: Vec<f64>, window: (f64, f64)) -> Result<Self> {
        if members.len() < 3 {
            return Err(ConvergenceError::InvalidSequence(format!("need at least 3 members, got {}", members.len())));
        }
        if indices.len() != members.len() || indices.windows(2).any(|w| !(w[1] > w[0])) || !(indices[0] > 0.0) {
            return Err(ConvergenceError::InvalidSequence("indices must be positive and strictly increasing".into()));
        }
        if !(window.0 >= 0.0 && window.1 > window.0 && window.1.is_finite()) {
            return Err(ConvergenceError::InvalidSequence(format!("invalid window {window:?}")));
        }
        let n = members[0].geometry.n();
        if members.iter().any(|m| m.geometry.n() != n) {
            return Err(ConvergenceError::InvalidSequence("members differ in dimension".into()));
        }
        Ok(SequenceScenario { members, indices, window, grid: DEFAULT_GRID, baseline: Baseline::Unshifted, parallel: false })
    }

    pub fn with_baseline(mut self, baseline: Baseline) -> Self {
        self.baseline = baseline;
        self
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid.max(2);
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn n(&self) -> usize {
        self.members[0].geometry.n()
    }

    fn map<T: Send, F: Fn(&GeneratedManifold) -> T + Sync + Send>(&self, f: F) -> Vec<T> {
        if self.parallel {
            self.members.par_iter().map(f).collect()
        } else {
            self.members.iter().map(f).collect()
        }
    }

    /// Member graphs after the baseline shift.
    pub fn member_graphs(&self) -> Result<Vec<RadialGraph>> {
        self.map(|m| {
            let g = m.graph()?;
            Ok(match self.baseline {
                Baseline::Unshifted => g,
                Baseline::ZeroAt(r) => g.shifted_to_zero_at(r).map_err(ConvergenceError::from)?,
            })
        })
        .into_iter()
        .collect()
    }

    /// Probe grid on the window, after checking every graph covers it.
    fn probe_grid(&self, graphs: &[RadialGraph]) -> Result<Vec<f64>> {
        let (a, b) = self.window;
        for (i, g) in graphs.iter().enumerate() {
            if a < g.a || b > g.r_max {
                return Err(ConvergenceError::DomainMismatch(format!(
                    "member {i} lives on [{}, {}], window is [{a}, {b}]",
                    g.a, g.r_max
                )));
            }
        }
        Ok((0..=self.grid).map(|k| a + (b - a) * k as f64 / self.grid as f64).collect())
    }

    fn tail_start(&self) -> usize {
        let len = self.members.len();
        len - (len / 3).max(2).min(len)
    }
}

/// Parameter sweep over a template spec; `base.` prefixes address the rescaled base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

/// Serialized form of a [`SequenceScenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<FamilySpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vary: Vec<Sweep>,
    pub window: [f64; 2],
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub baseline: Baseline,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn set_param(spec: &mut FamilySpec, path: &str, value: f64) -> Result<()> {
    match path.strip_prefix("base.") {
        Some(rest) => match spec.base.as_deref_mut() {
            Some(base) => set_param(base, rest, value),
            None => Err(ConvergenceError::InvalidSequence(format!("`{path}` needs a base spec"))),
        },
        None => {
            spec.params.insert(path.to_string(), value);
            Ok(())
        }
    }
}

impl SequenceSpec {
    /// Member specs with their indices.
    pub fn expand(&self) -> Result<(Vec<FamilySpec>, Vec<f64>)> {
        match (&self.members, &self.template) {
            (Some(list), None) if self.vary.is_empty() => Ok((list.clone(), (1..=list.len()).map(|i| i as f64).collect())),
            (None, Some(template)) => {
                let Some(first) = self.vary.first() else {
                    return Err(ConvergenceError::InvalidSequence("template needs at least one sweep".into()));
                };
                if self.vary.iter().any(|s| s.values.len() != first.values.len()) {
                    return Err(ConvergenceError::InvalidSequence("sweeps differ in length".into()));
                }
                let mut specs = Vec::with_capacity(first.values.len());
                for k in 0..first.values.len() {
                    let mut spec = template.clone();
                    for sweep in &self.vary {
                        set_param(&mut spec, &sweep.param, sweep.values[k])?;
                    }
                    specs.push(spec);
                }
                Ok((specs, first.values.clone()))
            }
            _ => Err(ConvergenceError::InvalidSequence("give either `members` or `template` with `vary`".into())),
        }
    }

    pub fn build(&self, parallel: bool) -> Result<SequenceScenario> {
        let (specs, indices) = self.expand()?;
        let members: Vec<Result<GeneratedManifold>> = if parallel {
            specs.par_iter().map(|s| s.build().map_err(Into::into)).collect()
        } else {
            specs.iter().map(|s| s.build().map_err(Into::into)).collect()
        };
        let members = members.into_iter().collect::<Result<Vec<_>>>()?;
        let indices = if indices.windows(2).all(|w| w[1] > w[0]) && indices[0] > 0.0 {
            indices
        } else {
            (1..=members.len()).map(|i| i as f64).collect()
        };
        Ok(SequenceScenario::with_indices(members, indices, (self.window[0], self.window[1]))?
            .with_grid(self.grid)
            .with_baseline(self.baseline)
            .with_parallel(parallel))
    }
}

/// Upper bound for the flat distance between two graphs over an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatNormEstimate {
    /// `(n+1)`-volume of the region between the graphs.
    pub between_volume: f64,
    /// `n`-volume of the vertical cylinders closing the region at both radii.
    pub boundary_cylinders: f64,
    pub upper_bound: f64,
}

pub fn flat_norm_upper(f: &RadialGraph, g: &RadialGraph, a: f64, b: f64) -> Result<FlatNormEstimate> {
    if f.n != g.n {
        return Err(ConvergenceError::DomainMismatch(format!("dimensions {} and {}", f.n, g.n)));
    }
    if !(b > a) || a < f.a.max(g.a) || b > f.r_max.min(g.r_max) {
        return Err(ConvergenceError::DomainMismatch(format!(
            "[{a}, {b}] not inside [{}, {}] ∩ [{}, {}]",
            f.a, f.r_max, g.a, g.r_max
        )));
    }
    let n = f.n as i32;
    let omega = unit_sphere_area(f.n);
    let gap = |r: f64| match (f.f(r), g.f(r)) {
        (Ok(x), Ok(y)) => (x - y).abs(),
        _ => f64::NAN,
    };
    let mut cuts = vec![a, b];
    for (lo, hi) in f.features().into_iter().chain(g.features()) {
        cuts.extend([lo, hi].into_iter().filter(|&x| x > a && x < b));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut between = 0.0;
    for w in cuts.windows(2) {
        between += integrate_rel(|r| gap(r) * r.powi(n - 1), w[0], w[1], f.tol.quad_abs_tol, 1e-10)?;
    }
    let between_volume = omega * between;
    let boundary_cylinders = omega * (a.powi(n - 1) * gap(a) + b.powi(n - 1) * gap(b));
    Ok(FlatNormEstimate { between_volume, boundary_cylinders, upper_bound: between_volume + boundary_cylinders })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    /// Smallest radius beyond which the graphs grow without bound.
    pub r_star: Option<f64>,
    /// `½ r_*^{n−2}`, an upper bound for the mass of any limit.
    pub mass_bound: Option<f64>,
}

/// Multiple of the height scale the last member must rise above the first.
const BLOWUP_FACTOR: f64 = 10.0;

pub fn detect_blowup(seq: &SequenceScenario) -> Result<BlowupReport> {
    let graphs = seq.member_graphs()?;
    let grid = seq.probe_grid(&graphs)?;
    let values: Vec<Vec<f64>> = graphs.iter().map(|g| grid.iter().map(|&r| g.f(r)).collect()).collect::<std::result::Result<_, _>>()?;
    let first = &values[0];
    let span = first.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v)) - first.iter().fold(f64::INFINITY, |a, &v| a.min(v));
    let height_scale = span.max(seq.window.1 - seq.window.0);
    let tail = seq.tail_start();
    let diverges = |k: usize| {
        let last = values[values.len() - 1][k];
        let rising = values[tail..].windows(2).all(|w| w[1][k] > w[0][k]);
        rising && last > first[k] + BLOWUP_FACTOR * height_scale
    };
    let flags: Vec<bool> = (0..grid.len()).map(diverges).collect();
    let r_star = (0..grid.len()).find(|&k| flags[k..].iter().all(|&d| d)).map(|k| grid[k]);
    let n = seq.n() as i32;
    Ok(BlowupReport { r_star, mass_bound: r_star.map(|r| 0.5 * r.powi(n - 2)) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformLimit {
    /// Pointwise limit on the probe grid, interpolated.
    pub graph: RadialGraph,
    /// `sup |f_{i+1} − f_i|` over the window for consecutive members.
    pub sup_differences: Vec<f64>,
}

pub fn uniform_limit(seq: &SequenceScenario) -> Result<UniformLimit> {
    if let Some(r_star) = detect_blowup(seq)?.r_star {
        return Err(ConvergenceError::Divergent { r_star });
    }
    let graphs = seq.member_graphs()?;
    let grid = seq.probe_grid(&graphs)?;
    let values: Vec<Vec<f64>> = graphs.iter().map(|g| grid.iter().map(|&r| g.f(r)).collect()).collect::<std::result::Result<_, _>>()?;
    let sup_differences: Vec<f64> = values
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs())))
        .collect();
    let scale = 1.0 + values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let noise = 1e-9 * scale;
    let tail = &sup_differences[seq.tail_start().min(sup_differences.len() - 1)..];
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0] + noise) && tail[tail.len() - 1] < tail[0].max(noise) + noise;
    if !decreasing {
        return Err(ConvergenceError::NotCauchy { sup_differences });
    }
    let last = values.last().expect("at least three members").clone();
    let (a, b) = seq.window;
    let interp = Sampled1D::new(grid, last, DerivativePolicy::CenteredDifferences)?;
    let graph = RadialGraph::with_domain(seq.n(), a, b, 0.0, GraphShape::Samples(interp))?;
    Ok(UniformLimit { graph, sup_differences })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub converges: bool,
    /// `|f_N′(r0) − f′(r0)|` for the last member.
    pub gap: f64,
    pub member_slopes: Vec<f64>,
    pub limit_slope: f64,
}

/// Absolute slope tolerance, scaled by `1 + |f′(r0)|`.
const SLOPE_TOL: f64 = 1e-4;

pub fn derivative_convergence(seq: &SequenceScenario, limit: &RadialGraph, r0: f64) -> Result<DerivativeReport> {
    let h = 1e-5 * r0.abs().max(1.0);
    if r0 - h < limit.a || r0 + h > limit.r_max {
        return Err(ConvergenceError::DomainMismatch(format!("r0 = {r0} not interior to the limit's domain")));
    }
    let (fl, f0, fr) = (limit.f(r0 - h)?, limit.f(r0)?, limit.f(r0 + h)?);
    let (left, right) = ((f0 - fl) / h, (fr - f0) / h);
    let limit_slope = limit.slope(r0)?;
    let curvature_room = 1e-3 * (1.0 + limit_slope.abs());
    if (left - right).abs() > curvature_room {
        return Err(ConvergenceError::NotDifferentiable { r0, left, right });
    }
    let graphs = seq.member_graphs()?;
    let member_slopes = graphs.iter().map(|g| g.slope(r0)).collect::<std::result::Result<Vec<_>, _>>()?;
    let gaps: Vec<f64> = member_slopes.iter().map(|s| (s - limit_slope).abs()).collect();
    let tol = SLOPE_TOL * (1.0 + limit_slope.abs());
    let tail = &gaps[seq.tail_start()..];
    let gap = gaps[gaps.len() - 1];
    let converges = gap <= tol && tail.windows(2).all(|w| w[1] <= w[0] + tol);
    Ok(DerivativeReport { converges, gap, member_slopes, limit_slope })
}

/// The region between the boundary and the symmetric sphere of a given area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionExtract {
    pub area: f64,
    /// Arclength of the bounding sphere; `None` when the region is empty.
    pub s_a: Option<f64>,
    pub radius: Option<f64>,
    pub boundary_hawking: Option<f64>,
    pub diameter_bound: Option<f64>,
    pub depth: Option<f64>,
}

impl RegionExtract {
    pub fn is_empty(&self) -> bool {
        self.s_a.is_none()
    }
}

pub fn region_with_area(gm: &GeneratedManifold, area: f64) -> Result<RegionExtract> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(ConvergenceError::InvalidSequence(format!("area must be positive, got {area}")));
    }
    let p = gm.profile()?;
    let n = p.n;
    let omega = unit_sphere_area(n);
    let boundary_area = omega * p.h(0.0)?.powi(n as i32 - 1);
    let empty = RegionExtract { area, s_a: None, radius: None, boundary_hawking: None, diameter_bound: None, depth: None };
    if area <= boundary_area * (1.0 + 1e-12) {
        return Ok(empty);
    }
    let radius = (area / omega).powf(1.0 / (n as f64 - 1.0));
    let s_a = p.arclength_at_radius(radius)?.ok_or_else(|| {
        ConvergenceError::DomainMismatch(format!("no symmetric sphere of area {area} within s ≤ {}", p.s_max))
    })?;
    let max_h = p
        .scan_grid()?
        .into_iter()
        .filter(|&s| s <= s_a)
        .chain([0.0, s_a])
        .map(|s| p.h(s))
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok(RegionExtract {
        area,
        s_a: Some(s_a),
        radius: Some(radius),
        boundary_hawking: Some(hawking_mass_profile(&p, s_a)?),
        diameter_bound: Some(s_a + std::f64::consts::PI * max_h),
        depth: Some(s_a),
    })
}

/// What the limit of a sequence is known to be.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitSpace {
    Manifold(Box<GeneratedManifold>),
    Graph(Box<RadialGraph>),
    /// Unknown; the blow-up bound is used when available.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LimitMass {
    Value(LimitValue),
    /// Only an upper bound is known.
    UpperBound(f64),
    /// The limit is not asymptotically flat.
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationCause {
    None,
    NegativeScalarCurvature,
    InteriorMinimalSurface,
    #[serde(rename = "limit-not-AF")]
    LimitNotAf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LscReport {
    /// ADM masses of the members; `NaN` (null) where undefined.
    pub masses: Vec<f64>,
    pub liminf_estimate: LimitValue,
    pub limit_mass: LimitMass,
    pub tolerance: f64,
    pub inequality_holds: bool,
    pub violation_cause: ViolationCause,
}

/// Floor on the verdict tolerance.
pub const LSC_TOL: f64 = 1e-5;

/// Lower semicontinuity check: is the limit's mass at most the liminf of the masses?
pub fn lsc_check(seq: &SequenceScenario, limit: &LimitSpace) -> LscReport {
    let estimates = seq.map(|m| adm_mass_limit(&m.geometry).ok());
    let masses: Vec<f64> = estimates.iter().map(|e| e.map_or(f64::NAN, |e| e.value.as_f64())).collect();
    let mut error = estimates.iter().flatten().map(|e| e.error).filter(|e| e.is_finite()).fold(0.0f64, f64::max);
    let liminf_estimate = liminf(&seq.indices, &masses, seq.tail_start(), &mut error);

    let limit_estimate = match limit {
        LimitSpace::Manifold(gm) => adm_mass_limit(&gm.geometry).ok(),
        LimitSpace::Graph(g) => adm_mass_limit(&Geometry::Graph((**g).clone())).ok(),
        LimitSpace::Unknown => None,
    };
    let limit_mass = match (limit, limit_estimate) {
        (_, Some(e)) => {
            if e.error.is_finite() {
                error = error.max(e.error);
            }
            LimitMass::Value(e.value)
        }
        (LimitSpace::Unknown, None) => match detect_blowup(seq) {
            Ok(BlowupReport { mass_bound: Some(b), .. }) => LimitMass::UpperBound(b),
            _ => LimitMass::Undefined,
        },
        (_, None) => LimitMass::Undefined,
    };
    let tolerance = LSC_TOL.max(10.0 * error);
    let bound = match limit_mass {
        LimitMass::Value(v) => Some(v),
        LimitMass::UpperBound(b) => Some(LimitValue::Finite(b)),
        LimitMass::Undefined => None,
    };
    let inequality_holds = match (bound, liminf_estimate) {
        (None, _) => true,
        (Some(_), LimitValue::Infinite) => true,
        (Some(LimitValue::Infinite), LimitValue::Finite(_)) => false,
        (Some(LimitValue::Finite(x)), LimitValue::Finite(l)) => x <= l + tolerance,
    };
    let violation_cause = if bound.is_none() {
        ViolationCause::LimitNotAf
    } else if inequality_holds {
        ViolationCause::None
    } else {
        diagnose(seq)
    };
    LscReport { masses, liminf_estimate, limit_mass, tolerance, inequality_holds, violation_cause }
}

/// Liminf of a finite prefix: extrapolated limit when the masses rise, tail infimum otherwise.
fn liminf(indices: &[f64], masses: &[f64], tail: usize, error: &mut f64) -> LimitValue {
    let finite: Vec<(f64, f64)> = indices.iter().copied().zip(masses.iter().copied()).filter(|(_, m)| !m.is_nan()).collect();
    if finite.iter().any(|(_, m)| m.is_infinite()) && finite.iter().skip(tail).all(|(_, m)| m.is_infinite()) {
        return LimitValue::Infinite;
    }
    let (x, y): (Vec<f64>, Vec<f64>) = finite.iter().filter(|(_, m)| m.is_finite()).copied().unzip();
    if y.is_empty() {
        return LimitValue::Finite(f64::NAN);
    }
    let last = y[y.len() - 1];
    if y.len() >= 4 {
        if let Ok(e) = limit_extrapolate(&x, &y, 1.0, 1e-9) {
            return match e.value {
                LimitValue::Infinite => LimitValue::Infinite,
                LimitValue::Finite(v) => {
                    *error = error.max(e.error);
                    LimitValue::Finite(v.max(last))
                }
            };
        }
    }
    let start = tail.min(y.len() - 1);
    LimitValue::Finite(y[start..].iter().copied().fold(f64::INFINITY, f64::min))
}

fn diagnose(seq: &SequenceScenario) -> ViolationCause {
    let causes = seq.map(|m| {
        let Ok(p) = m.profile() else { return ViolationCause::None };
        if validate_rotsym(&p).min_scalar_curvature < -CURVATURE_TOL {
            ViolationCause::NegativeScalarCurvature
        } else if minimal_sphere_scan(&p).is_ok_and(|v| !v.is_empty()) {
            ViolationCause::InteriorMinimalSurface
        } else {
            ViolationCause::None
        }
    });
    if causes.contains(&ViolationCause::NegativeScalarCurvature) {
        ViolationCause::NegativeScalarCurvature
    } else if causes.contains(&ViolationCause::InteriorMinimalSurface) {
        ViolationCause::InteriorMinimalSurface
    } else {
        ViolationCause::None
    }
}
