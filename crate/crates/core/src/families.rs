//! Generators for the explicit example manifolds, each with ground-truth metadata.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    adm_mass_limit, curvature_from_jet, horizon_radius, minimal_sphere_scan, to_graph, unit_sphere_area,
    validate_rotsym, Geometry, GeometryError, GraphShape, MassModel, Profile, ProfileShape, RadialGraph,
};
use crate::numerics::{find_root, Jet, LimitValue, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("smoothing of half width {half_width} leaves scalar curvature {min_curvature}")]
    SmoothingFailed { half_width: f64, min_curvature: f64 },
    #[error("cannot glue: {0}")]
    GlueInfeasible(String),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

impl From<crate::numerics::NumericsError> for FamilyError {
    fn from(e: crate::numerics::NumericsError) -> Self {
        FamilyError::Geometry(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    Schwarzschild,
    FlattenOut,
    FlattenIn,
    Rescale,
    DoubledSchwarzschild,
    HiddenRegion,
    CylinderAppend,
    PerturbedSchwarzschild,
    CoredMass,
    Flat,
    Wiggle,
}

impl FamilyId {
    pub const ALL: [FamilyId; 11] = [
        FamilyId::Schwarzschild,
        FamilyId::FlattenOut,
        FamilyId::FlattenIn,
        FamilyId::Rescale,
        FamilyId::DoubledSchwarzschild,
        FamilyId::HiddenRegion,
        FamilyId::CylinderAppend,
        FamilyId::PerturbedSchwarzschild,
        FamilyId::CoredMass,
        FamilyId::Flat,
        FamilyId::Wiggle,
    ];

    /// Accepted parameter names.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            FamilyId::Schwarzschild => &["m"],
            FamilyId::FlattenOut | FamilyId::FlattenIn => &["m", "height", "smooth_half_width"],
            FamilyId::Rescale => &["m", "c"],
            FamilyId::DoubledSchwarzschild => &["epsilon", "area_factor"],
            FamilyId::HiddenRegion => &["m", "r_glue", "epsilon"],
            FamilyId::CylinderAppend => &["m", "L", "smooth_half_width"],
            FamilyId::PerturbedSchwarzschild => &["m", "delta", "r1", "r2"],
            FamilyId::CoredMass => &["m", "core"],
            FamilyId::Flat => &[],
            FamilyId::Wiggle => &["m", "amplitude", "frequency"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Graph,
    Profile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureSign {
    Nonnegative,
    SomewhereNegative,
    DistributionalInterface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Smooth,
    C11,
    Lipschitz,
}

/// A glued sphere across which `h′` jumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interface {
    pub s: f64,
    pub area: f64,
    /// Mean curvature of the interface seen from the inner region.
    pub mean_curvature_inner: f64,
    /// Mean curvature of the interface seen from the outer region.
    pub mean_curvature_outer: f64,
    /// `inner − outer`; nonnegative for distributionally nonnegative curvature.
    pub jump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedManifold {
    pub family: FamilyId,
    pub geometry: Geometry,
    /// `None` when the ADM mass is undefined.
    pub expected_adm: Option<LimitValue>,
    pub expected_curvature_sign: CurvatureSign,
    pub expected_interior_minimal_spheres: usize,
    pub regularity: Regularity,
    pub interface: Option<Interface>,
}

/// Family id, dimension and named parameters; the scenario vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: FamilyId,
    #[serde(default = "default_dimension")]
    pub n: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Form>,
    /// Manifold to rescale; Schwarzschild of mass `m` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<FamilySpec>>,
}

fn default_dimension() -> usize {
    3
}

impl FamilySpec {
    pub fn new(family: FamilyId, params: &[(&str, f64)]) -> Self {
        FamilySpec {
            family,
            n: 3,
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            form: None,
            base: None,
        }
    }

    pub fn with_dimension(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_form(mut self, form: Form) -> Self {
        self.form = Some(form);
        self
    }

    pub fn with_base(mut self, base: FamilySpec) -> Self {
        self.base = Some(Box::new(base));
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn get(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| FamilyError::InvalidSpec(format!("{:?} needs parameter `{name}`", self.family)))
    }

    fn get_or(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    pub fn check(&self) -> Result<()> {
        if self.n < 3 {
            return Err(FamilyError::InvalidSpec(format!("dimension must be at least 3, got {}", self.n)));
        }
        let allowed = self.family.params();
        for (k, v) in &self.params {
            if !allowed.contains(&k.as_str()) {
                return Err(FamilyError::InvalidSpec(format!(
                    "{:?} does not take `{k}` (expected one of {allowed:?})",
                    self.family
                )));
            }
            if !v.is_finite() {
                return Err(FamilyError::InvalidSpec(format!("parameter `{k}` must be finite")));
            }
        }
        if self.base.is_some() && self.family != FamilyId::Rescale {
            return Err(FamilyError::InvalidSpec("only rescale takes a base".into()));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<GeneratedManifold> {
        self.check()?;
        let n = self.n;
        let gm = match self.family {
            FamilyId::Schwarzschild => schwarzschild(self.get("m")?, n, self.form.unwrap_or(Form::Profile))?,
            FamilyId::FlattenOut => flatten_out(self.get("m")?, self.get("height")?, self.get_or("smooth_half_width", 0.1), n)?,
            FamilyId::FlattenIn => flatten_in(self.get("m")?, self.get("height")?, self.get_or("smooth_half_width", 1.0), n)?,
            FamilyId::Rescale => {
                let base = match &self.base {
                    Some(b) => b.build()?,
                    None => schwarzschild(self.get("m")?, n, self.form.unwrap_or(Form::Profile))?,
                };
                rescale(&base, self.get("c")?)?
            }
            FamilyId::DoubledSchwarzschild => doubled_schwarzschild(self.get("epsilon")?, n, self.get_or("area_factor", 100.0))?,
            FamilyId::HiddenRegion => hidden_region(self.get("m")?, self.get("r_glue")?, self.get("epsilon")?, n)?,
            FamilyId::CylinderAppend => {
                cylinder_append(self.get("m")?, self.get("L")?, self.get_or("smooth_half_width", 0.0), n)?
            }
            FamilyId::PerturbedSchwarzschild => perturbed_schwarzschild(
                self.get("m")?,
                self.get("delta")?,
                self.get("r1")?,
                self.get("r2")?,
                n,
            )?,
            FamilyId::CoredMass => cored_mass(self.get("m")?, self.get("core")?, n)?,
            FamilyId::Flat => flat(n)?,
            FamilyId::Wiggle => wiggle(self.get_or("m", 0.0), self.get("amplitude")?, self.get("frequency")?, n)?,
        };
        match (self.form, &gm.geometry) {
            (Some(Form::Profile), Geometry::Graph(_)) => {
                let profile = gm.geometry.profile()?;
                Ok(GeneratedManifold { geometry: Geometry::Profile(profile), ..gm })
            }
            (Some(Form::Graph), Geometry::Profile(_)) => {
                let graph = gm.graph()?;
                Ok(GeneratedManifold { geometry: Geometry::Graph(graph), ..gm })
            }
            _ => Ok(gm),
        }
    }
}

/// Truncation of the numerical domain, far beyond the core of size `scale`.
fn far(scale: f64) -> f64 {
    1e4 * scale.max(1.0)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(FamilyError::InvalidSpec(format!("{name} must be positive, got {v}")))
    }
}

fn smooth(geometry: Geometry, family: FamilyId, adm: f64) -> GeneratedManifold {
    GeneratedManifold {
        family,
        geometry,
        expected_adm: Some(LimitValue::Finite(adm)),
        expected_curvature_sign: CurvatureSign::Nonnegative,
        expected_interior_minimal_spheres: 0,
        regularity: Regularity::Smooth,
        interface: None,
    }
}

pub fn flat(n: usize) -> Result<GeneratedManifold> {
    Ok(smooth(Geometry::Profile(Profile::flat(n, far(1.0))?), FamilyId::Flat, 0.0))
}

/// Schwarzschild of mass `m`; `m = 0` gives Euclidean space.
pub fn schwarzschild(m: f64, n: usize, form: Form) -> Result<GeneratedManifold> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(FamilyError::InvalidSpec(format!("mass must be nonnegative, got {m}")));
    }
    let scale = if m > 0.0 { horizon_radius(m, n) } else { 1.0 };
    let geometry = match (form, m > 0.0) {
        (Form::Profile, true) => Geometry::Profile(Profile::new(n, far(scale), ProfileShape::Mass(MassModel::Constant { m }))?),
        (Form::Profile, false) => Geometry::Profile(Profile::flat(n, far(scale))?),
        (Form::Graph, true) => Geometry::Graph(RadialGraph::new(n, far(scale), 0.0, GraphShape::Mass(MassModel::Constant { m }))?),
        (Form::Graph, false) => Geometry::Graph(RadialGraph::new(n, far(scale), 0.0, GraphShape::Flat)?),
    };
    Ok(smooth(geometry, FamilyId::Schwarzschild, m))
}

/// Radius where the Schwarzschild graph reaches `height`.
fn schwarzschild_radius_at_height(m: f64, height: f64, n: usize) -> Result<f64> {
    if n == 3 {
        return Ok(2.0 * m + height * height / (8.0 * m));
    }
    let tol = Tolerances::default();
    let model = MassModel::Constant { m };
    let rh = horizon_radius(m, n);
    let mut hi = 2.0 * rh;
    while model.graph_height(hi, n, &tol)? < height {
        hi *= 2.0;
    }
    Ok(find_root(|r| model.graph_height(r, n, &tol).unwrap_or(f64::NAN) - height, rh, hi, tol.root_tol)?)
}

/// Schwarzschild graph capped at `height`, corner smoothed; massless but with negative curvature.
pub fn flatten_out(m: f64, height: f64, half_width: f64, n: usize) -> Result<GeneratedManifold> {
    positive("m", m)?;
    positive("height", height)?;
    positive("smooth_half_width", half_width)?;
    let corner = schwarzschild_radius_at_height(m, height, n)?;
    let g = RadialGraph::flatten_out(n, m, height, half_width, far(corner + half_width))?;
    Ok(GeneratedManifold {
        expected_curvature_sign: CurvatureSign::SomewhereNegative,
        ..smooth(Geometry::Graph(g), FamilyId::FlattenOut, 0.0)
    })
}

/// Horizontal disk at `height` joined to a Schwarzschild end of mass `m`.
///
/// The Hawking mass is switched on smoothly across
/// `[corner − half_width, corner + half_width]`, where `corner` is the radius at
/// which the Schwarzschild graph reaches `height`; a nondecreasing mass
/// function keeps the scalar curvature nonnegative.
pub fn flatten_in(m: f64, height: f64, half_width: f64, n: usize) -> Result<GeneratedManifold> {
    positive("m", m)?;
    positive("height", height)?;
    positive("smooth_half_width", half_width)?;
    let corner = schwarzschild_radius_at_height(m, height, n)?;
    let model = MassModel::Blend { m, lo: corner - half_width, hi: corner + half_width };
    if corner - half_width <= 0.0 || model.validate(n).is_err() {
        return Err(FamilyError::SmoothingFailed { half_width, min_curvature: f64::NEG_INFINITY });
    }
    let g = RadialGraph::new(n, far(corner + half_width), height, GraphShape::Mass(model))?;
    let mut min_curvature = f64::INFINITY;
    for k in 0..=2000 {
        let r = (corner - 2.0 * half_width).max(1e-3 * corner) + 4.0 * half_width * k as f64 / 2000.0;
        let (d1, d2) = g.profile_slopes(r)?;
        min_curvature = min_curvature.min(curvature_from_jet(n, Jet::new(r, d1, d2)));
    }
    if min_curvature < -crate::geometry::validate::CURVATURE_TOL {
        return Err(FamilyError::SmoothingFailed { half_width, min_curvature });
    }
    Ok(smooth(Geometry::Graph(g), FamilyId::FlattenIn, m))
}

/// The metric scaled by `c²`: `h̃(s) = c·h(s/c)`, or `f̃(r) = c·f(r/c)` for graphs.
pub fn rescale(gm: &GeneratedManifold, c: f64) -> Result<GeneratedManifold> {
    positive("c", c)?;
    let n = gm.geometry.n();
    let geometry = match &gm.geometry {
        Geometry::Profile(p) => {
            let shape = ProfileShape::Rescaled { inner: Box::new(p.shape.clone()), factor: c };
            Geometry::Profile(Profile::new(n, c * p.s_max, shape)?.with_tolerances(p.tol))
        }
        Geometry::Graph(g) => {
            let shape = GraphShape::Rescaled { inner: Box::new(g.shape.clone()), factor: c };
            Geometry::Graph(RadialGraph::with_domain(n, c * g.a, c * g.r_max, c * g.k, shape)?.with_tolerances(g.tol))
        }
    };
    let scale = c.powi(n as i32 - 2);
    Ok(GeneratedManifold {
        family: FamilyId::Rescale,
        geometry,
        expected_adm: gm.expected_adm.map(|v| match v {
            LimitValue::Finite(x) => LimitValue::Finite(scale * x),
            LimitValue::Infinite => LimitValue::Infinite,
        }),
        interface: gm.interface.map(|i| Interface {
            s: c * i.s,
            area: c.powi(n as i32 - 1) * i.area,
            mean_curvature_inner: i.mean_curvature_inner / c,
            mean_curvature_outer: i.mean_curvature_outer / c,
            jump: i.jump / c,
        }),
        ..gm.clone()
    })
}

/// Schwarzschild of mass `epsilon` reflected across its horizon, truncated on
/// the reflected side at the sphere of `area_factor` times the horizon area.
pub fn doubled_schwarzschild(epsilon: f64, n: usize, area_factor: f64) -> Result<GeneratedManifold> {
    positive("epsilon", epsilon)?;
    if !(area_factor > 1.0) {
        return Err(FamilyError::InvalidSpec(format!("area_factor must exceed 1, got {area_factor}")));
    }
    let model = MassModel::Constant { m: epsilon };
    let rh = horizon_radius(epsilon, n);
    let r_far = rh * area_factor.powf(1.0 / (n as f64 - 1.0));
    let turn = model.arclength(r_far, n, &Tolerances::default())?;
    let shape = ProfileShape::Reflected { inner: Box::new(ProfileShape::Mass(model)), turn };
    let p = Profile::new(n, turn + far(r_far), shape)?;
    Ok(GeneratedManifold {
        expected_interior_minimal_spheres: 1,
        ..smooth(Geometry::Profile(p), FamilyId::DoubledSchwarzschild, epsilon)
    })
}

/// Schwarzschild region of mass `m` out to area radius `r_glue`, glued to the
/// sphere of equal area on the reflected side of a doubled Schwarzschild of mass `epsilon`.
pub fn hidden_region(m: f64, r_glue: f64, epsilon: f64, n: usize) -> Result<GeneratedManifold> {
    positive("m", m)?;
    positive("epsilon", epsilon)?;
    if !(epsilon < m) {
        return Err(FamilyError::InvalidSpec(format!("need epsilon < m, got epsilon = {epsilon}, m = {m}")));
    }
    let rh = horizon_radius(m, n);
    if !(r_glue > rh) {
        return Err(FamilyError::InvalidSpec(format!("r_glue must exceed the horizon radius {rh}, got {r_glue}")));
    }
    let rh_eps = horizon_radius(epsilon, n);
    if r_glue < rh_eps {
        return Err(FamilyError::GlueInfeasible(format!("no sphere of radius {r_glue} outside the horizon {rh_eps}")));
    }
    let tol = Tolerances::default();
    let inner = MassModel::Constant { m };
    let outer = MassModel::Constant { m: epsilon };
    let at = inner.arclength(r_glue, n, &tol)?;
    let turn = outer.arclength(r_glue, n, &tol)?;
    let shape = ProfileShape::Glued {
        inner: Box::new(ProfileShape::Mass(inner)),
        outer: Box::new(ProfileShape::Reflected { inner: Box::new(ProfileShape::Mass(outer)), turn }),
        at,
    };
    let p = Profile::new(n, at + turn + far(r_glue), shape)?;
    let nf = n as f64 - 1.0;
    let mean_curvature_inner = nf * inner.profile_slopes(r_glue, n).0 / r_glue;
    let mean_curvature_outer = -nf * outer.profile_slopes(r_glue, n).0 / r_glue;
    Ok(GeneratedManifold {
        family: FamilyId::HiddenRegion,
        geometry: Geometry::Profile(p),
        expected_adm: Some(LimitValue::Finite(epsilon)),
        expected_curvature_sign: CurvatureSign::DistributionalInterface,
        expected_interior_minimal_spheres: 1,
        regularity: Regularity::Lipschitz,
        interface: Some(Interface {
            s: at,
            area: unit_sphere_area(n) * r_glue.powi(n as i32 - 1),
            mean_curvature_inner,
            mean_curvature_outer,
            jump: mean_curvature_inner - mean_curvature_outer,
        }),
    })
}

/// Round cylinder of length `length` attached to the horizon of Schwarzschild.
///
/// The seam is `C^{1,1}`; `_half_width` is accepted for interface stability.
pub fn cylinder_append(m: f64, length: f64, _half_width: f64, n: usize) -> Result<GeneratedManifold> {
    positive("m", m)?;
    if !(length >= 0.0 && length.is_finite()) {
        return Err(FamilyError::InvalidSpec(format!("L must be nonnegative, got {length}")));
    }
    let inner = ProfileShape::Mass(MassModel::Constant { m });
    let shape = if length > 0.0 { ProfileShape::CylinderAppended { inner: Box::new(inner), length } } else { inner };
    let p = Profile::new(n, length + far(horizon_radius(m, n)), shape)?;
    Ok(GeneratedManifold {
        family: FamilyId::CylinderAppend,
        geometry: Geometry::Profile(p),
        expected_adm: Some(LimitValue::Finite(m)),
        expected_curvature_sign: CurvatureSign::Nonnegative,
        expected_interior_minimal_spheres: usize::from(length > 0.0),
        regularity: if length > 0.0 { Regularity::C11 } else { Regularity::Smooth },
        interface: None,
    })
}

/// Schwarzschild whose mass grows by `delta` across `[r1, r2]`.
pub fn perturbed_schwarzschild(m: f64, delta: f64, r1: f64, r2: f64, n: usize) -> Result<GeneratedManifold> {
    let model = MassModel::Perturbed { m, delta, r1, r2 };
    let p = Profile::new(n, far(r2), ProfileShape::Mass(model))?;
    Ok(smooth(Geometry::Profile(p), FamilyId::PerturbedSchwarzschild, m + delta))
}

/// Smooth manifold without boundary, mass `m` spread over a core of size `core`.
pub fn cored_mass(m: f64, core: f64, n: usize) -> Result<GeneratedManifold> {
    let model = MassModel::Cored { m, core };
    let scale = core.max(if m > 0.0 { horizon_radius(m, n) } else { 0.0 });
    let p = Profile::new(n, far(scale), ProfileShape::Mass(model))?;
    Ok(smooth(Geometry::Profile(p), FamilyId::CoredMass, m))
}

/// Schwarzschild graph (flat for `m = 0`) plus `amplitude·sin(frequency·r)`.
pub fn wiggle(m: f64, amplitude: f64, frequency: f64, n: usize) -> Result<GeneratedManifold> {
    if !(m >= 0.0) {
        return Err(FamilyError::InvalidSpec(format!("mass must be nonnegative, got {m}")));
    }
    let inner = if m > 0.0 { GraphShape::Mass(MassModel::Constant { m }) } else { GraphShape::Flat };
    let scale = if m > 0.0 { horizon_radius(m, n) } else { 1.0 };
    let shape = GraphShape::Wiggle { inner: Box::new(inner), amplitude, frequency };
    let g = RadialGraph::new(n, 1e3 * scale, 0.0, shape)?;
    Ok(GeneratedManifold {
        family: FamilyId::Wiggle,
        geometry: Geometry::Graph(g),
        expected_adm: None,
        expected_curvature_sign: CurvatureSign::SomewhereNegative,
        expected_interior_minimal_spheres: 0,
        regularity: Regularity::Smooth,
        interface: None,
    })
}

/// Outcome of checking a manifold against its own metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    pub adm: Option<crate::numerics::LimitEstimate>,
    pub adm_matches: bool,
    pub min_scalar_curvature: f64,
    pub curvature_sign_matches: bool,
    pub minimal_spheres: usize,
    pub minimal_spheres_match: bool,
}

impl Consistency {
    pub fn all(&self) -> bool {
        self.adm_matches && self.curvature_sign_matches && self.minimal_spheres_match
    }
}

/// Tolerance on the ADM mass in metadata checks.
pub const ADM_TOL: f64 = 1e-5;

impl GeneratedManifold {
    /// The graph picture; a cylinder becomes a vertical wall of its length.
    pub fn graph(&self) -> Result<RadialGraph> {
        match &self.geometry {
            Geometry::Graph(g) => Ok(g.clone()),
            Geometry::Profile(p) => match &p.shape {
                ProfileShape::CylinderAppended { inner, length } => {
                    let inner = Profile::new(p.n, p.s_max - length, (**inner).clone())?.with_tolerances(p.tol);
                    Ok(to_graph(&inner, *length)?)
                }
                _ => Ok(to_graph(p, 0.0)?),
            },
        }
    }

    pub fn profile(&self) -> Result<Profile> {
        Ok(self.geometry.profile()?)
    }

    pub fn with_tolerances(self, tol: Tolerances) -> Self {
        GeneratedManifold { geometry: self.geometry.with_tolerances(tol), ..self }
    }

    pub fn consistency(&self) -> Result<Consistency> {
        let adm = adm_mass_limit(&self.geometry).ok();
        let adm_matches = match (self.expected_adm, adm) {
            (None, _) => true,
            (Some(LimitValue::Infinite), Some(e)) => e.value.is_infinite(),
            (Some(LimitValue::Finite(x)), Some(e)) => e.value.finite().is_some_and(|v| (v - x).abs() <= ADM_TOL),
            (Some(_), None) => false,
        };
        let profile = self.profile()?;
        let report = validate_rotsym(&profile);
        let min_r = report.min_scalar_curvature;
        let tol = crate::geometry::validate::CURVATURE_TOL;
        let curvature_sign_matches = match self.expected_curvature_sign {
            CurvatureSign::Nonnegative => min_r >= -tol,
            CurvatureSign::SomewhereNegative => min_r < -tol,
            CurvatureSign::DistributionalInterface => min_r >= -tol && self.interface.is_some_and(|i| i.jump >= 0.0),
        };
        let minimal_spheres = minimal_sphere_scan(&profile)?.len();
        Ok(Consistency {
            adm,
            adm_matches,
            min_scalar_curvature: min_r,
            curvature_sign_matches,
            minimal_spheres,
            minimal_spheres_match: minimal_spheres == self.expected_interior_minimal_spheres,
        })
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rescaling_scales_the_mass(m in 0.1f64..2.0, c in 0.25f64..8.0, n in 3usize..6) {
            let gm = rescale(&schwarzschild(m, n, Form::Profile).unwrap(), c).unwrap();
            let expected = m * c.powi(n as i32 - 2);
            prop_assert_eq!(gm.expected_adm, Some(LimitValue::Finite(expected)));
            let measured = adm_mass_limit(&gm.geometry).unwrap().value.finite().unwrap();
            prop_assert!((measured - expected).abs() <= ADM_TOL * expected.max(1.0));
        }
    }
}
