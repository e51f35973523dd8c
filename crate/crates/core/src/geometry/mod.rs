//! Rotationally symmetric manifolds as warped-product profiles or radial graphs.

mod adm;
mod convert;
mod curvature;
mod graph;
pub mod mass_model;
mod profile;
pub mod validate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{LimitEstimate, NumericsError, Tolerances};

pub use adm::{adm_mass_chart, adm_mass_limit, adm_mass_limit_graph, adm_mass_limit_profile, Frame, MassCurve};
pub use convert::{to_graph, to_profile};
pub use curvature::{
    curvature_from_jet, hawking_mass_general, hawking_mass_graph, hawking_mass_profile, mean_curvature_sphere,
    scalar_curvature,
};
pub use graph::{GraphShape, RadialGraph};
pub use mass_model::{horizon_radius, MassModel};
pub use profile::{BoundaryKind, Mode, Profile, ProfileShape};
pub use validate::{minimal_sphere_scan, validate_rotsym, Condition, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("profile vanishes at interior point s = {s}")]
    Singular { s: f64 },
    #[error("areas not increasing: h'({s}) = {slope}")]
    NotMonotone { s: f64, slope: f64 },
    #[error("|h'| exceeds 1 at s = {s} (h' = {slope}), negative Hawking mass")]
    MassBoundViolation { s: f64, slope: f64 },
    #[error("only dimension 3 is supported here, got {n}")]
    DimensionUnsupported { n: usize },
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Area of the unit sphere `S^{n−1}` in `ℝⁿ`.
pub fn unit_sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / statrs::function::gamma::gamma(half)
}

pub(crate) fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(GeometryError::InvalidParameter(format!("dimension must be at least 3, got {n}")));
    }
    Ok(())
}

/// Either picture of a manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Geometry {
    Profile(Profile),
    Graph(RadialGraph),
}

impl Geometry {
    pub fn n(&self) -> usize {
        match self {
            Geometry::Profile(p) => p.n,
            Geometry::Graph(g) => g.n,
        }
    }

    /// The profile picture, converting graphs by arclength.
    pub fn profile(&self) -> Result<Profile> {
        match self {
            Geometry::Profile(p) => Ok(p.clone()),
            Geometry::Graph(g) => to_profile(g),
        }
    }

    /// The graph picture with the given additive constant for profiles.
    pub fn graph(&self, k: f64) -> Result<RadialGraph> {
        match self {
            Geometry::Profile(p) => to_graph(p, k),
            Geometry::Graph(g) => Ok(g.clone()),
        }
    }

    pub fn adm_mass_limit(&self) -> Result<LimitEstimate> {
        adm_mass_limit(self)
    }

    pub fn with_tolerances(self, tol: Tolerances) -> Self {
        match self {
            Geometry::Profile(p) => Geometry::Profile(p.with_tolerances(tol)),
            Geometry::Graph(g) => Geometry::Graph(g.with_tolerances(tol)),
        }
    }
}
