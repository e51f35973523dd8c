//! ADM mass as a limit of Hawking masses and as a coordinate flux integral.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::{gauss_legendre, limit_extrapolate, LimitEstimate};

use super::curvature::{hawking_mass_graph, hawking_mass_profile};
use super::graph::RadialGraph;
use super::profile::Profile;
use super::{Geometry, GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Abscissae are arclengths `s`.
    Profile,
    /// Abscissae are area radii `r`.
    Graph,
}

/// Hawking masses of the symmetric spheres at increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassCurve {
    pub abscissae: Vec<f64>,
    pub masses: Vec<f64>,
    pub frame: Frame,
    /// Extrapolated limit; absent when the samples do not support one.
    pub limit: Option<LimitEstimate>,
}

/// Samples used for limits.
const LIMIT_SAMPLES: usize = 8;

pub fn geometric_abscissae(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (count as f64 - 1.0));
    let mut v: Vec<f64> = (0..count).map(|k| lo * ratio.powi(k as i32)).collect();
    v[count - 1] = hi;
    v
}

impl MassCurve {
    pub fn from_profile(p: &Profile, abscissae: Vec<f64>) -> Result<Self> {
        let masses = abscissae.iter().map(|&s| hawking_mass_profile(p, s)).collect::<Result<Vec<_>>>()?;
        Ok(MassCurve::finish(abscissae, masses, Frame::Profile, p.tol.limit_rel_tol))
    }

    pub fn from_graph(g: &RadialGraph, abscissae: Vec<f64>) -> Result<Self> {
        let masses = abscissae.iter().map(|&r| hawking_mass_graph(g, r)).collect::<Result<Vec<_>>>()?;
        Ok(MassCurve::finish(abscissae, masses, Frame::Graph, g.tol.limit_rel_tol))
    }

    fn finish(abscissae: Vec<f64>, masses: Vec<f64>, frame: Frame, noise: f64) -> Self {
        let limit = if abscissae.first().is_some_and(|&x| x > 0.0) {
            limit_extrapolate(&abscissae, &masses, 1.0, noise).ok()
        } else {
            None
        };
        MassCurve { abscissae, masses, frame, limit }
    }

    /// Whether no sample drops by more than `noise·(1 + max|m|)`.
    pub fn is_nondecreasing(&self, noise: f64) -> bool {
        let scale = 1.0 + self.masses.iter().fold(0.0f64, |a, m| a.max(m.abs()));
        self.masses.windows(2).all(|w| w[1] >= w[0] - noise * scale)
    }
}

fn tail_start(features_end: f64, top: f64, floor: f64) -> f64 {
    (2.0 * features_end).max(top / 128.0).max(floor)
}

pub fn adm_mass_limit_profile(p: &Profile) -> Result<LimitEstimate> {
    let end = p.features()?.iter().map(|f| f.1).fold(0.0, f64::max);
    let lo = tail_start(end, p.s_max, 1e-6 * p.s_max);
    if lo >= p.s_max {
        return Err(GeometryError::Domain(format!("s_max = {} too small to resolve the tail", p.s_max)));
    }
    let s = geometric_abscissae(lo, p.s_max, LIMIT_SAMPLES);
    let masses = s.iter().map(|&x| hawking_mass_profile(p, x)).collect::<Result<Vec<_>>>()?;
    Ok(limit_extrapolate(&s, &masses, 1.0, p.tol.limit_rel_tol)?)
}

pub fn adm_mass_limit_graph(g: &RadialGraph) -> Result<LimitEstimate> {
    let end = g.features().iter().map(|f| f.1).fold(0.0, f64::max);
    let lo = tail_start(end, g.r_max, 2.0 * g.a.max(1e-6 * g.r_max));
    if lo >= g.r_max {
        return Err(GeometryError::Domain(format!("r_max = {} too small to resolve the tail", g.r_max)));
    }
    let r = geometric_abscissae(lo, g.r_max, LIMIT_SAMPLES);
    let masses = r.iter().map(|&x| hawking_mass_graph(g, x)).collect::<Result<Vec<_>>>()?;
    Ok(limit_extrapolate(&r, &masses, 1.0, g.tol.limit_rel_tol)?)
}

pub fn adm_mass_limit(source: &Geometry) -> Result<LimitEstimate> {
    match source {
        Geometry::Profile(p) => adm_mass_limit_profile(p),
        Geometry::Graph(g) => adm_mass_limit_graph(g),
    }
}

const POLAR_NODES: usize = 16;
const AZIMUTH_NODES: usize = 32;

/// Coordinate flux `(1/16π)∮(∂_j g_ij − ∂_i g_jj)ν^i dA` over the sphere `|x| = r`
/// in the chart `g_ij = δ_ij + f′² x_i x_j / r²`.
pub fn adm_mass_chart(g: &RadialGraph, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    if g.n != 3 {
        return Err(GeometryError::DimensionUnsupported { n: g.n });
    }
    let (cos_nodes, cos_weights) = gauss_legendre(POLAR_NODES);
    radii
        .iter()
        .map(|&r| {
            let (d1, d2) = g.slopes(r)?;
            if !d1.is_finite() {
                return Err(GeometryError::Domain(format!("vertical graph at r = {r}")));
            }
            let phi = d1 * d1;
            let dphi = 2.0 * d1 * d2;
            let mut total = 0.0;
            for (&ct, &wt) in cos_nodes.iter().zip(&cos_weights) {
                let st = (1.0 - ct * ct).sqrt();
                for k in 0..AZIMUTH_NODES {
                    let az = 2.0 * PI * k as f64 / AZIMUTH_NODES as f64;
                    let u = [st * az.cos(), st * az.sin(), ct];
                    let flux = flux_density(&u, r, phi, dphi);
                    total += wt * (2.0 * PI / AZIMUTH_NODES as f64) * flux * r * r;
                }
            }
            Ok((r, total / (16.0 * PI)))
        })
        .collect()
}

/// `∂_k g_ij` for `g_ij = δ_ij + φ(r) u_i u_j`, `u = x/r`.
pub(crate) fn metric_derivative(u: &[f64; 3], r: f64, phi: f64, dphi: f64, k: usize, i: usize, j: usize) -> f64 {
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let du = |a: usize| (delta(k, a) - u[k] * u[a]) / r;
    dphi * u[k] * u[i] * u[j] + phi * (du(i) * u[j] + u[i] * du(j))
}

fn flux_density(u: &[f64; 3], r: f64, phi: f64, dphi: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let mut v = 0.0;
        for j in 0..3 {
            v += metric_derivative(u, r, phi, dphi, j, i, j) - metric_derivative(u, r, phi, dphi, i, j, j);
        }
        acc += v * u[i];
    }
    acc
}
