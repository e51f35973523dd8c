use crate::numerics::Jet;

use super::profile::{BoundaryKind, Profile};
use super::{unit_sphere_area, GeometryError, RadialGraph, Result};

/// Scalar curvature of `ds² + h² g_sphere` from a jet of `h`.
pub fn curvature_from_jet(n: usize, j: Jet) -> f64 {
    let nf = n as f64;
    (nf - 1.0) * (-2.0 * j.d2 / j.value + (nf - 2.0) * (1.0 - j.d1 * j.d1) / (j.value * j.value))
}

/// Below this fraction of the length scale a pole is treated by its series.
const POLE_CUTOFF: f64 = 1e-8;

pub fn scalar_curvature(p: &Profile, s: f64) -> Result<f64> {
    let j = p.jet(s)?;
    let scale = p.length_scale();
    if s < POLE_CUTOFF * scale && p.boundary_kind()? == BoundaryKind::Pole {
        // h = s + c s³ + O(s⁵) gives R(0) = −6n(n−1)c; fit c from h″ away from the pole.
        let probe = 1e-3 * scale.min(p.s_max);
        let c = p.jet(probe)?.d2 / (6.0 * probe);
        let nf = p.n as f64;
        return Ok(-6.0 * nf * (nf - 1.0) * c);
    }
    if !(j.value > 0.0) {
        return Err(GeometryError::Singular { s });
    }
    Ok(curvature_from_jet(p.n, j))
}

/// Mean curvature `(n−1)h′/h` of the sphere at arclength `s`.
pub fn mean_curvature_sphere(p: &Profile, s: f64) -> Result<f64> {
    let j = p.jet(s)?;
    if !(j.value > 0.0) {
        return Err(GeometryError::Singular { s });
    }
    Ok((p.n as f64 - 1.0) * j.d1 / j.value)
}

pub fn hawking_mass_profile(p: &Profile, s: f64) -> Result<f64> {
    let (h, deficit) = p.slope_deficit(s)?;
    Ok(0.5 * h.powi(p.n as i32 - 2) * deficit)
}

pub fn hawking_mass_graph(g: &RadialGraph, r: f64) -> Result<f64> {
    let fp = g.slope(r)?;
    let rn = r.powi(g.n as i32 - 2);
    if fp.is_infinite() {
        return Ok(0.5 * rn);
    }
    Ok(0.5 * rn * fp * fp / (1.0 + fp * fp))
}

/// Hawking mass of a hypersurface with the given area and `∫|H|^{n−1} dA`.
pub fn hawking_mass_general(n: usize, area: f64, mean_curv_integral: f64) -> f64 {
    let nf = n as f64;
    let omega = unit_sphere_area(n);
    let area_part = (area / omega).powf((nf - 2.0) / (nf - 1.0));
    let willmore = (mean_curv_integral / omega).powf(2.0 / (nf - 1.0)) / ((nf - 1.0) * (nf - 1.0));
    0.5 * area_part * (1.0 - willmore)
}
