//! Membership checks for the class of rotationally symmetric manifolds with
//! nonnegative scalar curvature, minimal or absent boundary and growing areas.

use serde::{Deserialize, Serialize};

use crate::numerics::find_root;

use super::curvature::curvature_from_jet;
use super::profile::{BoundaryKind, Profile};
use super::{scalar_curvature, Result};

/// Curvature below `−CURVATURE_TOL` counts as negative.
pub const CURVATURE_TOL: f64 = 1e-8;
/// Slack for the boundary conditions on `h′(0)`.
const BOUNDARY_TOL: f64 = 1e-6;
/// `|h′|` at or below this is a zero.
const ZERO_SLOPE: f64 = 1e-9;
/// Roots of `h′` that leave `|h′|` above this are jumps, not zeros.
const KINK_SLOPE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `h′(0) = 1` at a pole or `h′(0) = 0` at a minimal boundary.
    Boundary,
    /// `h′ > 0` on `(0, s_max]`.
    Monotone,
    /// Areas still growing at `s_max`.
    Growth,
    /// `R ≥ 0`.
    Curvature,
    /// `|h′| ≤ 1`.
    MassBound,
    /// The profile could not be evaluated.
    Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub location: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub in_rotsym: bool,
    pub violations: Vec<Violation>,
    pub min_scalar_curvature: f64,
    /// Where the scalar curvature attains `min_scalar_curvature`.
    pub min_curvature_location: f64,
    pub minimal_sphere_locations: Vec<f64>,
}

impl ValidationReport {
    pub fn violates(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

pub fn validate_rotsym(p: &Profile) -> ValidationReport {
    let mut violations = Vec::new();
    let mut record = |condition, location, value| violations.push(Violation { condition, location, value });

    match (p.boundary_kind(), p.jet(0.0)) {
        (Ok(kind), Ok(j)) => {
            let bad = match kind {
                BoundaryKind::Pole => (j.d1 - 1.0).abs() > BOUNDARY_TOL,
                BoundaryKind::MinimalBoundary => j.d1.abs() > BOUNDARY_TOL,
            };
            if bad {
                record(Condition::Boundary, 0.0, j.d1);
            }
        }
        _ => record(Condition::Evaluation, 0.0, f64::NAN),
    }

    let grid = match p.scan_grid() {
        Ok(g) => g,
        Err(_) => {
            record(Condition::Evaluation, 0.0, f64::NAN);
            Vec::new()
        }
    };
    let mut min_slope = (f64::INFINITY, 0.0);
    let mut max_slope = (f64::NEG_INFINITY, 0.0);
    let mut min_r = (f64::INFINITY, 0.0);
    for &s in &grid {
        match p.jet(s) {
            Ok(j) => {
                if j.d1 < min_slope.0 {
                    min_slope = (j.d1, s);
                }
                if j.d1.abs() > max_slope.0 {
                    max_slope = (j.d1.abs(), s);
                }
                let r = if j.value > 0.0 { curvature_from_jet(p.n, j) } else { f64::NAN };
                let r = if r.is_finite() { r } else { scalar_curvature(p, s).unwrap_or(f64::NAN) };
                if r < min_r.0 {
                    min_r = (r, s);
                }
            }
            Err(_) => record(Condition::Evaluation, s, f64::NAN),
        }
    }
    if min_slope.0 <= 0.0 {
        record(Condition::Monotone, min_slope.1, min_slope.0);
    }
    if max_slope.0 > 1.0 + 1e-9 {
        record(Condition::MassBound, max_slope.1, max_slope.0);
    }
    if min_r.0 < -CURVATURE_TOL {
        record(Condition::Curvature, min_r.1, min_r.0);
    }
    match p.jet(p.s_max) {
        Ok(j) if j.d1 > 0.0 && j.value >= 10.0 * p.length_scale() => {}
        Ok(j) => record(Condition::Growth, p.s_max, j.value),
        Err(_) => record(Condition::Evaluation, p.s_max, f64::NAN),
    }

    let minimal_sphere_locations = minimal_sphere_scan(p).unwrap_or_else(|_| {
        record(Condition::Evaluation, f64::NAN, f64::NAN);
        Vec::new()
    });
    ValidationReport {
        in_rotsym: violations.is_empty(),
        violations,
        min_scalar_curvature: min_r.0,
        min_curvature_location: min_r.1,
        minimal_sphere_locations,
    }
}

/// Interior spheres with `h′ = 0`, one location per connected zero set.
///
/// Sign changes of `h′` across a jump of the profile's slope are not zeros.
pub fn minimal_sphere_scan(p: &Profile) -> Result<Vec<f64>> {
    let grid = p.scan_grid()?;
    let slope = |s: f64| p.jet(s).map(|j| j.d1);
    let d: Vec<f64> = grid.iter().map(|&s| slope(s)).collect::<Result<_>>()?;
    let mut found = Vec::new();
    let mut in_zero_set = false;
    for k in 0..grid.len() {
        if d[k].abs() <= ZERO_SLOPE {
            if !in_zero_set {
                found.push(grid[k]);
                in_zero_set = true;
            }
            continue;
        }
        let was_zero = in_zero_set;
        in_zero_set = false;
        if k == 0 || was_zero {
            continue;
        }
        if d[k].signum() != d[k - 1].signum() {
            let root = find_root(|s| slope(s).unwrap_or(f64::NAN), grid[k - 1], grid[k], p.tol.root_tol)?;
            if slope(root)?.abs() <= KINK_SLOPE {
                found.push(root);
            }
        } else if k + 1 < grid.len() && d[k] > 0.0 && d[k] < d[k - 1] && d[k] <= d[k + 1] && d[k] < 1e-3 {
            let (s, v) = golden_min(&slope, grid[k - 1], grid[k + 1])?;
            if v.abs() <= ZERO_SLOPE {
                found.push(s);
            }
        }
    }
    Ok(found)
}

fn golden_min<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MassModel, Mode, ProfileShape};

    #[test]
    fn schwarzschild_is_valid() {
        let p = Profile::new(3, 1e4, ProfileShape::Mass(MassModel::Constant { m: 1.0 })).unwrap();
        let rep = validate_rotsym(&p);
        assert!(rep.in_rotsym, "{rep:?}");
        assert!(rep.min_scalar_curvature.abs() < 1e-9);
        assert!(rep.minimal_sphere_locations.is_empty());
    }

    #[test]
    fn flat_is_valid() {
        let rep = validate_rotsym(&Profile::flat(4, 1e3).unwrap());
        assert!(rep.in_rotsym, "{rep:?}");
        assert_eq!(rep.min_scalar_curvature, 0.0);
    }

    #[test]
    fn reflected_profile_has_one_minimal_sphere() {
        let inner = ProfileShape::Mass(MassModel::Constant { m: 0.5 });
        let p = Profile::new(3, 1e4, ProfileShape::Reflected { inner: Box::new(inner), turn: 12.0 }).unwrap();
        let found = minimal_sphere_scan(&p).unwrap();
        assert_eq!(found.len(), 1);
        assert!((found[0] - 12.0).abs() < 1e-6, "{found:?}");
        let rep = validate_rotsym(&p);
        assert!(rep.violates(Condition::Monotone));
        assert!(rep.violates(Condition::Boundary));
        assert!(!rep.violates(Condition::Curvature));
    }

    #[test]
    fn tangential_zero_is_found() {
        // h′ = 1 − cos(s − 1) vanishes tangentially at s = 1.
        let modes = vec![Mode { amplitude: -1.0, frequency: 1.0, phase: -1.0 }];
        let p = Profile::new(3, 3.0, ProfileShape::Harmonic { base: 1.0 - 1f64.sin(), slope: 1.0, modes }).unwrap();
        let found = minimal_sphere_scan(&p).unwrap();
        assert_eq!(found.len(), 1, "{found:?}");
        assert!((found[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn cylinder_segment_counts_once() {
        let inner = ProfileShape::Mass(MassModel::Constant { m: 1.0 });
        let p = Profile::new(3, 1e4, ProfileShape::CylinderAppended { inner: Box::new(inner), length: 5.0 }).unwrap();
        assert_eq!(minimal_sphere_scan(&p).unwrap().len(), 1);
    }

    #[test]
    fn glued_kink_is_not_minimal() {
        let inner = ProfileShape::Mass(MassModel::Constant { m: 1.0 });
        let outer = ProfileShape::Mass(MassModel::Constant { m: 0.5 });
        let at = MassModel::Constant { m: 1.0 }.arclength(3.0, 3, &Default::default()).unwrap();
        let turn = MassModel::Constant { m: 0.5 }.arclength(3.0, 3, &Default::default()).unwrap();
        let doubled = ProfileShape::Reflected { inner: Box::new(outer), turn };
        let p = Profile::new(3, 1e4, ProfileShape::Glued { inner: Box::new(inner), outer: Box::new(doubled), at }).unwrap();
        let found = minimal_sphere_scan(&p).unwrap();
        assert_eq!(found.len(), 1, "{found:?}");
        assert!((found[0] - (at + turn)).abs() < 1e-6);
    }
}
