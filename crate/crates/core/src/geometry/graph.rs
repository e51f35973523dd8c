//! Radial graphs `x ↦ f(|x|)` in Euclidean `ℝⁿ⁺¹`.

use serde::{Deserialize, Serialize};

use crate::numerics::{find_root, integrate_rel, mollify_corner_with_jets, newton_bracketed, Jet, QuinticBlend, Sampled1D, Tolerances};

use super::mass_model::{horizon_radius, MassModel};
use super::profile::Profile;
use super::{check_dimension, GeometryError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum GraphShape {
    /// Horizontal hyperplane.
    Flat,
    /// Graph of the manifold with the given Hawking mass function.
    Mass(MassModel),
    /// Schwarzschild of mass `m` capped at `height`, corner replaced by `blend`.
    FlattenOut { m: f64, height: f64, blend: QuinticBlend },
    /// `factor·inner(r/factor)`.
    Rescaled { inner: Box<GraphShape>, factor: f64 },
    /// `inner(r) + amplitude·sin(frequency·r)`.
    Wiggle { inner: Box<GraphShape>, amplitude: f64, frequency: f64 },
    Samples(Sampled1D),
    /// Isometric embedding of a profile with increasing areas.
    FromProfile(Box<Profile>),
}

/// `∫_a^r sqrt(1 + f′²)`, in closed form on Schwarzschild pieces where `f′` blows up.
fn shape_arclength(shape: &GraphShape, n: usize, tol: &Tolerances, a: f64, r: f64) -> Result<f64> {
    match shape {
        GraphShape::Mass(m) => Ok(m.arclength(r, n, tol)? - m.arclength(a, n, tol)?),
        GraphShape::FlattenOut { m, blend, .. } if a < blend.lo => {
            let model = MassModel::Constant { m: *m };
            let mid = r.min(blend.lo);
            let head = model.arclength(mid, n, tol)? - model.arclength(a, n, tol)?;
            Ok(head + if r > mid { quadrature_arclength(shape, n, tol, mid, r)? } else { 0.0 })
        }
        GraphShape::Rescaled { inner, factor } => Ok(factor * shape_arclength(inner, n, tol, a / factor, r / factor)?),
        GraphShape::FromProfile(p) => {
            let at = |x: f64| p.arclength_at_radius(x)?.ok_or_else(|| GeometryError::Domain(format!("no sphere of radius {x}")));
            Ok(at(r)? - at(a)?)
        }
        _ => quadrature_arclength(shape, n, tol, a, r),
    }
}

fn quadrature_arclength(shape: &GraphShape, n: usize, tol: &Tolerances, a: f64, r: f64) -> Result<f64> {
    let mut pts = vec![a];
    for (lo, hi) in shape.features(n, tol)? {
        pts.extend([lo, hi].into_iter().filter(|&x| x > a && x < r));
    }
    pts.push(r);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let speed = |x: f64| match shape.slopes(x, n, tol) {
        Ok((fp, _)) => (1.0 + fp * fp).sqrt(),
        Err(_) => f64::NAN,
    };
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate_rel(speed, w[0], w[1], tol.quad_abs_tol, 1e-13)?;
    }
    Ok(total)
}

/// `f′` and `f″` from `h′` and `h″` (derivatives in `s`).
fn graph_slopes_from_profile(dh: f64, ddh: f64) -> (f64, f64) {
    if dh <= 0.0 {
        return (f64::INFINITY, f64::NEG_INFINITY);
    }
    let fp = (1.0 / (dh * dh) - 1.0).max(0.0).sqrt();
    let fpp = if fp > 0.0 { -ddh / (fp * dh.powi(4)) } else { 0.0 };
    (fp, fpp)
}

/// `h′` and `h″` from `f′` and `f″`.
fn profile_slopes_from_graph(fp: f64, fpp: f64) -> (f64, f64) {
    if fp.is_infinite() {
        return (0.0, f64::NAN);
    }
    let dh = 1.0 / (1.0 + fp * fp).sqrt();
    (dh, -fp * fpp * dh.powi(4))
}

impl GraphShape {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            GraphShape::Mass(m) => m.validate(n),
            GraphShape::FlattenOut { m, height, .. } if !(*m > 0.0 && *height > 0.0) => Err(
                GeometryError::InvalidParameter(format!("need m > 0 and height > 0, got m = {m}, height = {height}")),
            ),
            GraphShape::Rescaled { factor, .. } if !(*factor > 0.0) => {
                Err(GeometryError::InvalidParameter(format!("factor must be positive, got {factor}")))
            }
            GraphShape::Rescaled { inner, .. } | GraphShape::Wiggle { inner, .. } => inner.validate(n),
            _ => Ok(()),
        }
    }

    /// Smallest radius on which the shape is defined.
    pub fn inner_radius(&self, n: usize, tol: &Tolerances) -> Result<f64> {
        Ok(match self {
            GraphShape::Flat => 0.0,
            GraphShape::Mass(m) => m.inner_radius(n),
            GraphShape::FlattenOut { m, .. } => horizon_radius(*m, n),
            GraphShape::Rescaled { inner, factor } => factor * inner.inner_radius(n, tol)?,
            GraphShape::Wiggle { inner, .. } => inner.inner_radius(n, tol)?,
            GraphShape::Samples(d) => d.first(),
            GraphShape::FromProfile(p) => p.h(0.0)?,
        })
    }

    pub fn value(&self, r: f64, n: usize, tol: &Tolerances) -> Result<f64> {
        match self {
            GraphShape::Flat => Ok(0.0),
            GraphShape::Mass(m) => m.graph_height(r, n, tol),
            GraphShape::FlattenOut { m, height, blend } => {
                if r <= blend.lo {
                    MassModel::Constant { m: *m }.graph_height(r, n, tol)
                } else if r < blend.hi {
                    Ok(blend.jet(r).value)
                } else {
                    Ok(*height)
                }
            }
            GraphShape::Rescaled { inner, factor } => Ok(factor * inner.value(r / factor, n, tol)?),
            GraphShape::Wiggle { inner, amplitude, frequency } => {
                Ok(inner.value(r, n, tol)? + amplitude * (frequency * r).sin())
            }
            GraphShape::Samples(d) => sampled(d, r).map(|j| j.value),
            GraphShape::FromProfile(p) => {
                let a = p.h(0.0)?;
                let mut pts = vec![a];
                for (lo, hi) in self.features(n, tol)? {
                    pts.extend([lo, hi].into_iter().filter(|&x| x > a && x < r));
                }
                pts.push(r);
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                let mut total = 0.0;
                let slope = |x: f64| self.slopes(x, n, tol).map(|v| v.0).unwrap_or(f64::NAN);
                for w in pts.windows(2) {
                    total += if w[0] == a {
                        // x = a + t² absorbs the square-root blow-up of f′ at a minimal boundary.
                        let t1 = (w[1] - a).sqrt();
                        let floor = a.abs().max(1.0) * 4.0 * f64::EPSILON;
                        let lifted = |t: f64| {
                            let dx = (t * t).max(floor);
                            2.0 * dx.sqrt() * slope(a + dx)
                        };
                        integrate_rel(lifted, 0.0, t1, tol.quad_abs_tol, 1e-13)?
                    } else {
                        integrate_rel(slope, w[0], w[1], tol.quad_abs_tol, 1e-13)?
                    };
                }
                Ok(total)
            }
        }
    }

    /// `(f′, f″)`; `f′ = +∞` on a vertical wall.
    pub fn slopes(&self, r: f64, n: usize, tol: &Tolerances) -> Result<(f64, f64)> {
        match self {
            GraphShape::Flat => Ok((0.0, 0.0)),
            GraphShape::Mass(m) => Ok(m.graph_slopes(r, n)),
            GraphShape::FlattenOut { m, blend, .. } => {
                if r <= blend.lo {
                    Ok(MassModel::Constant { m: *m }.graph_slopes(r, n))
                } else if r < blend.hi {
                    let j = blend.jet(r);
                    Ok((j.d1, j.d2))
                } else {
                    Ok((0.0, 0.0))
                }
            }
            GraphShape::Rescaled { inner, factor } => {
                let (d1, d2) = inner.slopes(r / factor, n, tol)?;
                Ok((d1, d2 / factor))
            }
            GraphShape::Wiggle { inner, amplitude, frequency } => {
                let (d1, d2) = inner.slopes(r, n, tol)?;
                let arg = frequency * r;
                Ok((d1 + amplitude * frequency * arg.cos(), d2 - amplitude * frequency * frequency * arg.sin()))
            }
            GraphShape::Samples(d) => sampled(d, r).map(|j| (j.d1, j.d2)),
            GraphShape::FromProfile(p) => {
                let (dh, ddh) = p
                    .slopes_at_radius(r)?
                    .ok_or_else(|| GeometryError::Domain(format!("no sphere of radius {r} in the profile")))?;
                if dh > 1.0 + 1e-12 {
                    let s = p.arclength_at_radius(r)?.unwrap_or(f64::NAN);
                    return Err(GeometryError::MassBoundViolation { s, slope: dh });
                }
                if dh < 0.0 || (dh == 0.0 && r > p.h(0.0)?) {
                    let s = p.arclength_at_radius(r)?.unwrap_or(f64::NAN);
                    return Err(GeometryError::NotMonotone { s, slope: dh });
                }
                Ok(graph_slopes_from_profile(dh.min(1.0), ddh))
            }
        }
    }

    /// `(h′, h″)` of the induced profile at area radius `r`.
    pub fn profile_slopes(&self, r: f64, n: usize, tol: &Tolerances) -> Result<(f64, f64)> {
        match self {
            GraphShape::Mass(m) => Ok(m.profile_slopes(r, n)),
            GraphShape::FlattenOut { m, blend, .. } if r <= blend.lo => Ok(MassModel::Constant { m: *m }.profile_slopes(r, n)),
            GraphShape::Rescaled { inner, factor } => {
                let (d1, d2) = inner.profile_slopes(r / factor, n, tol)?;
                Ok((d1, d2 / factor))
            }
            GraphShape::FromProfile(p) => p
                .slopes_at_radius(r)?
                .ok_or_else(|| GeometryError::Domain(format!("no sphere of radius {r} in the profile"))),
            _ => {
                let (fp, fpp) = self.slopes(r, n, tol)?;
                Ok(profile_slopes_from_graph(fp, fpp))
            }
        }
    }

    /// Radius intervals with non-analytic behaviour.
    pub fn features(&self, n: usize, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
        Ok(match self {
            GraphShape::Flat | GraphShape::Samples(_) => Vec::new(),
            GraphShape::Mass(m) => {
                let b = m.breakpoints();
                if b.is_empty() {
                    Vec::new()
                } else {
                    vec![(b[0], b[1])]
                }
            }
            GraphShape::FlattenOut { blend, .. } => vec![(blend.lo, blend.hi)],
            GraphShape::Rescaled { inner, factor } => {
                inner.features(n, tol)?.into_iter().map(|(a, b)| (a * factor, b * factor)).collect()
            }
            GraphShape::Wiggle { inner, .. } => inner.features(n, tol)?,
            GraphShape::FromProfile(p) => {
                let mut v = Vec::new();
                for (a, b) in p.features()? {
                    v.push((p.h(a)?, p.h(b)?));
                }
                v
            }
        })
    }
}

fn sampled(d: &Sampled1D, r: f64) -> Result<Jet> {
    d.jet(r).ok_or_else(|| GeometryError::Domain(format!("r = {r} outside the sampled range")))
}

/// A radial function `f` on `[a, r_max]`; its graph carries the induced metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGraph {
    pub n: usize,
    pub a: f64,
    pub r_max: f64,
    /// Additive height constant.
    pub k: f64,
    #[serde(flatten)]
    pub shape: GraphShape,
    #[serde(skip)]
    pub tol: Tolerances,
}

impl RadialGraph {
    /// A graph on `[inner radius of the shape, r_max]`.
    pub fn new(n: usize, r_max: f64, k: f64, shape: GraphShape) -> Result<Self> {
        check_dimension(n)?;
        shape.validate(n)?;
        let tol = Tolerances::default();
        let a = shape.inner_radius(n, &tol)?;
        RadialGraph::with_domain(n, a, r_max, k, shape)
    }

    pub fn with_domain(n: usize, a: f64, r_max: f64, k: f64, shape: GraphShape) -> Result<Self> {
        check_dimension(n)?;
        let tol = Tolerances::default();
        let inner = shape.inner_radius(n, &tol)?;
        if !(a >= inner && r_max > a && r_max.is_finite() && k.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "need {inner} <= a < r_max, got a = {a}, r_max = {r_max}, k = {k}"
            )));
        }
        Ok(RadialGraph { n, a, r_max, k, shape, tol })
    }

    /// Schwarzschild of mass `m` capped at `height`, smoothed on
    /// `[corner − half_width, corner + half_width]`.
    pub fn flatten_out(n: usize, m: f64, height: f64, half_width: f64, r_max: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(m > 0.0 && height > 0.0) {
            return Err(GeometryError::InvalidParameter(format!("need m > 0 and height > 0, got {m}, {height}")));
        }
        let tol = Tolerances::default();
        let base = MassModel::Constant { m };
        let rh = horizon_radius(m, n);
        let corner = if n == 3 {
            2.0 * m + height * height / (8.0 * m)
        } else {
            let mut hi = 2.0 * rh;
            while base.graph_height(hi, n, &tol)? < height {
                hi *= 2.0;
            }
            find_root(|r| base.graph_height(r, n, &tol).unwrap_or(f64::NAN) - height, rh, hi, tol.root_tol)?
        };
        let jet = |r: f64| {
            if r > corner {
                Jet::new(height, 0.0, 0.0)
            } else {
                let (d1, d2) = base.graph_slopes(r, n);
                Jet::new(base.graph_height(r, n, &tol).unwrap_or(f64::NAN), d1, d2)
            }
        };
        let mollified = mollify_corner_with_jets(|r: f64| r, jet, corner, half_width, (rh, f64::INFINITY))?;
        let blend = mollified.blend;
        if !blend.coeffs.iter().all(|c| c.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!("blend at {corner} is not finite")));
        }
        RadialGraph::new(n, r_max.max(4.0 * blend.hi), 0.0, GraphShape::FlattenOut { m, height, blend })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        if let GraphShape::FromProfile(p) = &mut self.shape {
            p.tol = tol;
        }
        self
    }

    /// The same graph shifted vertically so that `f(r) = 0`.
    pub fn shifted_to_zero_at(&self, r: f64) -> Result<Self> {
        let mut g = self.clone();
        g.k -= self.f(r)?;
        Ok(g)
    }

    fn check_domain(&self, r: f64) -> Result<()> {
        if !(r >= self.a && r <= self.r_max * (1.0 + 1e-12)) {
            return Err(GeometryError::Domain(format!("r = {r} outside [{}, {}]", self.a, self.r_max)));
        }
        Ok(())
    }

    pub fn f(&self, r: f64) -> Result<f64> {
        self.check_domain(r)?;
        Ok(self.k + self.shape.value(r, self.n, &self.tol)?)
    }

    pub fn slope(&self, r: f64) -> Result<f64> {
        self.check_domain(r)?;
        Ok(self.shape.slopes(r, self.n, &self.tol)?.0)
    }

    /// `(f′, f″)` without evaluating the height.
    pub fn slopes(&self, r: f64) -> Result<(f64, f64)> {
        self.check_domain(r)?;
        self.shape.slopes(r, self.n, &self.tol)
    }

    pub fn jet(&self, r: f64) -> Result<Jet> {
        let (d1, d2) = self.shape.slopes(r, self.n, &self.tol)?;
        Ok(Jet::new(self.f(r)?, d1, d2))
    }

    /// `(h′, h″)` of the induced profile on the sphere of radius `r`.
    pub fn profile_slopes(&self, r: f64) -> Result<(f64, f64)> {
        self.check_domain(r)?;
        self.shape.profile_slopes(r, self.n, &self.tol)
    }

    pub fn features(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<_> = self
            .shape
            .features(self.n, &self.tol)
            .unwrap_or_default()
            .into_iter()
            .filter(|&(lo, hi)| hi >= self.a && lo <= self.r_max)
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        v
    }

    /// Intrinsic distance from the inner sphere, `∫_a^r sqrt(1 + f′²)`.
    pub fn arclength(&self, r: f64) -> Result<f64> {
        self.check_domain(r)?;
        shape_arclength(&self.shape, self.n, &self.tol, self.a, r)
    }

    /// Radius of the sphere at intrinsic distance `s` from the inner sphere.
    pub fn radius_at_arclength(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(GeometryError::Domain(format!("arclength must be nonnegative, got {s}")));
        }
        if s == 0.0 {
            return Ok(self.a);
        }
        // Arclength dominates r − a, up to quadrature rounding.
        let hi = (self.a + s * (1.0 + 1e-10)).min(self.r_max);
        let f = |r: f64| match (self.arclength(r), self.shape.slopes(r, self.n, &self.tol)) {
            (Ok(v), Ok((fp, _))) => (v - s, (1.0 + fp * fp).sqrt()),
            _ => (f64::NAN, 0.0),
        };
        let top = f(hi).0;
        if top < 0.0 {
            if hi == self.r_max && top > -1e-12 * s.max(1.0) {
                return Ok(hi);
            }
            return Err(GeometryError::Domain(format!("arclength {s} beyond r_max = {}", self.r_max)));
        }
        Ok(newton_bracketed(f, self.a, hi, self.a + 0.5 * s, self.tol.root_tol)?)
    }

    /// Jet of the induced profile at arclength `s`.
    pub fn profile_jet(&self, s: f64) -> Result<Jet> {
        let r = self.radius_at_arclength(s)?;
        let (d1, d2) = self.profile_slopes(r)?;
        Ok(Jet::new(r, d1, d2))
    }

    /// Sample radii in `[a, r_max]`, dense near the core and every feature.
    pub fn scan_grid(&self) -> Vec<f64> {
        let scale = self.a.max(1.0).max(self.features().iter().map(|f| f.1).fold(0.0, f64::max));
        let near = self.r_max.min(self.a + 50.0 * scale);
        let mut pts: Vec<f64> = (0..=400).map(|k| self.a + (near - self.a) * k as f64 / 400.0).collect();
        if self.r_max > near {
            let ratio = (self.r_max / near).powf(1.0 / 200.0);
            pts.extend((1..=200).map(|k| near * ratio.powi(k)));
        }
        for (lo, hi) in self.features() {
            let pad = 0.1 * (hi - lo).max(1e-9);
            let (lo, hi) = ((lo - pad).max(self.a), (hi + pad).min(self.r_max));
            pts.extend((0..=120).map(|k| lo + (hi - lo) * k as f64 / 120.0));
        }
        pts.retain(|&r| r >= self.a && r <= self.r_max);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schwarzschild(m: f64) -> RadialGraph {
        RadialGraph::new(3, 1e4, 0.0, GraphShape::Mass(MassModel::Constant { m })).unwrap()
    }

    #[test]
    fn schwarzschild_graph_closed_form() {
        let g = schwarzschild(1.0);
        assert_eq!(g.a, 2.0);
        for &r in &[2.0, 3.0, 10.0, 100.0] {
            assert!((g.f(r).unwrap() - (8.0 * (r - 2.0)).sqrt()).abs() < 1e-12);
        }
        assert!((g.slope(3.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(g.slope(2.0).unwrap().is_infinite());
    }

    #[test]
    fn higher_dimensional_height_matches_slope() {
        let g = RadialGraph::new(4, 1e3, 0.0, GraphShape::Mass(MassModel::Constant { m: 1.0 })).unwrap();
        let r = 3.0;
        let fd = crate::numerics::derivative(|x| g.f(x).unwrap(), r, 1e-4);
        assert!((fd - g.slope(r).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn flatten_out_is_capped() {
        let g = RadialGraph::flatten_out(3, 1.0, 4.0, 0.1, 1e4).unwrap();
        assert_eq!(g.f(4.2).unwrap(), 4.0);
        assert_eq!(g.f(1e3).unwrap(), 4.0);
        assert!((g.f(3.8).unwrap() - (8.0 * 1.8f64).sqrt()).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 0..=200 {
            let v = g.f(3.85 + 0.3 * k as f64 / 200.0).unwrap();
            assert!(v >= prev - 1e-12 && v <= 4.0 + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn flatten_out_rejects_corner_at_horizon() {
        assert!(RadialGraph::flatten_out(3, 1.0, 0.1, 0.1, 1e4).is_err());
    }

    #[test]
    fn arclength_of_cone() {
        let d = Sampled1D::new(vec![0.0, 10.0], vec![0.0, 10.0], crate::numerics::DerivativePolicy::CenteredDifferences).unwrap();
        let g = RadialGraph::new(3, 10.0, 0.0, GraphShape::Samples(d)).unwrap();
        assert!((g.arclength(5.0).unwrap() - 5.0 * 2f64.sqrt()).abs() < 1e-12);
        let j = g.profile_jet(2f64.sqrt()).unwrap();
        assert!((j.value - 1.0).abs() < 1e-10);
        assert!((j.d1 - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn schwarzschild_arclength_inverse() {
        let g = schwarzschild(1.0);
        let r = g.radius_at_arclength(7.5).unwrap();
        assert!((g.arclength(r).unwrap() - 7.5).abs() < 1e-10);
    }

    #[test]
    fn json_round_trip() {
        let g = RadialGraph::flatten_out(3, 1.0, 4.0, 0.01, 1e4).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: RadialGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
