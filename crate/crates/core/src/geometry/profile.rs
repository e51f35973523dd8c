//! Warped-product profiles `g = ds² + h(s)² g_sphere`.

use serde::{Deserialize, Serialize};

use crate::numerics::{find_root, Jet, Sampled1D, Tolerances};

use super::graph::RadialGraph;
use super::mass_model::MassModel;
use super::{check_dimension, GeometryError, Result};

/// One term `amplitude·sin(frequency·s + phase)` of a [`ProfileShape::Harmonic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ProfileShape {
    /// `h(s) = s`.
    Flat,
    /// `h ≡ radius`.
    Cylinder { radius: f64 },
    /// Defined by a Hawking mass function of the area radius.
    Mass(MassModel),
    /// `factor·inner(s/factor)`.
    Rescaled { inner: Box<ProfileShape>, factor: f64 },
    /// A cylinder of the given length on the inner boundary, then `inner`.
    CylinderAppended { inner: Box<ProfileShape>, length: f64 },
    /// `inner(|s − turn|)`.
    Reflected { inner: Box<ProfileShape>, turn: f64 },
    /// `inner` on `[0, at]`, then `outer(s − at)`.
    Glued { inner: Box<ProfileShape>, outer: Box<ProfileShape>, at: f64 },
    /// `base + slope·s + Σ amplitude·sin(frequency·s + phase)`.
    Harmonic { base: f64, slope: f64, modes: Vec<Mode> },
    Samples(Sampled1D),
    /// Arclength parametrization of a radial graph.
    FromGraph(Box<RadialGraph>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    MinimalBoundary,
    Pole,
}

impl ProfileShape {
    pub fn validate(&self, n: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(GeometryError::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            ProfileShape::Flat | ProfileShape::Samples(_) | ProfileShape::FromGraph(_) => Ok(()),
            ProfileShape::Cylinder { radius } => positive("radius", *radius),
            ProfileShape::Mass(m) => m.validate(n),
            ProfileShape::Rescaled { inner, factor } => {
                positive("factor", *factor)?;
                inner.validate(n)
            }
            ProfileShape::CylinderAppended { inner, length } => {
                if !(*length >= 0.0) {
                    return Err(GeometryError::InvalidParameter(format!("length must be nonnegative, got {length}")));
                }
                inner.validate(n)
            }
            ProfileShape::Reflected { inner, turn } => {
                positive("turn", *turn)?;
                inner.validate(n)
            }
            ProfileShape::Glued { inner, outer, at } => {
                positive("glue position", *at)?;
                inner.validate(n)?;
                outer.validate(n)
            }
            ProfileShape::Harmonic { modes, .. } => {
                if modes.iter().any(|m| !(m.amplitude.is_finite() && m.frequency.is_finite() && m.phase.is_finite())) {
                    return Err(GeometryError::InvalidParameter("harmonic modes must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn jet(&self, s: f64, n: usize, tol: &Tolerances) -> Result<Jet> {
        match self {
            ProfileShape::Flat => Ok(Jet::new(s, 1.0, 0.0)),
            ProfileShape::Cylinder { radius } => Ok(Jet::new(*radius, 0.0, 0.0)),
            ProfileShape::Mass(m) => m.profile_jet(s, n, tol),
            ProfileShape::Rescaled { inner, factor } => {
                let j = inner.jet(s / factor, n, tol)?;
                Ok(Jet::new(factor * j.value, j.d1, j.d2 / factor))
            }
            ProfileShape::CylinderAppended { inner, length } => {
                if s <= *length {
                    Ok(Jet::new(inner.jet(0.0, n, tol)?.value, 0.0, 0.0))
                } else {
                    inner.jet(s - length, n, tol)
                }
            }
            ProfileShape::Reflected { inner, turn } => {
                if s < *turn {
                    let j = inner.jet(turn - s, n, tol)?;
                    Ok(Jet::new(j.value, -j.d1, j.d2))
                } else {
                    inner.jet(s - turn, n, tol)
                }
            }
            ProfileShape::Glued { inner, outer, at } => {
                if s <= *at {
                    inner.jet(s, n, tol)
                } else {
                    outer.jet(s - at, n, tol)
                }
            }
            ProfileShape::Harmonic { base, slope, modes } => {
                let mut j = Jet::new(base + slope * s, *slope, 0.0);
                for m in modes {
                    let arg = m.frequency * s + m.phase;
                    j.value += m.amplitude * arg.sin();
                    j.d1 += m.amplitude * m.frequency * arg.cos();
                    j.d2 -= m.amplitude * m.frequency * m.frequency * arg.sin();
                }
                Ok(j)
            }
            ProfileShape::Samples(data) => data
                .jet(s)
                .ok_or_else(|| GeometryError::Domain(format!("s = {s} outside the sampled range"))),
            ProfileShape::FromGraph(g) => g.profile_jet(s),
        }
    }

    /// `(h, 1 − h′²)` with the second entry free of cancellation where the shape allows it.
    pub fn slope_deficit(&self, s: f64, n: usize, tol: &Tolerances) -> Result<Option<(f64, f64)>> {
        match self {
            ProfileShape::Flat => Ok(Some((s, 0.0))),
            ProfileShape::Cylinder { radius } => Ok(Some((*radius, 1.0))),
            ProfileShape::Mass(m) => {
                let h = m.profile_jet(s, n, tol)?.value;
                Ok(Some((h, (2.0 * m.mu(h, n).0 * h.powi(2 - n as i32)).min(1.0))))
            }
            ProfileShape::Rescaled { inner, factor } => {
                Ok(inner.slope_deficit(s / factor, n, tol)?.map(|(h, d)| (factor * h, d)))
            }
            ProfileShape::CylinderAppended { inner, length } => {
                if s <= *length {
                    Ok(Some((inner.jet(0.0, n, tol)?.value, 1.0)))
                } else {
                    inner.slope_deficit(s - length, n, tol)
                }
            }
            ProfileShape::Reflected { inner, turn } => inner.slope_deficit((s - turn).abs(), n, tol),
            ProfileShape::Glued { inner, outer, at } => {
                if s <= *at {
                    inner.slope_deficit(s, n, tol)
                } else {
                    outer.slope_deficit(s - at, n, tol)
                }
            }
            ProfileShape::FromGraph(g) => {
                let h = g.profile_jet(s)?.value;
                let fp = g.slope(h)?;
                Ok(Some((h, if fp.is_infinite() { 1.0 } else { fp * fp / (1.0 + fp * fp) })))
            }
            ProfileShape::Harmonic { .. } | ProfileShape::Samples(_) => Ok(None),
        }
    }

    /// `(h', h'')` on the outermost sphere of area radius `r`, if any.
    pub fn slopes_at_radius(&self, r: f64, n: usize, tol: &Tolerances, s_hi: f64) -> Result<Option<(f64, f64)>> {
        match self {
            ProfileShape::Flat => Ok((r >= 0.0).then_some((1.0, 0.0))),
            ProfileShape::Cylinder { radius } => Ok((r == *radius).then_some((0.0, 0.0))),
            ProfileShape::Mass(m) => Ok((r >= m.inner_radius(n)).then(|| m.profile_slopes(r, n))),
            ProfileShape::Rescaled { inner, factor } => {
                Ok(inner.slopes_at_radius(r / factor, n, tol, s_hi / factor)?.map(|(d1, d2)| (d1, d2 / factor)))
            }
            ProfileShape::CylinderAppended { inner, length } => inner.slopes_at_radius(r, n, tol, s_hi - length),
            ProfileShape::Reflected { inner, turn } => inner.slopes_at_radius(r, n, tol, s_hi - turn),
            ProfileShape::Glued { inner, outer, at } => match outer.slopes_at_radius(r, n, tol, s_hi - at)? {
                Some(v) => Ok(Some(v)),
                None => inner.slopes_at_radius(r, n, tol, *at),
            },
            ProfileShape::FromGraph(g) => {
                if r < g.a || r > g.r_max {
                    return Ok(None);
                }
                g.profile_slopes(r).map(Some)
            }
            ProfileShape::Harmonic { .. } | ProfileShape::Samples(_) => match self.arclength_at_radius(r, n, tol, s_hi)? {
                Some(s) => {
                    let j = self.jet(s, n, tol)?;
                    Ok(Some((j.d1, j.d2)))
                }
                None => Ok(None),
            },
        }
    }

    /// Arclength of the outermost sphere of area radius `r`, if any.
    pub fn arclength_at_radius(&self, r: f64, n: usize, tol: &Tolerances, s_hi: f64) -> Result<Option<f64>> {
        match self {
            ProfileShape::Flat => Ok((r >= 0.0).then_some(r)),
            ProfileShape::Cylinder { radius } => Ok((r == *radius).then_some(0.0)),
            ProfileShape::Mass(m) => {
                if r < m.inner_radius(n) {
                    Ok(None)
                } else {
                    m.arclength(r, n, tol).map(Some)
                }
            }
            ProfileShape::Rescaled { inner, factor } => {
                Ok(inner.arclength_at_radius(r / factor, n, tol, s_hi / factor)?.map(|s| s * factor))
            }
            ProfileShape::CylinderAppended { inner, length } => {
                Ok(inner.arclength_at_radius(r, n, tol, s_hi - length)?.map(|s| s + length))
            }
            ProfileShape::Reflected { inner, turn } => {
                Ok(inner.arclength_at_radius(r, n, tol, s_hi - turn)?.map(|s| s + turn))
            }
            ProfileShape::Glued { inner, outer, at } => match outer.arclength_at_radius(r, n, tol, s_hi - at)? {
                Some(s) => Ok(Some(s + at)),
                None => inner.arclength_at_radius(r, n, tol, *at),
            },
            ProfileShape::FromGraph(g) => {
                if r < g.a || r > g.r_max {
                    return Ok(None);
                }
                g.arclength(r).map(Some)
            }
            ProfileShape::Harmonic { base, slope, modes } => {
                let wiggle: f64 = modes.iter().map(|m| m.amplitude.abs()).sum();
                let hi = if *slope > 0.0 { ((r - base + wiggle) / slope + 1.0).max(0.0) } else { s_hi };
                outermost_crossing(|s| self.jet(s, n, tol).map(|j| j.value), r, 0.0, hi, tol)
            }
            ProfileShape::Samples(data) => {
                outermost_crossing(|s| self.jet(s, n, tol).map(|j| j.value), r, data.first(), data.last(), tol)
            }
        }
    }

    /// Intervals in `s` containing non-analytic behaviour (blends, seams, kinks).
    pub fn features(&self, n: usize, tol: &Tolerances) -> Result<Vec<(f64, f64)>> {
        Ok(match self {
            ProfileShape::Flat
            | ProfileShape::Cylinder { .. }
            | ProfileShape::Harmonic { .. }
            | ProfileShape::Samples(_) => Vec::new(),
            ProfileShape::Mass(m) => {
                let b = m.breakpoints();
                if b.is_empty() {
                    Vec::new()
                } else {
                    vec![(m.arclength(b[0], n, tol)?, m.arclength(b[1], n, tol)?)]
                }
            }
            ProfileShape::Rescaled { inner, factor } => inner
                .features(n, tol)?
                .into_iter()
                .map(|(a, b)| (a * factor, b * factor))
                .collect(),
            ProfileShape::CylinderAppended { inner, length } => {
                let mut v = vec![(*length, *length)];
                v.extend(inner.features(n, tol)?.into_iter().map(|(a, b)| (a + length, b + length)));
                v
            }
            ProfileShape::Reflected { inner, turn } => {
                let mut v = vec![(*turn, *turn)];
                for (a, b) in inner.features(n, tol)? {
                    if b < *turn {
                        v.push((turn - b, turn - a));
                    }
                    v.push((turn + a, turn + b));
                }
                v
            }
            ProfileShape::Glued { inner, outer, at } => {
                let mut v: Vec<_> = inner.features(n, tol)?.into_iter().filter(|f| f.0 < *at).collect();
                v.push((*at, *at));
                v.extend(outer.features(n, tol)?.into_iter().map(|(a, b)| (a + at, b + at)));
                v
            }
            ProfileShape::FromGraph(g) => {
                let mut v = Vec::new();
                for (a, b) in g.features() {
                    v.push((g.arclength(a.max(g.a))?, g.arclength(b.min(g.r_max))?));
                }
                v
            }
        })
    }

    /// Points where `h'` jumps.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            ProfileShape::Glued { inner, outer, at } => {
                let mut v: Vec<f64> = inner.kinks().into_iter().filter(|s| s < at).collect();
                v.push(*at);
                v.extend(outer.kinks().into_iter().map(|s| s + at));
                v
            }
            ProfileShape::Rescaled { inner, factor } => inner.kinks().into_iter().map(|s| s * factor).collect(),
            ProfileShape::CylinderAppended { inner, length } => inner.kinks().into_iter().map(|s| s + length).collect(),
            ProfileShape::Reflected { inner, turn } => {
                let mut v = Vec::new();
                for s in inner.kinks() {
                    if s > 0.0 && s < *turn {
                        v.push(turn - s);
                    }
                    v.push(turn + s);
                }
                v
            }
            _ => Vec::new(),
        }
    }
}

/// Largest `s` in `[lo, hi]` with `h(s) = r` and `h` crossing upward.
fn outermost_crossing<H: Fn(f64) -> Result<f64>>(h: H, r: f64, lo: f64, hi: f64, tol: &Tolerances) -> Result<Option<f64>> {
    const STEPS: usize = 2000;
    let at = |k: usize| lo + (hi - lo) * k as f64 / STEPS as f64;
    let top = h(hi)? - r;
    if top < 0.0 {
        return Ok(None);
    }
    if top == 0.0 {
        return Ok(Some(hi));
    }
    for k in (0..STEPS).rev() {
        if h(at(k))? - r <= 0.0 {
            let root = find_root(|s| h(s).map(|v| v - r).unwrap_or(f64::NAN), at(k), at(k + 1), tol.root_tol)?;
            return Ok(Some(root));
        }
    }
    Ok(None)
}

/// A rotationally symmetric metric `ds² + h(s)² g_sphere` on `[0, s_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub n: usize,
    pub s_max: f64,
    #[serde(flatten)]
    pub shape: ProfileShape,
    #[serde(skip)]
    pub tol: Tolerances,
}

impl Profile {
    pub fn new(n: usize, s_max: f64, shape: ProfileShape) -> Result<Self> {
        check_dimension(n)?;
        if !(s_max > 0.0 && s_max.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!("s_max must be positive, got {s_max}")));
        }
        shape.validate(n)?;
        Ok(Profile { n, s_max, shape, tol: Tolerances::default() })
    }

    pub fn flat(n: usize, s_max: f64) -> Result<Self> {
        Profile::new(n, s_max, ProfileShape::Flat)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        if let ProfileShape::FromGraph(g) = &mut self.shape {
            g.tol = tol;
        }
        self
    }

    fn check_domain(&self, s: f64) -> Result<()> {
        if !(s >= 0.0 && s <= self.s_max * (1.0 + 1e-12)) {
            return Err(GeometryError::Domain(format!("s = {s} outside [0, {}]", self.s_max)));
        }
        Ok(())
    }

    pub fn jet(&self, s: f64) -> Result<Jet> {
        self.check_domain(s)?;
        let j = self.shape.jet(s, self.n, &self.tol)?;
        if !(j.value.is_finite() && j.d1.is_finite() && j.d2.is_finite()) {
            return Err(GeometryError::Numerics(crate::numerics::NumericsError::NonFinite { x: s }));
        }
        Ok(j)
    }

    /// `(h, 1 − h′²)` at `s`, computed without cancellation when possible.
    pub fn slope_deficit(&self, s: f64) -> Result<(f64, f64)> {
        self.check_domain(s)?;
        if let Some(v) = self.shape.slope_deficit(s, self.n, &self.tol)? {
            if v.0.is_finite() && v.1.is_finite() {
                return Ok(v);
            }
        }
        let j = self.jet(s)?;
        Ok((j.value, 1.0 - j.d1 * j.d1))
    }

    pub fn h(&self, s: f64) -> Result<f64> {
        Ok(self.jet(s)?.value)
    }

    pub fn boundary_kind(&self) -> Result<BoundaryKind> {
        let h0 = self.h(0.0)?;
        Ok(if h0.abs() <= 1e-12 * self.length_scale() { BoundaryKind::Pole } else { BoundaryKind::MinimalBoundary })
    }

    /// Arclength of the outermost sphere of area radius `r`.
    pub fn arclength_at_radius(&self, r: f64) -> Result<Option<f64>> {
        self.shape.arclength_at_radius(r, self.n, &self.tol, self.s_max)
    }

    /// `(h', h'')` on the outermost sphere of area radius `r`.
    pub fn slopes_at_radius(&self, r: f64) -> Result<Option<(f64, f64)>> {
        self.shape.slopes_at_radius(r, self.n, &self.tol, self.s_max)
    }

    pub fn jet_at_radius(&self, r: f64) -> Result<Option<(f64, Jet)>> {
        let Some(s) = self.arclength_at_radius(r)? else { return Ok(None) };
        let Some((d1, d2)) = self.slopes_at_radius(r)? else { return Ok(None) };
        Ok(Some((s, Jet::new(r, d1, d2))))
    }

    /// Intervals in `s` that numerical scans must resolve.
    pub fn features(&self) -> Result<Vec<(f64, f64)>> {
        let mut v: Vec<_> = self
            .shape
            .features(self.n, &self.tol)?
            .into_iter()
            .filter(|&(a, _)| a <= self.s_max)
            .map(|(a, b)| (a.max(0.0), b.min(self.s_max)))
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(v)
    }

    pub fn kinks(&self) -> Vec<f64> {
        self.shape.kinks().into_iter().filter(|&s| s > 0.0 && s < self.s_max).collect()
    }

    /// Typical length of the core geometry.
    pub fn length_scale(&self) -> f64 {
        let h0 = self.shape.jet(0.0, self.n, &self.tol).map(|j| j.value.abs()).unwrap_or(0.0);
        let feat = self
            .shape
            .features(self.n, &self.tol)
            .ok()
            .and_then(|v| v.into_iter().map(|f| f.1).reduce(f64::max))
            .unwrap_or(0.0);
        1f64.max(h0).max(feat.min(self.s_max))
    }

    /// Sample points in `(0, s_max]` dense near the core and every feature.
    pub fn scan_grid(&self) -> Result<Vec<f64>> {
        let scale = self.length_scale();
        let near = self.s_max.min(50.0 * scale);
        let mut pts: Vec<f64> = (1..=400).map(|k| near * k as f64 / 400.0).collect();
        pts.push(near * 1e-4);
        pts.push(near * 1e-3);
        if self.s_max > near {
            let ratio = (self.s_max / near).powf(1.0 / 200.0);
            pts.extend((1..=200).map(|k| near * ratio.powi(k)));
        }
        for (a, b) in self.features()? {
            let pad = if b > a { 0.1 * (b - a) } else { 1e-3 * scale };
            let (lo, hi) = ((a - pad).max(0.0), (b + pad).min(self.s_max));
            pts.extend((0..=120).map(|k| lo + (hi - lo) * k as f64 / 120.0));
        }
        for s in self.kinks() {
            let d = 1e-9 * scale;
            pts.extend([s - d, s + d]);
        }
        pts.retain(|&s| s > 0.0 && s <= self.s_max);
        pts.push(self.s_max);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Ok(pts)
    }
}
