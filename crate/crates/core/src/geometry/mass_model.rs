//! Rotationally symmetric geometries described by their Hawking mass as a
//! function of area radius.
//!
//! Given `μ(r)`, the metric `ds² + h(s)² g_sphere` has
//! `h' = sqrt(1 − 2μ(h)/h^{n−2})` and the graph has
//! `f'(r)² = 2μ/(r^{n−2} − 2μ)`. The Hawking mass of the sphere of area
//! radius `r` is exactly `μ(r)`, so a nondecreasing `μ` gives nonnegative
//! scalar curvature.

use serde::{Deserialize, Serialize};

use crate::numerics::{integrate_rel, newton_bracketed, smoothstep, Jet, Tolerances};

use super::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum MassModel {
    /// Schwarzschild of mass `m`; horizon at `(2m)^{1/(n−2)}`.
    Constant { m: f64 },
    /// Schwarzschild with extra mass `delta` switched on between `r1` and `r2`.
    Perturbed { m: f64, delta: f64, r1: f64, r2: f64 },
    /// Smooth pole, `μ = m rⁿ/(rⁿ + coreⁿ)`.
    Cored { m: f64, core: f64 },
    /// Flat core with mass `m` switched on between `lo` and `hi`.
    Blend { m: f64, lo: f64, hi: f64 },
}

impl MassModel {
    /// `(μ(r), μ'(r))`.
    pub fn mu(&self, r: f64, n: usize) -> (f64, f64) {
        match *self {
            MassModel::Constant { m } => (m, 0.0),
            MassModel::Perturbed { m, delta, r1, r2 } => {
                let w = r2 - r1;
                let s = smoothstep((r - r1) / w);
                (m + delta * s.value, delta * s.d1 / w)
            }
            MassModel::Cored { m, core } => {
                let x = (r / core).powi(n as i32);
                let mu = m * x / (1.0 + x);
                let dmu = if r > 0.0 { m * n as f64 * x / (r * (1.0 + x) * (1.0 + x)) } else { 0.0 };
                (mu, dmu)
            }
            MassModel::Blend { m, lo, hi } => {
                let w = hi - lo;
                let s = smoothstep((r - lo) / w);
                (m * s.value, m * s.d1 / w)
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        match *self {
            MassModel::Constant { m } | MassModel::Cored { m, .. } | MassModel::Blend { m, .. } => m,
            MassModel::Perturbed { m, delta, .. } => m + delta,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, MassModel::Cored { .. } | MassModel::Blend { .. })
    }

    /// Radius of the boundary sphere (0 for a pole).
    pub fn inner_radius(&self, n: usize) -> f64 {
        match *self {
            MassModel::Constant { m } | MassModel::Perturbed { m, .. } => horizon_radius(m, n),
            _ => 0.0,
        }
    }

    /// Radii where `μ` is not analytic.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            MassModel::Perturbed { r1, r2, .. } => vec![r1, r2],
            MassModel::Blend { lo, hi, .. } => vec![lo, hi],
            _ => Vec::new(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(GeometryError::InvalidParameter(msg));
        match *self {
            MassModel::Constant { m } if !(m > 0.0) => bad(format!("mass must be positive, got {m}")),
            MassModel::Perturbed { m, delta, r1, r2 } => {
                if !(m > 0.0 && delta >= 0.0) {
                    return bad(format!("need m > 0 and delta >= 0, got m = {m}, delta = {delta}"));
                }
                if !(r1 >= horizon_radius(m, n) && r2 > r1) {
                    return bad(format!("perturbation window [{r1}, {r2}] must lie outside the horizon"));
                }
                self.check_no_horizon(n)
            }
            MassModel::Cored { m, core } => {
                if !(m > 0.0 && core > 0.0) {
                    return bad(format!("need m > 0 and core > 0, got m = {m}, core = {core}"));
                }
                self.check_no_horizon(n)
            }
            MassModel::Blend { m, lo, hi } => {
                if !(m > 0.0 && lo > 0.0 && hi > lo) {
                    return bad(format!("need m > 0 and 0 < lo < hi, got m = {m}, [{lo}, {hi}]"));
                }
                self.check_no_horizon(n)
            }
            _ => Ok(()),
        }
    }

    /// `2μ(r) < r^{n−2}` away from the inner boundary.
    fn check_no_horizon(&self, n: usize) -> Result<()> {
        let r0 = self.inner_radius(n);
        let top = match *self {
            MassModel::Perturbed { r2, .. } => 2.0 * r2,
            MassModel::Cored { m, core } => 4.0 * core.max(horizon_radius(m, n)),
            MassModel::Blend { hi, .. } => 2.0 * hi,
            _ => return Ok(()),
        };
        let start = if r0 > 0.0 { r0 * (1.0 + 1e-9) } else { top * 1e-6 };
        for k in 0..=4000 {
            let r = start + (top - start) * k as f64 / 4000.0;
            let (mu, _) = self.mu(r, n);
            let margin = r.powi(n as i32 - 2) - 2.0 * mu;
            let on_horizon = r0 > 0.0 && k == 0;
            if !(margin > 0.0) && !on_horizon {
                return Err(GeometryError::InvalidParameter(format!(
                    "mass function closes a horizon at r = {r} (r^(n-2) - 2mu = {margin})"
                )));
            }
        }
        Ok(())
    }

    /// `h'` and `h''` as functions of the area radius.
    pub fn profile_slopes(&self, r: f64, n: usize) -> (f64, f64) {
        let (mu, dmu) = self.mu(r, n);
        let r2n = r.powi(2 - n as i32);
        let dh = (1.0 - 2.0 * mu * r2n).max(0.0).sqrt();
        let ddh = (n as f64 - 2.0) * mu * r2n / r - dmu * r2n;
        let ddh = if r == 0.0 { 0.0 } else { ddh };
        (dh, ddh)
    }

    /// `f'` and `f''` of the graph.
    pub fn graph_slopes(&self, r: f64, n: usize) -> (f64, f64) {
        let (mu, dmu) = self.mu(r, n);
        if mu == 0.0 && dmu == 0.0 {
            return (0.0, 0.0);
        }
        let d = r.powi(n as i32 - 2) - 2.0 * mu;
        if d <= 0.0 {
            return (f64::INFINITY, f64::NEG_INFINITY);
        }
        let q = 2.0 * mu / d;
        let dd = (n as f64 - 2.0) * r.powi(n as i32 - 3) - 2.0 * dmu;
        let dq = (2.0 * dmu * d - 2.0 * mu * dd) / (d * d);
        let fp = q.sqrt();
        let fpp = if fp > 0.0 { dq / (2.0 * fp) } else { 0.0 };
        (fp, fpp)
    }

    /// `(r^{n−2} − 2μ(r))/v²` at `r = r0 + v²`, free of cancellation near the horizon.
    fn horizon_quotient(&self, v: f64, n: usize) -> f64 {
        let r0 = self.inner_radius(n);
        let r = r0 + v * v;
        // divided difference of r^{n−2} between r0 and r
        let power_dd: f64 = (0..n - 2).map(|k| r.powi(k as i32) * r0.powi((n - 3 - k) as i32)).sum();
        let (mu, dmu) = self.mu(r, n);
        let (mu0, _) = self.mu(r0, n);
        let mass_dd = if v == 0.0 { dmu } else { (mu - mu0) / (v * v) };
        power_dd - 2.0 * mass_dd
    }

    /// `ds/dv` at `r = r0 + v²` for a horizon boundary.
    fn arclength_speed(&self, v: f64, n: usize) -> f64 {
        let r = self.inner_radius(n) + v * v;
        2.0 * (r.powi(n as i32 - 2) / self.horizon_quotient(v, n)).sqrt()
    }

    /// Sorted breakpoints strictly inside `(lo, hi)` bracketed by the ends.
    fn pieces(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = vec![lo];
        pts.extend(self.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        pts.push(hi);
        pts
    }

    /// Arclength from the boundary (or pole) to the sphere of area radius `r`.
    pub fn arclength(&self, r: f64, n: usize, tol: &Tolerances) -> Result<f64> {
        let r0 = self.inner_radius(n);
        if r < r0 {
            return Err(GeometryError::Domain(format!("radius {r} inside the inner boundary {r0}")));
        }
        if r == r0 {
            return Ok(0.0);
        }
        if let (MassModel::Constant { m }, 3) = (self, n) {
            let u = (r - 2.0 * m).sqrt();
            return Ok(u * r.sqrt() + 2.0 * m * ((r.sqrt() + u) / (2.0 * m).sqrt()).ln());
        }
        self.arclength_between(r0, r, n, tol)
    }

    fn arclength_between(&self, from: f64, to: f64, n: usize, tol: &Tolerances) -> Result<f64> {
        let r0 = self.inner_radius(n);
        let pts = self.pieces(from, to);
        let mut total = 0.0;
        for w in pts.windows(2) {
            let piece = if r0 > 0.0 {
                // r = r0 + v² removes the inverse square root at the horizon.
                let g = |v: f64| self.arclength_speed(v, n);
                integrate_rel(g, (w[0] - r0).sqrt(), (w[1] - r0).sqrt(), tol.quad_abs_tol, 1e-13)?
            } else {
                integrate_rel(|r| 1.0 / self.profile_slopes(r, n).0, w[0], w[1], tol.quad_abs_tol, 1e-13)?
            };
            total += piece;
        }
        Ok(total)
    }

    /// Area radius at arclength `s` from the boundary.
    pub fn radius_at(&self, s: f64, n: usize, tol: &Tolerances) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(GeometryError::Domain(format!("arclength must be nonnegative, got {s}")));
        }
        let r0 = self.inner_radius(n);
        if s == 0.0 {
            return Ok(r0);
        }
        if r0 > 0.0 {
            // Parametrize r = r0 + u²; s(u) is smooth with ds/du = 2u/h'.
            let slope = |u: f64| self.arclength_speed(u, n);
            let upper = s.sqrt();
            let u0 = if s > 4.0 * r0 { (s * 0.9).sqrt().min(upper) } else { 0.5 * upper };
            let u = newton_bracketed(
                |u| match self.arclength(r0 + u * u, n, tol) {
                    Ok(v) => (v - s, slope(u)),
                    Err(_) => (f64::NAN, 0.0),
                },
                0.0,
                upper,
                u0,
                tol.root_tol,
            )?;
            Ok(r0 + u * u)
        } else {
            let r = newton_bracketed(
                |r| match self.arclength(r, n, tol) {
                    Ok(v) => (v - s, 1.0 / self.profile_slopes(r, n).0),
                    Err(_) => (f64::NAN, 0.0),
                },
                0.0,
                s,
                s,
                tol.root_tol,
            )?;
            Ok(r)
        }
    }

    pub fn profile_jet(&self, s: f64, n: usize, tol: &Tolerances) -> Result<Jet> {
        let r = self.radius_at(s, n, tol)?;
        let (dh, ddh) = self.profile_slopes(r, n);
        Ok(Jet::new(r, dh, ddh))
    }

    /// Graph height above the inner boundary, `∫_{r0}^{r} f'`.
    pub fn graph_height(&self, r: f64, n: usize, tol: &Tolerances) -> Result<f64> {
        let r0 = self.inner_radius(n);
        if r < r0 {
            return Err(GeometryError::Domain(format!("radius {r} inside the inner boundary {r0}")));
        }
        if let (MassModel::Constant { m }, 3) = (self, n) {
            return Ok((8.0 * m * (r - 2.0 * m)).sqrt());
        }
        let pts = self.pieces(r0, r);
        let mut total = 0.0;
        for w in pts.windows(2) {
            total += if r0 > 0.0 {
                let g = |v: f64| {
                    let r = r0 + v * v;
                    2.0 * (2.0 * self.mu(r, n).0 / self.horizon_quotient(v, n)).sqrt()
                };
                integrate_rel(g, (w[0] - r0).sqrt(), (w[1] - r0).sqrt(), tol.quad_abs_tol, 1e-13)?
            } else {
                integrate_rel(|x| self.graph_slopes(x, n).0, w[0], w[1], tol.quad_abs_tol, 1e-13)?
            };
        }
        Ok(total)
    }
}

pub fn horizon_radius(m: f64, n: usize) -> f64 {
    (2.0 * m).powf(1.0 / (n as f64 - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarzschild_closed_forms_match_quadrature() {
        let tol = Tolerances::default();
        let model = MassModel::Constant { m: 1.0 };
        for &r in &[2.0001, 2.5, 3.0, 10.0, 1000.0] {
            let closed = model.arclength(r, 3, &tol).unwrap();
            let quad = model.arclength_between(2.0, r, 3, &tol).unwrap();
            assert!((closed - quad).abs() < 1e-9 * closed.max(1.0), "r = {r}: {closed} vs {quad}");
        }
    }

    #[test]
    fn radius_inverts_arclength() {
        let tol = Tolerances::default();
        for model in [MassModel::Constant { m: 1.0 }, MassModel::Cored { m: 1.0, core: 3.0 }] {
            for n in [3usize, 4] {
                for &s in &[1e-6, 0.3, 2.0, 50.0, 5e3] {
                    let r = model.radius_at(s, n, &tol).unwrap();
                    let back = model.arclength(r, n, &tol).unwrap();
                    // representing r costs one ulp, amplified by ds/dr = 1/h'
                    let conditioning = 4.0 * f64::EPSILON * r / model.profile_slopes(r, n).0;
                    assert!((back - s).abs() < 1e-10 * s.max(1.0) + conditioning, "{model:?} n={n} s={s}: {back}");
                }
            }
        }
    }

    #[test]
    fn hawking_mass_of_slopes_is_mu() {
        let model = MassModel::Perturbed { m: 1.0, delta: 0.3, r1: 3.0, r2: 6.0 };
        for &r in &[2.5, 4.0, 5.5, 9.0] {
            let (dh, _) = model.profile_slopes(r, 3);
            let mh = 0.5 * r * (1.0 - dh * dh);
            assert!((mh - model.mu(r, 3).0).abs() < 1e-12);
            let (fp, _) = model.graph_slopes(r, 3);
            let mg = 0.5 * r * fp * fp / (1.0 + fp * fp);
            assert!((mg - model.mu(r, 3).0).abs() < 1e-12);
        }
    }

    #[test]
    fn graph_slope_derivative_matches_differences() {
        let model = MassModel::Cored { m: 0.7, core: 2.5 };
        for &r in &[0.5, 1.7, 4.0, 20.0] {
            let (_, fpp) = model.graph_slopes(r, 4);
            let fd = crate::numerics::derivative(|x| model.graph_slopes(x, 4).0, r, 1e-5);
            assert!((fpp - fd).abs() < 1e-7 * (1.0 + fd.abs()), "{fpp} vs {fd}");
        }
    }

    #[test]
    fn horizon_detection() {
        assert!(MassModel::Cored { m: 1.0, core: 0.5 }.validate(3).is_err());
        assert!(MassModel::Cored { m: 1.0, core: 3.0 }.validate(3).is_ok());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::geometry::{hawking_mass_graph, hawking_mass_profile, GraphShape, Profile, ProfileShape, RadialGraph};
    use proptest::prelude::*;

    fn perturbed() -> impl Strategy<Value = MassModel> {
        (0.1f64..2.0, 0.0f64..1.0, 0.5f64..4.0, 0.2f64..5.0).prop_map(|(m, delta, gap, w)| {
            let r1 = 2.0 * (m + delta) + gap;
            MassModel::Perturbed { m, delta, r1, r2: r1 + w }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn hawking_mass_reproduces_the_mass_function(model in perturbed(), t in 0.0f64..1.0) {
            let n = 3;
            let r = model.inner_radius(n) * (1.05 + 20.0 * t);
            let g = RadialGraph::new(n, 1e3, 0.0, GraphShape::Mass(model)).unwrap();
            let p = Profile::new(n, 1e3, ProfileShape::Mass(model)).unwrap();
            let mu = model.mu(r, n).0;
            prop_assert!((hawking_mass_graph(&g, r).unwrap() - mu).abs() <= 1e-10 * (1.0 + mu));
            let s = p.arclength_at_radius(r).unwrap().unwrap();
            prop_assert!((hawking_mass_profile(&p, s).unwrap() - mu).abs() <= 1e-8 * (1.0 + mu));
        }

        #[test]
        fn hawking_mass_is_nondecreasing_in_arclength(model in perturbed()) {
            let p = Profile::new(3, 200.0, ProfileShape::Mass(model)).unwrap();
            let masses: Vec<f64> = (0..=100).map(|k| hawking_mass_profile(&p, 2.0 * k as f64).unwrap()).collect();
            prop_assert!(masses.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        }
    }
}
