//! Corner smoothing by a quintic Hermite blend on a small annulus.
//!
//! The blend matches value, slope and curvature of the input at both ends of
//! `[corner − w, corner + w]`, so the result is C² and identical to the input
//! outside that interval.

use serde::{Deserialize, Serialize};

use super::{diff, Jet, NumericsError, Result};

/// Quintic `p(t)`, `t = (x − lo)/(hi − lo)`, stored by its monomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuinticBlend {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: [f64; 6],
}

impl QuinticBlend {
    pub fn hermite(lo: f64, hi: f64, left: Jet, right: Jet) -> Self {
        let len = hi - lo;
        let (p0, p1) = (left.value, right.value);
        let (d0, d1) = (left.d1 * len, right.d1 * len);
        let (c0, c1) = (left.d2 * len * len, right.d2 * len * len);
        let dp = p1 - p0;
        let a3 = 10.0 * dp - 6.0 * d0 - 4.0 * d1 - 1.5 * c0 + 0.5 * c1;
        let a4 = -15.0 * dp + 8.0 * d0 + 7.0 * d1 + 1.5 * c0 - c1;
        let a5 = 6.0 * dp - 3.0 * d0 - 3.0 * d1 - 0.5 * c0 + 0.5 * c1;
        QuinticBlend { lo, hi, coeffs: [p0, d0, 0.5 * c0, a3, a4, a5] }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn jet(&self, x: f64) -> Jet {
        let len = self.hi - self.lo;
        let t = (x - self.lo) / len;
        let c = &self.coeffs;
        let v = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
        let dv = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
        let ddv = 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
        Jet::new(v, dv / len, ddv / (len * len))
    }
}

/// `6t⁵ − 15t⁴ + 10t³` clamped to `[0, 1]`, with its first two derivatives in `t`.
pub fn smoothstep(t: f64) -> Jet {
    if t <= 0.0 {
        return Jet::new(0.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return Jet::new(1.0, 0.0, 0.0);
    }
    let t2 = t * t;
    Jet::new(
        t2 * t * (10.0 + t * (-15.0 + 6.0 * t)),
        30.0 * t2 * (1.0 + t * (-2.0 + t)),
        60.0 * t * (1.0 + t * (-3.0 + 2.0 * t)),
    )
}

/// A function with one corner replaced by a [`QuinticBlend`].
#[derive(Debug, Clone)]
pub struct Mollified<F> {
    pub f: F,
    pub blend: QuinticBlend,
}

impl<F: Fn(f64) -> f64> Mollified<F> {
    pub fn value(&self, x: f64) -> f64 {
        if self.blend.contains(x) {
            self.blend.jet(x).value
        } else {
            (self.f)(x)
        }
    }

    /// Value and derivatives; outside the annulus the derivatives come from
    /// centered differences of the original function.
    pub fn jet(&self, x: f64) -> Jet {
        if self.blend.contains(x) {
            self.blend.jet(x)
        } else {
            let h = 1e-4;
            Jet::new((self.f)(x), diff::derivative(&self.f, x, h), diff::second_derivative(&self.f, x, h))
        }
    }
}

fn check_domain(corner: f64, half_width: f64, domain: (f64, f64)) -> Result<(f64, f64)> {
    if !(half_width > 0.0) {
        return Err(NumericsError::InvalidInput(format!("half width must be positive, got {half_width}")));
    }
    let (lo, hi) = (corner - half_width, corner + half_width);
    if lo < domain.0 || hi > domain.1 {
        return Err(NumericsError::DomainTooSmall { lo, hi, domain_lo: domain.0, domain_hi: domain.1 });
    }
    Ok((lo, hi))
}

/// Smooths the corner of `f` using centered differences for the end data.
pub fn mollify_corner<F: Fn(f64) -> f64>(f: F, corner: f64, half_width: f64, domain: (f64, f64)) -> Result<Mollified<F>> {
    let (lo, hi) = check_domain(corner, half_width, domain)?;
    // The stencil half-width 2h stays well inside the smooth side of the corner.
    let jet = |x: f64| {
        let h = (0.05 * half_width).min(1e-2 * x.abs().max(1.0));
        let rel = h / x.abs().max(1.0);
        Jet::new(f(x), diff::derivative(&f, x, rel), diff::second_derivative(&f, x, rel))
    };
    let left = jet(lo);
    let right = jet(hi);
    for (x, j) in [(lo, left), (hi, right)] {
        if !(j.value.is_finite() && j.d1.is_finite() && j.d2.is_finite()) {
            return Err(NumericsError::NonFinite { x });
        }
    }
    Ok(Mollified { f, blend: QuinticBlend::hermite(lo, hi, left, right) })
}

/// Smooths the corner of `f` using an analytic jet callback for the end data.
pub fn mollify_corner_with_jets<F, J>(f: F, jet: J, corner: f64, half_width: f64, domain: (f64, f64)) -> Result<Mollified<F>>
where
    F: Fn(f64) -> f64,
    J: Fn(f64) -> Jet,
{
    let (lo, hi) = check_domain(corner, half_width, domain)?;
    Ok(Mollified { f, blend: QuinticBlend::hermite(lo, hi, jet(lo), jet(hi)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_matches_end_data() {
        let l = Jet::new(1.0, -2.0, 3.0);
        let r = Jet::new(-0.5, 0.25, -4.0);
        let b = QuinticBlend::hermite(0.3, 1.1, l, r);
        let a = b.jet(0.3);
        let z = b.jet(1.1);
        for (x, y) in [(a.value, l.value), (a.d1, l.d1), (a.d2, l.d2), (z.value, r.value), (z.d1, r.d1), (z.d2, r.d2)] {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn abs_corner_is_even() {
        let g = mollify_corner(f64::abs, 0.0, 0.1, (-1.0, 1.0)).unwrap();
        assert!((g.value(0.1) - 0.1).abs() < 1e-14);
        assert!((g.value(-0.1) - 0.1).abs() < 1e-14);
        assert!((g.blend.jet(0.1).d1 - 1.0).abs() < 1e-10);
        assert!((g.blend.jet(-0.1).d1 + 1.0).abs() < 1e-10);
        assert!(g.blend.jet(0.1).d2.abs() < 1e-8);
        for k in 0..100 {
            let x = 0.1 * k as f64 / 100.0;
            assert!((g.value(x) - g.value(-x)).abs() < 1e-12);
        }
    }

    #[test]
    fn min_corner_stays_below_and_monotone() {
        let f = |x: f64| x.min(1.0);
        let g = mollify_corner(f, 1.0, 0.2, (0.0, 3.0)).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=4000 {
            let x = 0.5 + k as f64 * 2.5e-4;
            let v = g.value(x);
            assert!(v <= f(x) + 1e-12, "g({x}) = {v} above min");
            assert!(v >= prev - 1e-12, "not monotone at {x}");
            prev = v;
        }
    }

    #[test]
    fn smooth_input_is_reproduced() {
        let g = mollify_corner(f64::exp, 0.5, 0.1, (-1.0, 2.0)).unwrap();
        for k in 0..=100 {
            let x = 0.4 + 0.2 * k as f64 / 100.0;
            assert!((g.value(x) - x.exp()).abs() < 5e-9);
        }
    }

    #[test]
    fn outside_annulus_is_bit_exact() {
        let f = |x: f64| (3.0 * x).sin() + x.abs();
        let g = mollify_corner(f, 0.0, 0.05, (-2.0, 2.0)).unwrap();
        for k in 0..200 {
            let x = -2.0 + 4.0 * k as f64 / 199.0;
            if x.abs() >= 0.05 {
                assert_eq!(g.value(x).to_bits(), f(x).to_bits());
            }
        }
    }

    #[test]
    fn domain_too_small() {
        assert!(matches!(mollify_corner(f64::abs, 0.0, 0.5, (-0.2, 1.0)), Err(NumericsError::DomainTooSmall { .. })));
    }

    #[test]
    fn smoothstep_ends() {
        assert_eq!(smoothstep(0.0).value, 0.0);
        assert_eq!(smoothstep(1.0).value, 1.0);
        let m = smoothstep(0.5);
        assert!((m.value - 0.5).abs() < 1e-15);
        assert!((m.d1 - 1.875).abs() < 1e-12);
    }
}
