//! Numerical kernels shared by the geometry, family and convergence layers.
//!
//! Everything here is pure: no caches, no global state. Downstream code treats
//! the results as exact to the tolerances carried in [`Tolerances`].

mod diff;
mod extrapolate;
mod mollify;
mod quadrature;
mod roots;
mod sampled;

pub use diff::{derivative, second_derivative};
pub use extrapolate::{limit_extrapolate, LimitEstimate, LimitValue};
pub use mollify::{mollify_corner, mollify_corner_with_jets, smoothstep, Mollified, QuinticBlend};
pub use quadrature::{gauss_legendre, integrate, integrate_rel, integrate_with, EndpointBehavior};
pub use roots::{find_root, newton_bracketed};
pub use sampled::{DerivativePolicy, Sampled1D};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("quadrature did not converge: estimate {estimate}, error {error} after {intervals} subintervals")]
    NoConvergence { estimate: f64, error: f64, intervals: usize },
    #[error("mollifier annulus [{lo}, {hi}] leaves the domain [{domain_lo}, {domain_hi}]")]
    DomainTooSmall { lo: f64, hi: f64, domain_lo: f64, domain_hi: f64 },
    #[error("samples decrease by {drop} at abscissa {abscissa} (index {index})")]
    NotMonotone { index: usize, abscissa: f64, drop: f64 },
    #[error("root is not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Absolute quadrature tolerance.
    pub quad_abs_tol: f64,
    /// Relative finite-difference step.
    pub deriv_step: f64,
    /// Relative tolerance for limits and verdicts.
    pub limit_rel_tol: f64,
    /// Root-finding tolerance (relative to the bracket scale).
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { quad_abs_tol: 1e-10, deriv_step: 1e-6, limit_rel_tol: 1e-6, root_tol: 1e-12 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.quad_abs_tol, self.deriv_step, self.limit_rel_tol, self.root_tol];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(NumericsError::InvalidInput(format!("tolerances must be strictly positive: {self:?}")))
        }
    }

    /// Parses either a single number (the quadrature tolerance) or a comma
    /// separated list of `key=value` pairs with keys `quad`, `deriv`, `limit`, `root`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tol = Tolerances::default();
        let text = text.trim();
        if let Ok(v) = text.parse::<f64>() {
            tol.quad_abs_tol = v;
        } else {
            for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| NumericsError::InvalidInput(format!("expected key=value, got `{part}`")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| NumericsError::InvalidInput(format!("bad number in `{part}`")))?;
                match key.trim() {
                    "quad" | "quad_abs_tol" => tol.quad_abs_tol = value,
                    "deriv" | "deriv_step" => tol.deriv_step = value,
                    "limit" | "limit_rel_tol" => tol.limit_rel_tol = value,
                    "root" | "root_tol" => tol.root_tol = value,
                    other => return Err(NumericsError::InvalidInput(format!("unknown tolerance `{other}`"))),
                }
            }
        }
        tol.validate()?;
        Ok(tol)
    }

    /// Reads `ADMLAB_TOL`, falling back to the defaults when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var("ADMLAB_TOL") {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Value and first two derivatives of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        Jet { value, d1, d2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_parsing() {
        assert_eq!(Tolerances::parse("1e-8").unwrap().quad_abs_tol, 1e-8);
        let t = Tolerances::parse("quad=1e-9, root=1e-13").unwrap();
        assert_eq!(t.quad_abs_tol, 1e-9);
        assert_eq!(t.root_tol, 1e-13);
        assert_eq!(t.deriv_step, 1e-6);
        assert!(Tolerances::parse("quad=-1").is_err());
        assert!(Tolerances::parse("bogus=1").is_err());
    }
}
