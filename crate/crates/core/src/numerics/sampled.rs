use serde::{Deserialize, Serialize};

use super::{Jet, NumericsError, Result};

/// Where the node slopes of a [`Sampled1D`] come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativePolicy {
    /// Slopes supplied alongside the samples.
    Analytic(Vec<f64>),
    /// Fritsch–Carlson limited centered differences (monotone data stays monotone).
    CenteredDifferences,
}

/// Piecewise cubic Hermite interpolant on strictly increasing nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampled1D {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    policy: DerivativePolicy,
}

impl Sampled1D {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, policy: DerivativePolicy) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(NumericsError::InvalidInput("need at least two nodes".into()));
        }
        if nodes.len() != values.len() {
            return Err(NumericsError::InvalidInput("nodes and values differ in length".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::InvalidInput("nodes must be strictly increasing".into()));
        }
        if values.iter().chain(&nodes).any(|v| !v.is_finite()) {
            return Err(NumericsError::InvalidInput("samples must be finite".into()));
        }
        let slopes = match &policy {
            DerivativePolicy::Analytic(s) => {
                if s.len() != nodes.len() {
                    return Err(NumericsError::InvalidInput("slope count differs from node count".into()));
                }
                s.clone()
            }
            DerivativePolicy::CenteredDifferences => pchip_slopes(&nodes, &values),
        };
        Ok(Sampled1D { nodes, values, slopes, policy })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        *self.nodes.last().expect("at least two nodes")
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.first() && x <= self.last()
    }

    /// Value and derivatives of the interpolant; `None` outside the node range.
    pub fn jet(&self, x: f64) -> Option<Jet> {
        if !self.contains(x) {
            return None;
        }
        let k = match self.nodes.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.nodes[k], self.nodes[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        let dv = (6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1;
        let ddv = (12.0 * t - 6.0) * y0 + (6.0 * t - 4.0) * m0 + (-12.0 * t + 6.0) * y1 + (6.0 * t - 2.0) * m1;
        Some(Jet::new(v, dv / h, ddv / (h * h)))
    }

    pub fn value(&self, x: f64) -> Option<f64> {
        self.jet(x).map(|j| j.value)
    }

    pub fn policy(&self) -> &DerivativePolicy {
        &self.policy
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_stays_monotone() {
        let x: Vec<f64> = (0..20).map(|k| k as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|v| v.min(3.0)).collect();
        let s = Sampled1D::new(x.clone(), y.clone(), DerivativePolicy::CenteredDifferences).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((s.value(*a).unwrap() - b).abs() < 1e-14);
        }
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=950 {
            let v = s.value(k as f64 * 0.01).unwrap();
            assert!(v >= prev - 1e-14);
            prev = v;
        }
        assert!(s.value(-0.1).is_none());
    }

    #[test]
    fn analytic_slopes_reproduce_cubic() {
        let x: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let d: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        let s = Sampled1D::new(x, y, DerivativePolicy::Analytic(d)).unwrap();
        let j = s.jet(2.3).unwrap();
        assert!((j.value - 2.3f64.powi(3)).abs() < 1e-12);
        assert!((j.d1 - 3.0 * 2.3f64.powi(2)).abs() < 1e-12);
        assert!((j.d2 - 6.0 * 2.3).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(Sampled1D::new(vec![0.0], vec![1.0], DerivativePolicy::CenteredDifferences).is_err());
        assert!(Sampled1D::new(vec![0.0, 0.0], vec![1.0, 2.0], DerivativePolicy::CenteredDifferences).is_err());
    }
}
