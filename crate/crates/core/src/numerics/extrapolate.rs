//! Limit estimation for monotone sequences sampled at growing abscissae.

use serde::{Deserialize, Serialize};

use super::{NumericsError, Result};

/// A limit that is either a finite number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitValue {
    Finite(f64),
    Infinite,
}

impl LimitValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            LimitValue::Finite(v) => Some(v),
            LimitValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, LimitValue::Infinite)
    }

    /// `+∞` maps to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl std::fmt::Display for LimitValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitValue::Finite(v) => write!(f, "{v}"),
            LimitValue::Infinite => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: LimitValue,
    pub error: f64,
}

/// Geometric span of abscissae needed before a divergence verdict.
const DIVERGENCE_SPAN: f64 = 8.0;

/// Richardson-style limit of `m(x) = m_∞ − c·x^{−p}` from monotone samples.
///
/// Requires at least four samples at increasing abscissae. Decreases larger
/// than the noise floor (`noise_rel·(1 + max|m|)`) are rejected with
/// [`NumericsError::NotMonotone`]. When the last increment is at least twice
/// the first one over a span of `≥ 8×` in abscissa, the samples are declared
/// divergent and the limit is `+∞`. The error bar is the change between the
/// last two Richardson estimates plus a roundoff floor.
pub fn limit_extrapolate(abscissae: &[f64], samples: &[f64], decay_exponent: f64, noise_rel: f64) -> Result<LimitEstimate> {
    if abscissae.len() != samples.len() {
        return Err(NumericsError::InvalidInput("abscissae and samples differ in length".into()));
    }
    if samples.len() < 4 {
        return Err(NumericsError::InvalidInput(format!("need at least 4 samples, got {}", samples.len())));
    }
    if !(decay_exponent > 0.0) {
        return Err(NumericsError::InvalidInput(format!("decay exponent must be positive, got {decay_exponent}")));
    }
    if abscissae.windows(2).any(|w| !(w[1] > w[0])) || abscissae[0] <= 0.0 {
        return Err(NumericsError::InvalidInput("abscissae must be positive and strictly increasing".into()));
    }
    if samples.iter().any(|m| !m.is_finite()) {
        return Err(NumericsError::InvalidInput("samples must be finite".into()));
    }
    let scale = 1.0 + samples.iter().fold(0.0f64, |acc, m| acc.max(m.abs()));
    let noise = noise_rel * scale;
    let mut worst: Option<(usize, f64)> = None;
    for (i, w) in samples.windows(2).enumerate() {
        let drop = w[0] - w[1];
        if drop > noise && worst.map_or(true, |(_, d)| drop > d) {
            worst = Some((i + 1, drop));
        }
    }
    if let Some((index, drop)) = worst {
        return Err(NumericsError::NotMonotone { index, abscissa: abscissae[index], drop });
    }

    let last = samples.len() - 1;
    if samples.iter().all(|&m| m == samples[last]) {
        return Ok(LimitEstimate { value: LimitValue::Finite(samples[last]), error: 0.0 });
    }

    let first_inc = samples[1] - samples[0];
    let last_inc = samples[last] - samples[last - 1];
    let span = abscissae[last] / abscissae[0];
    if first_inc > noise && last_inc >= 2.0 * first_inc && span >= DIVERGENCE_SPAN {
        return Ok(LimitEstimate { value: LimitValue::Infinite, error: f64::INFINITY });
    }

    let richardson = |i: usize, j: usize| {
        let wi = abscissae[i].powf(decay_exponent);
        let wj = abscissae[j].powf(decay_exponent);
        (samples[j] * wj - samples[i] * wi) / (wj - wi)
    };
    let best = richardson(last - 1, last);
    let previous = richardson(last - 2, last - 1);
    let error = (best - previous).abs() + 64.0 * f64::EPSILON * scale;
    Ok(LimitEstimate { value: LimitValue::Finite(best), error })
}
