//! Hölder-exponent regression by dyadic pair differencing.

use serde::Serialize;
use thiserror::Error;

/// Fewest samples accepted by [`holder_fit`].
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolderError {
    #[error("Hölder fit needs at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("exponent undefined: all sample values are equal")]
    Degenerate,
    #[error("exponent undefined: only {0} usable scales")]
    TooFewScales(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderFit {
    /// Least-squares slope of `log ω(δ)` against `log δ`.
    pub exponent: f64,
    /// Standard error of the slope.
    pub std_error: f64,
    /// Root-mean-square residual of the log–log fit.
    pub residual: f64,
    pub predicted: f64,
    pub n_samples: usize,
    pub n_scales: usize,
}

impl HolderFit {
    /// The fit is at least as regular as `threshold`.
    pub fn at_least(&self, threshold: f64) -> bool {
        self.exponent >= threshold
    }
}

/// Fits the exponent `α` in `ω(δ) ≈ Mδ^α`, where `ω(δ)` is the largest value
/// difference over pairs no farther apart than `δ = L/2^ℓ`.
///
/// Each scale is regressed at the separation of the pair that realises the
/// maximum, so a sampled power law is recovered exactly. Smooth data give a
/// slope near 1; the result is a lower-bound estimate of the regularity.
pub fn holder_fit(samples: &[(f64, f64)], predicted: f64) -> Result<HolderFit, HolderError> {
    if samples.len() < MIN_SAMPLES {
        return Err(HolderError::TooFewSamples(samples.len()));
    }
    if let Some(i) = samples.iter().position(|(p, v)| !(p.is_finite() && v.is_finite())) {
        return Err(HolderError::NonFinite(i));
    }
    let mut pts = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
    if hi == lo {
        return Err(HolderError::Degenerate);
    }
    let span = pts[pts.len() - 1].0 - pts[0].0;
    let max_gap = pts.windows(2).map(|w| w[1].0 - w[0].0).fold(0.0, f64::max);

    let mut logs: Vec<(f64, f64)> = Vec::new();
    let mut delta = 0.5 * span;
    while delta >= max_gap && delta > 0.0 {
        let mut best = (0.0f64, 0.0f64);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let sep = pts[j].0 - pts[i].0;
                if sep > delta {
                    break;
                }
                let diff = (pts[j].1 - pts[i].1).abs();
                if diff > best.0 || (diff == best.0 && sep < best.1) {
                    best = (diff, sep);
                }
            }
        }
        if best.0 > 0.0 && best.1 > 0.0 {
            logs.push((best.1.ln(), best.0.ln()));
        }
        delta *= 0.5;
    }
    if logs.len() < 3 {
        return Err(HolderError::TooFewScales(logs.len()));
    }

    let n = logs.len() as f64;
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / n;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|l| (l.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum();
    let slope = sxy / sxx;
    let sse: f64 = logs.iter().map(|l| (l.1 - my - slope * (l.0 - mx)).powi(2)).sum();
    let std_error = if logs.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(HolderFit {
        exponent: slope,
        std_error,
        residual: (sse / n).sqrt(),
        predicted,
        n_samples: pts.len(),
        n_scales: logs.len(),
    })
}
