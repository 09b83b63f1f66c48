//! Hypotheses on the wall data, evaluated sample by sample.

use std::fmt;

use serde::Serialize;

use super::BoundarySpec;
use crate::gas::GasParams;

/// Tolerance for the sonic value `ϖ̂(x₁) = 1`.
const SONIC_START_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `ϖ̂(x₁) = 1`.
    SonicStart,
    /// `ϖ̂ ∈ (0, 1)` for `x > x₁`.
    SupersonicInterior,
    /// `φ′ ≥ φ₀ > 0`.
    PositiveSlope,
    /// `φ″ < 0`.
    Concavity,
    /// `ϖ̂′ < 0`.
    DecreasingVarpi,
    /// `φ″/(1+φ′²) − √(1−ϖ̂²)ϖ̂′/(κ+ϖ̂²) < 0`.
    SignCondition,
    /// `dr̃/dt − λ(t) > 0` away from the sonic point.
    SpaceLike,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::SonicStart => "sonic start",
            Check::SupersonicInterior => "supersonic interior",
            Check::PositiveSlope => "positive slope",
            Check::Concavity => "concavity",
            Check::DecreasingVarpi => "decreasing varpi",
            Check::SignCondition => "sign condition",
            Check::SpaceLike => "space-like",
        })
    }
}

/// Worst sample of a violated check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityFailure {
    pub check: Check,
    pub name: String,
    pub x: f64,
    pub value: f64,
    pub violations: usize,
}

/// Extreme margins over all samples; each check demands the stated sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    pub sonic_start_defect: f64,
    pub min_varpi_interior: f64,
    pub max_varpi_interior: f64,
    pub min_slope: f64,
    pub max_slope: f64,
    pub max_curvature: f64,
    pub max_dvarpi: f64,
    pub max_sign_condition: f64,
    pub min_space_like: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub passed: bool,
    pub n_samples: usize,
    pub margins: Margins,
    pub failures: Vec<AdmissibilityFailure>,
}

impl AdmissibilityReport {
    pub fn failed(&self, check: Check) -> bool {
        self.failures.iter().any(|f| f.check == check)
    }
}

struct Tally {
    check: Check,
    worst: Option<(f64, f64)>,
    count: usize,
}

impl Tally {
    fn new(check: Check) -> Self {
        Self { check, worst: None, count: 0 }
    }

    /// Records a sample; `bad` is how far the value sits on the wrong side.
    fn record(&mut self, x: f64, value: f64, bad: f64) {
        if bad >= 0.0 || bad.is_nan() {
            self.count += 1;
            let worse = match self.worst {
                None => true,
                Some((_, v)) => bad > v || bad.is_nan(),
            };
            if worse {
                self.worst = Some((x, value));
            }
        }
    }

    fn into_failure(self) -> Option<AdmissibilityFailure> {
        self.worst.map(|(x, value)| AdmissibilityFailure {
            check: self.check,
            name: self.check.to_string(),
            x,
            value,
            violations: self.count,
        })
    }
}

/// Evaluates every hypothesis at every sample. Never errors: violations are
/// entries of the report.
pub fn check_admissibility(spec: &BoundarySpec, gas: &GasParams) -> AdmissibilityReport {
    let xs = spec.sample_xs();
    let mut tallies: Vec<Tally> = [
        Check::SonicStart,
        Check::SupersonicInterior,
        Check::PositiveSlope,
        Check::Concavity,
        Check::DecreasingVarpi,
        Check::SignCondition,
        Check::SpaceLike,
    ]
    .into_iter()
    .map(Tally::new)
    .collect();
    let mut m = Margins {
        sonic_start_defect: 0.0,
        min_varpi_interior: f64::INFINITY,
        max_varpi_interior: f64::NEG_INFINITY,
        min_slope: f64::INFINITY,
        max_slope: f64::NEG_INFINITY,
        max_curvature: f64::NEG_INFINITY,
        max_dvarpi: f64::NEG_INFINITY,
        max_sign_condition: f64::NEG_INFINITY,
        min_space_like: f64::INFINITY,
    };

    let start = spec.varpi.varpi(spec.x1);
    m.sonic_start_defect = (start - 1.0).abs();
    tallies[0].record(spec.x1, start, m.sonic_start_defect - SONIC_START_TOL);

    for (i, &x) in xs.iter().enumerate() {
        let dphi = spec.wall.dphi(x);
        let d2phi = spec.wall.d2phi(x);
        let varpi = spec.varpi.varpi(x);
        let dvarpi = spec.varpi.dvarpi(x);
        let t = (1.0 - varpi * varpi).max(0.0).sqrt();

        if i > 0 {
            m.min_varpi_interior = m.min_varpi_interior.min(varpi);
            m.max_varpi_interior = m.max_varpi_interior.max(varpi);
            tallies[1].record(x, varpi, (varpi - 1.0).max(-varpi));
        }
        m.min_slope = m.min_slope.min(dphi);
        m.max_slope = m.max_slope.max(dphi);
        tallies[2].record(x, dphi, -dphi);
        m.max_curvature = m.max_curvature.max(d2phi);
        tallies[3].record(x, d2phi, d2phi);
        m.max_dvarpi = m.max_dvarpi.max(dvarpi);
        tallies[4].record(x, dvarpi, dvarpi);

        let sign = d2phi / (1.0 + dphi * dphi) - t / (gas.kappa + varpi * varpi) * dvarpi;
        m.max_sign_condition = m.max_sign_condition.max(sign);
        tallies[5].record(x, sign, sign);

        // the sonic point itself is exempt: both slopes vanish there
        if i > 0 && t > 0.0 {
            let dr_dx = -d2phi / (1.0 + dphi * dphi);
            let dt_dx = -varpi * dvarpi / t;
            let margin = dr_dx / dt_dx - gas.lambda(t);
            m.min_space_like = m.min_space_like.min(margin);
            tallies[6].record(x, margin, -margin);
        }
    }

    let failures: Vec<AdmissibilityFailure> = tallies.into_iter().filter_map(Tally::into_failure).collect();
    AdmissibilityReport { passed: failures.is_empty(), n_samples: xs.len(), margins: m, failures }
}
