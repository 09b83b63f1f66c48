//! A-posteriori checks of the proven bounds on a closed solution. Violations
//! are collected as warnings; nothing here fails.

use serde::Serialize;

use super::HodographSolution;
use crate::boundary::trace::extrema;
use crate::boundary::BoundaryTrace;
use crate::gas::GasParams;
use crate::verify::{holder_fit, HolderFit};

/// Theory exponent of `Ū, V̄, W̄` along `t = 0`.
pub const HODOGRAPH_HOLDER_EXPONENT: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    /// `m̄₀ = min(ā, b̄)` along the wall image.
    pub m_bar_0: f64,
    /// `M̄₀ = max(ā, b̄)` along the wall image.
    pub big_m_bar_0: f64,
    /// `k₀ = (κ+2)/(κ(1−t₀²))`.
    pub k0: f64,
    /// `ε₀ = min(t₀, 1/(4k₀))`.
    pub eps0: f64,
    /// Lower end `m̄₀/2` of the proven interval for `Ū, V̄`.
    pub lower: f64,
    /// Upper end `2e^{k₀}M̄₀`.
    pub upper: f64,
    /// `M̄ = 1 + 2 max |R|, |S|` over `t ≥ ε₀` and the wall image.
    pub big_m_bar: f64,
}

impl BoundConstants {
    pub fn new(m_bar_0: f64, big_m_bar_0: f64, t0: f64, gas: &GasParams) -> Self {
        let k0 = (gas.kappa + 2.0) / (gas.kappa * (1.0 - t0 * t0));
        Self {
            m_bar_0,
            big_m_bar_0,
            k0,
            eps0: t0.min(1.0 / (4.0 * k0)),
            lower: 0.5 * m_bar_0,
            upper: 2.0 * k0.exp() * big_m_bar_0,
            big_m_bar: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutcome {
    pub field: String,
    pub fit: Option<HolderFit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub constants: BoundConstants,
    pub levels: usize,
    pub nodes: usize,
    /// Observed extrema, much tighter than the proven interval.
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub bound_violations: usize,
    pub positivity_violations: usize,
    /// `max |R|, |S|` over `0 < t ≤ ε₀`, to be compared with `M̄`.
    pub max_rs_inner: f64,
    pub rs_violations: usize,
    pub max_w_bar: f64,
    /// `C = 1.5 max |W̄|`.
    pub closure_constant: f64,
    /// `max |Ū − V̄| / (C t)` over the marched nodes; at most 1.
    pub max_closure_ratio: f64,
    pub closure_violations: usize,
    pub coalescence_discrepancy: f64,
    pub coalescence_tolerance: f64,
    pub coalescence_flagged: bool,
    pub closure_defect: f64,
    pub holder: Vec<FitOutcome>,
    pub warnings: Vec<String>,
}

impl DiagnosticsReport {
    pub fn holder_exponent(&self, field: &str) -> Option<f64> {
        self.holder.iter().find(|h| h.field == field).and_then(|h| h.fit.as_ref()).map(|f| f.exponent)
    }
}

fn fit(field: &str, r: &[f64], vals: &[f64]) -> FitOutcome {
    let samples: Vec<(f64, f64)> = r.iter().copied().zip(vals.iter().copied()).collect();
    match holder_fit(&samples, HODOGRAPH_HOLDER_EXPONENT) {
        Ok(f) => FitOutcome { field: field.into(), fit: Some(f), error: None },
        Err(e) => FitOutcome { field: field.into(), fit: None, error: Some(e.to_string()) },
    }
}

/// Bound constants and checks for a closed solution. An unclosed solution
/// yields a report carrying a warning and no sonic-line data.
pub fn diagnostics(sol: &HodographSolution, trace: &BoundaryTrace, gas: &GasParams) -> DiagnosticsReport {
    let mesh = &sol.mesh;
    let mut warnings = Vec::new();

    // wall samples and the characteristic feet together
    let (t_lo, t_hi) = trace.bar_bounds();
    let (f_lo, f_hi) = extrema(mesh.chars.iter().flat_map(|c| [c.foot.a_bar, c.foot.b_bar]));
    let (m_lo, m_hi) = (t_lo.min(f_lo), t_hi.max(f_hi));
    let mut constants = BoundConstants::new(m_lo, m_hi, mesh.geometry.t0, gas);

    let mut u_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut v_range = u_range;
    let (mut bound_violations, mut positivity_violations) = (0, 0);
    for (u_row, v_row) in sol.u_bar.iter().zip(&sol.v_bar) {
        for (&u, &v) in u_row.iter().zip(v_row) {
            u_range = (u_range.0.min(u), u_range.1.max(u));
            v_range = (v_range.0.min(v), v_range.1.max(v));
            for x in [u, v] {
                if !(x > 0.0) {
                    positivity_violations += 1;
                }
                if !(x >= constants.lower && x <= constants.upper) {
                    bound_violations += 1;
                }
            }
        }
    }
    if positivity_violations > 0 {
        warnings.push(format!("{positivity_violations} non-positive values of Ū or V̄"));
    }
    if bound_violations > 0 {
        warnings.push(format!("{bound_violations} values outside [{:.6}, {:.6e}]", constants.lower, constants.upper));
    }

    let mut outer = 0.0f64;
    let mut inner = 0.0f64;
    for (k, (r_row, s_row)) in sol.r_diag.iter().zip(&sol.s_diag).enumerate() {
        let t = mesh.levels[k];
        for (p, (&r, &s)) in r_row.iter().zip(s_row).enumerate() {
            let m = r.abs().max(s.abs());
            // wall nodes belong to the boundary maximum whatever their t
            if t >= constants.eps0 || p == 0 {
                outer = outer.max(m);
            } else {
                inner = inner.max(m);
            }
        }
    }
    constants.big_m_bar = 1.0 + 2.0 * outer;
    let mut rs_violations = 0;
    for (k, (r_row, s_row)) in sol.r_diag.iter().zip(&sol.s_diag).enumerate() {
        if mesh.levels[k] < constants.eps0 {
            rs_violations += r_row.iter().chain(s_row).skip(1).filter(|x| x.abs() >= constants.big_m_bar).count();
        }
    }
    if rs_violations > 0 {
        warnings.push(format!("{rs_violations} values of |R| or |S| reach M̄ = {:.6}", constants.big_m_bar));
    }

    let max_w_bar = sol.w_bar.iter().flatten().fold(0.0f64, |m, w| m.max(w.abs()));
    let closure_constant = 1.5 * max_w_bar;
    let mut max_closure_ratio = 0.0f64;
    let mut closure_violations = 0;
    for k in 0..=mesh.last_marched().min(sol.u_bar.len().saturating_sub(1)) {
        let t = mesh.levels[k];
        for (u, v) in sol.u_bar[k].iter().zip(&sol.v_bar[k]) {
            let ratio = (u - v).abs() / (closure_constant * t);
            max_closure_ratio = max_closure_ratio.max(ratio);
            if ratio > 1.0 {
                closure_violations += 1;
            }
        }
    }
    if closure_violations > 0 {
        warnings.push(format!("{closure_violations} nodes with |Ū − V̄| > C t"));
    }

    let (mut disc, mut tol, mut flagged, mut defect) = (f64::NAN, f64::NAN, false, f64::NAN);
    let mut holder = Vec::new();
    match &sol.sonic {
        Some(line) => {
            disc = line.max_discrepancy;
            tol = line.coalescence_tolerance;
            flagged = line.coalescence_flagged;
            defect = line.closure_defect;
            if flagged {
                warnings.push(format!("sonic-line coalescence |Ū − V̄| = {disc:.3e} exceeds {tol:.3e}"));
            }
            holder.push(fit("u_bar", &line.r, &line.u_extrap));
            holder.push(fit("v_bar", &line.r, &line.v_extrap));
            holder.push(fit("w_bar", &line.r, &line.w_bar));
            for h in &holder {
                if let Some(e) = &h.error {
                    warnings.push(format!("Hölder fit of {}: {e}", h.field));
                }
            }
        }
        None => warnings.push("solution not closed on t = 0".into()),
    }
    DiagnosticsReport {
        constants,
        levels: mesh.levels.len(),
        nodes: mesh.node_count(),
        u_range,
        v_range,
        bound_violations,
        positivity_violations,
        max_rs_inner: inner,
        rs_violations,
        max_w_bar,
        closure_constant,
        max_closure_ratio,
        closure_violations,
        coalescence_discrepancy: disc,
        coalescence_tolerance: tol,
        coalescence_flagged: flagged,
        closure_defect: defect,
        holder,
        warnings,
    }
}
