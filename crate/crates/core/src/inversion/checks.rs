//! Invariant checks on the reconstructed patch. Failures are collected, never
//! raised; the caller decides whether they are fatal.

use serde::Serialize;

use super::{varpi_gradient_norm_sq, PatchCurves, PhysicalPatch};
use crate::boundary::{BoundaryTrace, RegionGeometry};
use crate::gas::GasParams;
use crate::hodograph::FitOutcome;
use crate::verify::holder_fit;

/// Theory exponent of the gradient fields in the physical plane.
pub const PHYSICAL_HOLDER_EXPONENT: f64 = 1.0 / 6.0;

/// Fraction of `t₀` above which nodes count as strictly supersonic for the
/// convergence measures.
pub const SUPERSONIC_FLOOR_FRACTION: f64 = 0.25;

/// Wall reproduction tolerance.
const PE_TOL: f64 = 1e-12;
/// Relative tolerance of algebraic identities.
const IDENTITY_TOL: f64 = 1e-12;
/// Relative tolerance of the evaluated inner product against its closed form.
const INNER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionChecks {
    pub min_jacobian: f64,
    pub jacobian_violations: usize,
    /// Mesh triangles whose physical orientation disagrees with the
    /// hodograph one (discrete fold-over).
    pub fold_violations: usize,
    /// Crossings between non-adjacent edges of the loop `PE`, `ED`, `DP`.
    pub boundary_crossings: usize,
    /// Levels along which `x` is not monotone. Informational only: the sonic
    /// curve may turn back in `x` without any fold.
    pub x_nonmonotone_levels: usize,
    /// Largest value of `(θ_x, θ_y)·(ϖ_y, −ϖ_x)`; must be negative.
    pub max_inner_product: f64,
    pub inner_violations: usize,
    pub inner_closed_form_defect: f64,
    pub pd_theta_violations: usize,
    pub de_theta_violations: usize,
    pub max_pd_varpi_defect: f64,
    pub interior_varpi_violations: usize,
    /// Largest `|sin(angle)|` between a `DE` secant and the direction `θ − ω`
    /// at its midpoint in `t²`. Dominated by the segment at `D`, where the
    /// curvature of `DE` grows like `1/t`.
    pub de_slope_defect: f64,
    /// The same over segments with `t ≥ SUPERSONIC_FLOOR_FRACTION · t₀`.
    pub de_slope_defect_supersonic: f64,
    /// `max |y − φ(x)| + |θ − θ̂(x)| + |ϖ − ϖ̂(x)|` on the wall nodes.
    pub pe_error: f64,
    pub varpi_identity_defect: f64,
    pub min_varpi_gradient_sq: f64,
    pub max_varpi_gradient_sq: f64,
    /// Gradient fields along `PD` against arc length.
    pub holder_pd: Vec<FitOutcome>,
    pub failures: Vec<String>,
}

impl InversionChecks {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn min_pd_exponent(&self) -> Option<f64> {
        self.holder_pd.iter().filter_map(|h| h.fit.as_ref().map(|f| f.exponent)).reduce(f64::min)
    }
}

pub fn check_patch(patch: &PhysicalPatch, curves: &PatchCurves, trace: &BoundaryTrace, geometry: &RegionGeometry, gas: &GasParams) -> InversionChecks {
    let mut failures = Vec::new();

    let (mut min_jacobian, mut jacobian_violations) = (f64::INFINITY, 0);
    let (mut max_inner, mut inner_violations, mut inner_defect) = (f64::NEG_INFINITY, 0, 0.0f64);
    let (mut id_defect, mut g_min, mut g_max) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut interior_varpi_violations = 0;
    for n in patch.iter() {
        let g = n.grad;
        let norm = g.varpi_norm_sq();
        let closed = varpi_gradient_norm_sq(n.t, n.u_bar, n.v_bar, n.w_bar, gas);
        id_defect = id_defect.max((norm - closed).abs() / closed.abs().max(f64::MIN_POSITIVE));
        g_min = g_min.min(norm);
        g_max = g_max.max(norm);
        if n.t > 0.0 {
            min_jacobian = min_jacobian.min(n.jacobian);
            if !(n.jacobian > 0.0) {
                jacobian_violations += 1;
            }
            if !(n.varpi < 1.0) {
                interior_varpi_violations += 1;
            }
        }
        let inner = g.theta_x * g.varpi_y - g.theta_y * g.varpi_x;
        let expect = -4.0 * (1.0 - n.t * n.t).sqrt() * (gas.kappa + 1.0 - n.t * n.t) / (n.u_bar * n.v_bar);
        max_inner = max_inner.max(inner);
        inner_defect = inner_defect.max((inner - expect).abs() / expect.abs());
        if !(inner < 0.0) {
            inner_violations += 1;
        }
    }
    if jacobian_violations > 0 {
        failures.push(format!("jacobian sign: {jacobian_violations} nodes with j ≤ 0 (min {min_jacobian:.3e})"));
    }
    if inner_violations > 0 {
        failures.push(format!("level-curve monotonicity: {inner_violations} nodes with non-negative inner product"));
    }
    if inner_defect > INNER_TOL {
        failures.push(format!("inner product deviates from its closed form by {inner_defect:.3e}"));
    }
    if id_defect > IDENTITY_TOL {
        failures.push(format!("gradient identity defect {id_defect:.3e}"));
    }
    if interior_varpi_violations > 0 {
        failures.push(format!("{interior_varpi_violations} interior nodes with ϖ ≥ 1"));
    }

    let fold_violations = count_folds(patch);
    if fold_violations > 0 {
        failures.push(format!("fold-over: {fold_violations} mesh triangles change orientation"));
    }
    let boundary_crossings = count_loop_crossings(curves);
    if boundary_crossings > 0 {
        failures.push(format!("boundary loop PE-ED-DP self-intersects {boundary_crossings} times"));
    }
    let x_nonmonotone_levels = patch
        .nodes
        .iter()
        .filter(|row| {
            let up = row.windows(2).all(|w| w[1].x > w[0].x);
            let down = row.windows(2).all(|w| w[1].x < w[0].x);
            !(up || down)
        })
        .count();

    let decreasing = |pts: &[super::CurvePoint]| pts.windows(2).filter(|w| !(w[1].theta < w[0].theta)).count();
    let pd_theta_violations = decreasing(&curves.pd);
    let de_theta_violations = decreasing(&curves.de);
    if pd_theta_violations + de_theta_violations > 0 {
        failures.push(format!("θ monotonicity: {pd_theta_violations} on PD, {de_theta_violations} on DE"));
    }
    let max_pd_varpi_defect = curves.pd.iter().map(|p| (p.varpi - 1.0).abs()).fold(0.0, f64::max);
    if max_pd_varpi_defect != 0.0 {
        failures.push(format!("ϖ ≠ 1 on PD by {max_pd_varpi_defect:.3e}"));
    }

    let t_floor = SUPERSONIC_FLOOR_FRACTION * geometry.t0;
    let (mut de_slope_defect, mut de_slope_defect_supersonic) = (0.0f64, 0.0f64);
    for w in curves.de.windows(2) {
        let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
        let len = dx.hypot(dy);
        // the curve is smooth in t² (the integrands carry a factor t), so the
        // secant is compared with the direction at the midpoint in t²
        let t_m = (0.5 * (w[0].t * w[0].t + w[1].t * w[1].t)).sqrt();
        let r_m = geometry.r_check(t_m, gas).unwrap_or(f64::NAN);
        let beta = patch.theta_hat_1 - r_m - t_m.acos();
        let defect = (beta.sin() * dx - beta.cos() * dy).abs() / len;
        let defect = if defect.is_nan() { f64::INFINITY } else { defect };
        de_slope_defect = de_slope_defect.max(defect);
        if w[0].t >= t_floor {
            de_slope_defect_supersonic = de_slope_defect_supersonic.max(defect);
        }
    }

    let spec = trace.spec();
    let mut pe_error = 0.0f64;
    for p in &curves.pe {
        let theta_hat = spec.wall.dphi(p.x).atan();
        let e = (p.y - spec.wall.phi(p.x)).abs() + (p.theta - theta_hat).abs() + (p.varpi - spec.varpi.varpi(p.x)).abs();
        pe_error = pe_error.max(e);
    }
    if !(pe_error <= PE_TOL) {
        failures.push(format!("wall reproduction error {pe_error:.3e}"));
    }

    let pd_fit = |field: &str, f: &dyn Fn(&super::PatchNode) -> f64| {
        let samples: Vec<(f64, f64)> = curves.pd.iter().zip(patch.sonic_row()).map(|(c, n)| (c.arclength, f(n))).collect();
        match holder_fit(&samples, PHYSICAL_HOLDER_EXPONENT) {
            Ok(fit) => FitOutcome { field: field.into(), fit: Some(fit), error: None },
            Err(e) => FitOutcome { field: field.into(), fit: None, error: Some(e.to_string()) },
        }
    };
    let holder_pd = vec![
        pd_fit("theta_x", &|n| n.grad.theta_x),
        pd_fit("theta_y", &|n| n.grad.theta_y),
        pd_fit("varpi_x", &|n| n.grad.varpi_x),
        pd_fit("varpi_y", &|n| n.grad.varpi_y),
    ];

    InversionChecks {
        min_jacobian,
        jacobian_violations,
        fold_violations,
        boundary_crossings,
        x_nonmonotone_levels,
        max_inner_product: max_inner,
        inner_violations,
        inner_closed_form_defect: inner_defect,
        pd_theta_violations,
        de_theta_violations,
        max_pd_varpi_defect,
        interior_varpi_violations,
        de_slope_defect,
        de_slope_defect_supersonic,
        pe_error,
        varpi_identity_defect: id_defect,
        min_varpi_gradient_sq: g_min,
        max_varpi_gradient_sq: g_max,
        holder_pd,
        failures,
    }
}

fn signed_area(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    0.5 * ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1))
}

/// Triangulates each strip between consecutive levels and compares the
/// orientation in `(x, y)` with the one in `(t, r)`; a positive Jacobian
/// preserves it.
fn count_folds(patch: &PhysicalPatch) -> usize {
    let mut folds = 0;
    for k in 0..patch.nodes.len() - 1 {
        let (lo, hi) = (&patch.nodes[k], &patch.nodes[k + 1]);
        let tri = |n: [&super::PatchNode; 3]| {
            let hodo = signed_area((n[0].t, n[0].r), (n[1].t, n[1].r), (n[2].t, n[2].r));
            let phys = signed_area((n[0].x, n[0].y), (n[1].x, n[1].y), (n[2].x, n[2].y));
            !(hodo * phys > 0.0)
        };
        for p in 0..lo.len() {
            folds += usize::from(tri([&lo[p], &hi[p], &hi[p + 1]]));
            if p + 1 < lo.len() {
                folds += usize::from(tri([&lo[p], &hi[p + 1], &lo[p + 1]]));
            }
        }
    }
    folds
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let o1 = signed_area(a, b, c);
    let o2 = signed_area(a, b, d);
    let o3 = signed_area(c, d, a);
    let o4 = signed_area(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

fn count_loop_crossings(curves: &PatchCurves) -> usize {
    let mut pts: Vec<(f64, f64)> = curves.pe.iter().map(|p| (p.x, p.y)).collect();
    pts.extend(curves.de.iter().rev().skip(1).map(|p| (p.x, p.y)));
    pts.extend(curves.pd.iter().rev().skip(1).map(|p| (p.x, p.y)));
    let n = pts.len() - 1;
    let mut crossings = 0;
    for i in 0..n {
        for j in i + 2..n {
            // the first and last edges share the closing vertex P
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                crossings += 1;
            }
        }
    }
    crossings
}
