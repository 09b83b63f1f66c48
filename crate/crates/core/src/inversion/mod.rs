//! Inversion to the physical plane: `x(t, r)`, `y(t, r)` by integration along
//! the positive characteristics, the Jacobian, the fields `θ`, `ϖ` with their
//! gradients, and the bounding curves `PD` and `DE`.

mod checks;
mod curves;
mod residual;

use serde::Serialize;
use thiserror::Error;

use crate::gas::{GasError, GasParams};
use crate::hodograph::HodographSolution;

pub use checks::{check_patch, InversionChecks, PHYSICAL_HOLDER_EXPONENT, SUPERSONIC_FLOOR_FRACTION};
pub use curves::{extract_curves, CurvePoint, PatchCurves};
pub use residual::{residual_euler, ResidualReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("hodograph solution has not been closed on t = 0")]
    NotClosed,
    #[error("non-finite integrand on characteristic {char_id} at t = {t}")]
    NonFinite { char_id: usize, t: f64 },
    #[error(transparent)]
    Gas(#[from] GasError),
}

/// The trigonometric combinations `(F₁, F₂, F₃, F₄)` of `t = cos ω` and
/// `θ = θ̂₁ − r`. With `β = θ − ω`: `F₁ = sin β`, `F₃ = cos β`.
pub fn f_coefficients(t: f64, r: f64, theta_hat_1: f64) -> (f64, f64, f64, f64) {
    let (s, c) = (theta_hat_1 - r).sin_cos();
    let sq = (1.0 - t * t).max(0.0).sqrt();
    (t * s - sq * c, t * s + sq * c, t * c + sq * s, t * c - sq * s)
}

/// Physical-plane gradients of `θ` and `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gradients {
    pub theta_x: f64,
    pub theta_y: f64,
    pub varpi_x: f64,
    pub varpi_y: f64,
}

impl Gradients {
    pub fn varpi_norm_sq(&self) -> f64 {
        self.varpi_x * self.varpi_x + self.varpi_y * self.varpi_y
    }
}

/// Closed-form gradients in terms of `Ū, V̄` and the regular combination
/// `W̄`, valid up to and including `t = 0`.
pub fn physical_gradients(t: f64, r: f64, u: f64, v: f64, w: f64, theta_hat_1: f64, gas: &GasParams) -> Gradients {
    let (f1, f2, f3, f4) = f_coefficients(t, r, theta_hat_1);
    let (s, c) = (theta_hat_1 - r).sin_cos();
    let sq = (1.0 - t * t).max(0.0).sqrt();
    let uv = u * v;
    let k = (gas.kappa + 1.0 - t * t) / uv;
    Gradients {
        theta_x: (f1 * v - f2 * u) / uv,
        theta_y: (f4 * u - f3 * v) / uv,
        varpi_x: -k * (s * (u + v) + sq * c * w),
        varpi_y: k * (c * (u + v) - sq * s * w),
    }
}

/// Closed form of `|∇ϖ|²`.
pub fn varpi_gradient_norm_sq(t: f64, u: f64, v: f64, w: f64, gas: &GasParams) -> f64 {
    let k = (gas.kappa + 1.0 - t * t) / (u * v);
    k * k * ((u + v).powi(2) + (1.0 - t * t) * w * w)
}

/// Jacobian `∂(x, y)/∂(t, r) = tŪV̄/(4F)`.
pub fn jacobian(t: f64, u: f64, v: f64, gas: &GasParams) -> f64 {
    t * u * v / (4.0 * gas.f(t))
}

/// `(dx/dt, dy/dt)` along a positive characteristic: `(cos β, sin β)·V̄t/(2F)`.
pub fn characteristic_velocity(t: f64, r: f64, v: f64, theta_hat_1: f64, gas: &GasParams) -> (f64, f64) {
    if t == 0.0 {
        return (0.0, 0.0);
    }
    let (f1, _, f3, _) = f_coefficients(t, r, theta_hat_1);
    let g = v * t / (2.0 * gas.f(t));
    (f3 * g, f1 * g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatchNode {
    pub char_id: usize,
    pub t: f64,
    pub r: f64,
    pub u_bar: f64,
    pub v_bar: f64,
    pub w_bar: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub varpi: f64,
    pub grad: Gradients,
    pub jacobian: f64,
}

/// Push-forward of the hodograph mesh; `nodes[k][p]` matches the mesh layout.
#[derive(Debug, Clone)]
pub struct PhysicalPatch {
    pub theta_hat_1: f64,
    pub gas: GasParams,
    pub levels: Vec<f64>,
    pub nodes: Vec<Vec<PatchNode>>,
}

impl PhysicalPatch {
    pub fn sonic_row(&self) -> &[PatchNode] {
        &self.nodes[self.nodes.len() - 1]
    }

    /// Corner `D = (x(0, r*), y(0, r*))`.
    pub fn corner_d(&self) -> (f64, f64) {
        let d = self.sonic_row().last().expect("non-empty sonic row");
        (d.x, d.y)
    }

    /// Sonic wall point `P`.
    pub fn corner_p(&self) -> (f64, f64) {
        let p = &self.sonic_row()[0];
        (p.x, p.y)
    }

    /// Nodes of characteristic `j`, from its wall foot down to `t = 0`.
    pub fn characteristic(&self, j: usize) -> impl Iterator<Item = &PatchNode> {
        self.nodes[j..].iter().enumerate().map(move |(i, row)| &row[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &PatchNode> {
        self.nodes.iter().flatten()
    }
}

/// Integrates `x`, `y` down every positive characteristic from its wall foot
/// with the trapezoid rule and attaches `θ`, `ϖ`, gradients and Jacobian.
pub fn reconstruct(sol: &HodographSolution, gas: &GasParams) -> Result<PhysicalPatch, InversionError> {
    let line = sol.sonic.as_ref().ok_or(InversionError::NotClosed)?;
    let mesh = &sol.mesh;
    let th1 = mesh.chars[0].foot.theta_hat + mesh.chars[0].foot.r;
    let sonic = mesh.sonic_level();
    debug_assert_eq!(line.r.len(), sonic + 1);

    let mut nodes: Vec<Vec<PatchNode>> = Vec::with_capacity(sonic + 1);
    for k in 0..=sonic {
        let t = mesh.levels[k];
        let row = (0..=k)
            .map(|p| {
                let r = mesh.nodes_r[k][p];
                let (u, v, w) = (sol.u_bar[k][p], sol.v_bar[k][p], sol.w_bar[k][p]);
                PatchNode {
                    char_id: k - p,
                    t,
                    r,
                    u_bar: u,
                    v_bar: v,
                    w_bar: w,
                    x: f64::NAN,
                    y: f64::NAN,
                    theta: th1 - r,
                    varpi: (1.0 - t * t).sqrt(),
                    grad: physical_gradients(t, r, u, v, w, th1, gas),
                    jacobian: jacobian(t, u, v, gas),
                }
            })
            .collect();
        nodes.push(row);
    }

    for j in 0..=sonic {
        let foot = &mesh.chars[j].foot;
        let (mut x, mut y) = (foot.x, foot.y);
        nodes[j][0].x = x;
        nodes[j][0].y = y;
        // exact sonic values on the sonic wall point
        nodes[j][0].varpi = foot.varpi_hat;
        nodes[j][0].theta = foot.theta_hat;
        let mut prev = characteristic_velocity(nodes[j][0].t, nodes[j][0].r, nodes[j][0].v_bar, th1, gas);
        for k in j + 1..=sonic {
            let p = k - j;
            let n = &nodes[k][p];
            let cur = characteristic_velocity(n.t, n.r, n.v_bar, th1, gas);
            let h = mesh.levels[k - 1] - mesh.levels[k];
            x -= 0.5 * h * (prev.0 + cur.0);
            y -= 0.5 * h * (prev.1 + cur.1);
            if !(x.is_finite() && y.is_finite()) {
                return Err(InversionError::NonFinite { char_id: j, t: n.t });
            }
            nodes[k][p].x = x;
            nodes[k][p].y = y;
            prev = cur;
        }
    }

    Ok(PhysicalPatch { theta_hat_1: th1, gas: *gas, levels: mesh.levels.clone(), nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sonic_coefficients() {
        let th1 = 0.7;
        let r = 0.2;
        let (f1, f2, f3, f4) = f_coefficients(0.0, r, th1);
        let (s, c) = (th1 - r).sin_cos();
        assert_relative_eq!(f1, -c);
        assert_relative_eq!(f2, c);
        assert_relative_eq!(f3, s);
        assert_relative_eq!(f4, -s);
    }

    #[test]
    fn coefficient_identities() {
        for &(t, r) in &[(0.1, 0.0), (0.4, 0.3), (0.9, -0.2), (0.527, 0.17)] {
            let (f1, f2, f3, f4) = f_coefficients(t, r, 0.66);
            assert!((f1 * f1 + f3 * f3 - 1.0).abs() < 1e-14);
            assert!((f2 * f2 + f4 * f4 - 1.0).abs() < 1e-14);
            assert!((f2 * f3 - f1 * f4 - 2.0 * t * (1.0 - t * t).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn one_segment_trapezoid_hand_check() {
        // constant V̄ = 1 and θ̂₁ − r = π/4 between t = 0.5 and 0.4
        let g = GasParams::air();
        let th = std::f64::consts::FRAC_PI_4;
        let (a, b) = (0.5, 0.4);
        let dx = |t: f64| characteristic_velocity(t, 0.0, 1.0, th, &g).0;
        let trap = 0.5 * (a - b) * (dx(a) + dx(b));
        let exact = crate::numerics::adaptive_simpson(dx, b, a, 1e-13).unwrap();
        // the truncation term −h³ f″/12 at the midpoint
        let h: f64 = a - b;
        let m = 0.5 * (a + b);
        let e = 1e-4;
        let f2 = (dx(m + e) - 2.0 * dx(m) + dx(m - e)) / (e * e);
        assert_relative_eq!(trap - exact, h.powi(3) * f2 / 12.0, max_relative = 0.05);
        // hand value of the integrand at t = 0.5: cos(π/4 − π/3)·0.5/(2F(0.5)), F(0.5) = 0.75·0.95
        let hand = (th - (0.5f64).acos()).cos() * 0.5 / (2.0 * 0.75 * 0.95);
        assert_relative_eq!(dx(0.5), hand, max_relative = 1e-14);
    }

    #[test]
    fn gradient_norm_identity_and_sonic_limit() {
        let g = GasParams::air();
        for &(t, u, v) in &[(0.3, 2.0, 1.5), (0.05, 4.0, 3.9), (0.0, 3.0, 3.0)] {
            let w = if t > 0.0 { (u - v) / t } else { 12.0 };
            let gr = physical_gradients(t, 0.1, u, v, w, 0.6, &g);
            let n = varpi_gradient_norm_sq(t, u, v, w, &g);
            assert!((gr.varpi_norm_sq() - n).abs() < 1e-12 * n);
        }
        assert_eq!(characteristic_velocity(0.0, 0.1, 3.0, 0.6, &g), (0.0, 0.0));
        assert_eq!(jacobian(0.0, 3.0, 3.0, &g), 0.0);
    }

    fn reference_patch(dt: f64) -> (PhysicalPatch, crate::boundary::BoundaryTrace, crate::boundary::RegionGeometry) {
        use crate::boundary::{compute_trace, region_corners, BoundarySpec};
        use crate::hodograph::{build_mesh, close_sonic_line, march, SolverParams};
        let gas = GasParams::air();
        let trace = compute_trace(&BoundarySpec::reference(), &gas).unwrap();
        let geom = region_corners(&trace, &gas).unwrap();
        let params = SolverParams::new(dt);
        let mesh = build_mesh(&trace, &geom, &params).unwrap();
        let sol = close_sonic_line(march(&mesh, &trace, &gas, &params).unwrap(), &trace, &gas).unwrap();
        (reconstruct(&sol, &gas).unwrap(), trace, geom)
    }

    #[test]
    fn reference_patch_passes_every_check() {
        let gas = GasParams::air();
        let (patch, trace, geom) = reference_patch(4e-3);
        let curves = extract_curves(&patch);
        let checks = check_patch(&patch, &curves, &trace, &geom, &gas);
        assert!(checks.passed(), "{:?}", checks.failures);
        assert_eq!(patch.corner_p(), (trace.start().x, trace.start().y));
        let (xd, _) = patch.corner_d();
        assert!(xd > trace.start().x && xd < trace.end().x);
        assert!(checks.min_varpi_gradient_sq > 0.0);
        let res = residual_euler(&patch, &gas, geom.t0 / 4.0);
        assert!(res.closed_form_max < 1e-10);
    }

    #[test]
    fn discrete_residual_converges() {
        let gas = GasParams::air();
        let (coarse, _, geom) = reference_patch(4e-3);
        let (fine, _, _) = reference_patch(2e-3);
        let a = residual_euler(&coarse, &gas, geom.t0 / 4.0);
        let b = residual_euler(&fine, &gas, geom.t0 / 4.0);
        assert!(b.discrete_max_floor < 0.5 * a.discrete_max_floor, "{a:?} {b:?}");
        assert!(b.discrete_max < 0.6 * a.discrete_max);
    }

    #[test]
    fn flipped_sign_breaks_the_jacobian() {
        let gas = GasParams::air();
        let (mut patch, trace, geom) = reference_patch(8e-3);
        for n in patch.nodes.iter_mut().flatten() {
            n.v_bar = -n.v_bar;
            n.jacobian = jacobian(n.t, n.u_bar, n.v_bar, &gas);
            n.grad = physical_gradients(n.t, n.r, n.u_bar, n.v_bar, n.w_bar, patch.theta_hat_1, &gas);
        }
        let checks = check_patch(&patch, &extract_curves(&patch), &trace, &geom, &gas);
        assert!(checks.jacobian_violations > 0 && checks.inner_violations > 0);
        assert!(!checks.passed());
    }
}
