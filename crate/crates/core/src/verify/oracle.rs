//! Exact transonic flow (the Ringleb family) as an analytic oracle.
//!
//! In the hodograph variables `(q, θ)` the stream function is `ψ = sin θ / q`
//! and the potential `φ = cos θ / (ρq)`; the physical derivatives follow from
//! `dx = cos θ/q dφ − sin θ/(ρq) dψ`, `dy = sin θ/q dφ + cos θ/(ρq) dψ` and a
//! pointwise 2×2 inversion, all in closed form.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gas::{dxi_dvarpi, eigenvalues_from_velocity, GasParams, Slope};

/// Samples closer than this to the limit line `M cos θ = 1` are rejected.
const LIMIT_LINE_MARGIN: f64 = 0.05;

/// Velocity, sound speed and their first derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSample {
    pub q: f64,
    pub theta: f64,
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub u_x: f64,
    pub u_y: f64,
    pub v_x: f64,
    pub v_y: f64,
    pub c_x: f64,
    pub c_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleField {
    /// Exact family and parameters the samples come from.
    pub family: String,
    pub samples: Vec<OracleSample>,
    /// Requested points that were sonic, subsonic or too close to the limit
    /// line.
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub skipped: usize,
    /// `max` relative residual of the potential-flow equation and of
    /// irrotationality.
    pub euler_residual: f64,
    pub irrotational_residual: f64,
    pub bernoulli_residual: f64,
    /// Characteristic form in velocity variables.
    pub characteristic_residual: f64,
    /// Angle-variable form.
    pub angle_residual: f64,
}

impl OracleReport {
    pub fn self_test_passed(&self, tol: f64) -> bool {
        self.euler_residual < tol && self.irrotational_residual < tol && self.bernoulli_residual < tol
    }
}

fn sound_speed(q: f64, gas: &GasParams) -> f64 {
    (gas.kappa * (gas.bernoulli - q * q)).sqrt()
}

/// Speed at which the family is sonic.
pub fn sonic_speed(gas: &GasParams) -> f64 {
    (gas.kappa * gas.bernoulli / (1.0 + gas.kappa)).sqrt()
}

/// Evaluates the exact field at `(q, θ)`; `None` when not strictly
/// supersonic or too close to the limit line.
pub fn ringleb_sample(q: f64, theta: f64, gas: &GasParams) -> Option<OracleSample> {
    if !(q * q < gas.bernoulli) {
        return None;
    }
    let c = sound_speed(q, gas);
    let m2 = q * q / (c * c);
    if !(m2 > 1.0) {
        return None;
    }
    let (s, co) = theta.sin_cos();
    if (m2 * co * co - 1.0).abs() < LIMIT_LINE_MARGIN {
        return None;
    }
    let rho = gas.density(c);
    let q2 = q * q;
    let x_q = (co * co * (m2 - 1.0) + s * s) / (rho * q2 * q);
    let x_t = -2.0 * s * co / (rho * q2);
    let y_q = s * co * (m2 - 2.0) / (rho * q2 * q);
    let y_t = (co * co - s * s) / (rho * q2);
    let det = x_q * y_t - x_t * y_q;
    let (q_x, q_y) = (y_t / det, -x_t / det);
    let (th_x, th_y) = (-y_q / det, x_q / det);

    let (u, v) = (q * co, q * s);
    let dc_dq = -gas.kappa * q / c;
    Some(OracleSample {
        q,
        theta,
        u,
        v,
        c,
        u_x: co * q_x - v * th_x,
        u_y: co * q_y - v * th_y,
        v_x: s * q_x + u * th_x,
        v_y: s * q_y + u * th_y,
        c_x: dc_dq * q_x,
        c_y: dc_dq * q_y,
    })
}

impl OracleField {
    /// Field at the given `(q, θ)` points; unusable points are counted.
    pub fn at_points(points: &[(f64, f64)], gas: &GasParams) -> Self {
        let samples: Vec<OracleSample> = points.iter().filter_map(|&(q, th)| ringleb_sample(q, th, gas)).collect();
        Self { family: family_name(gas), skipped: points.len() - samples.len(), samples }
    }

    /// `n` supersonic samples with `q` between just above sonic and close to
    /// the limit speed, placed by a seeded generator.
    pub fn random(n: usize, seed: u64, gas: &GasParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (q_lo, q_hi) = (1.02 * sonic_speed(gas), 0.94 * gas.bernoulli.sqrt());
        let mut samples = Vec::with_capacity(n);
        let mut skipped = 0;
        while samples.len() < n {
            let q = rng.gen_range(q_lo..q_hi);
            let th = rng.gen_range(-1.2..1.2);
            match ringleb_sample(q, th, gas) {
                Some(s) => samples.push(s),
                None => skipped += 1,
            }
        }
        Self { family: family_name(gas), samples, skipped }
    }
}

fn family_name(gas: &GasParams) -> String {
    format!("Ringleb (gamma = {}, B0 = {})", gas.gamma, gas.bernoulli)
}

/// Residuals of the governing equations in three equivalent forms, evaluated
/// from the analytic derivatives only.
pub fn analytic_oracle_residuals(field: &OracleField, gas: &GasParams) -> OracleReport {
    let mut rep = OracleReport {
        samples: field.samples.len(),
        skipped: field.skipped,
        euler_residual: 0.0,
        irrotational_residual: 0.0,
        bernoulli_residual: 0.0,
        characteristic_residual: 0.0,
        angle_residual: 0.0,
    };
    for s in &field.samples {
        let (u, v, c) = (s.u, s.v, s.c);
        let q2 = u * u + v * v;
        let grad = s.u_x.abs().max(s.u_y.abs()).max(s.v_x.abs()).max(s.v_y.abs());
        let euler = (c * c - u * u) * s.u_x - u * v * (s.u_y + s.v_x) + (c * c - v * v) * s.v_y;
        rep.euler_residual = rep.euler_residual.max(euler.abs() / (q2 * grad));
        rep.irrotational_residual = rep.irrotational_residual.max((s.u_y - s.v_x).abs() / grad);
        rep.bernoulli_residual =
            rep.bernoulli_residual.max((q2 + c * c / gas.kappa - gas.bernoulli).abs() / gas.bernoulli);

        // characteristic form: ∂±u + Λ∓ ∂±v = 0 with ∂± = ∂x + Λ±∂y
        if let (Slope::Finite(lp), Slope::Finite(lm)) = eigenvalues_from_velocity(u, v, c) {
            let plus = (s.u_x + lp * s.u_y) + lm * (s.v_x + lp * s.v_y);
            let minus = (s.u_x + lm * s.u_y) + lp * (s.v_x + lm * s.v_y);
            let scale = grad * (1.0 + lp.abs()) * (1.0 + lm.abs());
            rep.characteristic_residual = rep.characteristic_residual.max(plus.abs().max(minus.abs()) / scale);
        }

        // angle form: ∂̄⁺θ + sin 2ω ∂̄⁺Ξ = 0, ∂̄⁻θ − sin 2ω ∂̄⁻Ξ = 0
        let q = q2.sqrt();
        let th_x = (u * s.v_x - v * s.u_x) / q2;
        let th_y = (u * s.v_y - v * s.u_y) / q2;
        let q_x = (u * s.u_x + v * s.v_x) / q;
        let q_y = (u * s.u_y + v * s.v_y) / q;
        let varpi = c / q;
        let vp_x = (s.c_x * q - c * q_x) / q2;
        let vp_y = (s.c_y * q - c * q_y) / q2;
        let dxi = dxi_dvarpi(varpi, gas);
        let (xi_x, xi_y) = (dxi * vp_x, dxi * vp_y);
        let omega = varpi.asin();
        let (alpha, beta) = (s.theta + omega, s.theta - omega);
        let s2w = (2.0 * omega).sin();
        let plus = alpha.cos() * (th_x + s2w * xi_x) + alpha.sin() * (th_y + s2w * xi_y);
        let minus = beta.cos() * (th_x - s2w * xi_x) + beta.sin() * (th_y - s2w * xi_y);
        let scale = th_x.abs().max(th_y.abs()).max(s2w * xi_x.abs()).max(s2w * xi_y.abs());
        rep.angle_residual = rep.angle_residual.max(plus.abs().max(minus.abs()) / scale);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sonic_locus_has_unit_varpi() {
        let gas = GasParams::air();
        let qs = sonic_speed(&gas);
        assert!((qs - 1.0).abs() < 1e-15);
        let state = crate::gas::angles_from_velocity(qs * 0.3f64.cos(), qs * 0.3f64.sin(), &gas).unwrap();
        assert_eq!(state.varpi, 1.0);
        assert!(ringleb_sample(qs, 0.3, &gas).is_none());
    }

    #[test]
    fn random_field_satisfies_every_form() {
        let gas = GasParams::air();
        let field = OracleField::random(1000, 7, &gas);
        let rep = analytic_oracle_residuals(&field, &gas);
        assert_eq!(rep.samples, 1000);
        assert!(rep.self_test_passed(1e-10), "{rep:?}");
        assert!(rep.characteristic_residual < 1e-8, "{rep:?}");
        assert!(rep.angle_residual < 1e-8, "{rep:?}");
    }

    #[test]
    fn mixed_partials_of_the_map_agree() {
        // the closed-form derivatives of x(q, θ) must be integrable
        let gas = GasParams::air();
        let h = 1e-5;
        let xq = |q: f64, t: f64| {
            let c = sound_speed(q, &gas);
            let m2 = q * q / (c * c);
            (t.cos().powi(2) * (m2 - 1.0) + t.sin().powi(2)) / (gas.density(c) * q.powi(3))
        };
        let xt = |q: f64, t: f64| -2.0 * t.sin() * t.cos() / (gas.density(sound_speed(q, &gas)) * q * q);
        let (q, t) = (1.4, 0.35);
        let d1 = (xq(q, t + h) - xq(q, t - h)) / (2.0 * h);
        let d2 = (xt(q + h, t) - xt(q - h, t)) / (2.0 * h);
        assert!((d1 - d2).abs() < 1e-7 * d1.abs().max(1.0), "{d1} {d2}");
    }

    #[test]
    fn unusable_points_are_counted() {
        let gas = GasParams::air();
        let field = OracleField::at_points(&[(0.8, 0.1), (1.0, 0.2), (1.6, 0.4), (2.6, 0.0)], &gas);
        assert_eq!(field.samples.len(), 1);
        assert_eq!(field.skipped, 3);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let gas = GasParams::air();
        assert_eq!(OracleField::random(20, 3, &gas), OracleField::random(20, 3, &gas));
    }
}
