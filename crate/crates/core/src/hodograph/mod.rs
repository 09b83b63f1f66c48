//! Characteristic marching of the linear degenerate system for `(Ū, V̄)` in
//! the partial hodograph plane `(t, r)`, closure on the degenerate line
//! `t = 0`, and the a-posteriori bound diagnostics.
//!
//! Mesh layout: levels `t₀ > t₁ > … > t_K = t_min` followed by `t = 0`. One
//! positive characteristic is seeded at every level's wall crossing, plus one
//! at the sonic point `P′`. At level `k` the node at position `p` (counted from
//! the wall side) lies on characteristic `k − p`.

mod closure;
mod diagnostics;
mod march;
mod mesh;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::BoundaryError;
use crate::gas::{GasError, GasParams};

pub use closure::{close_sonic_line, SonicLine};
pub use diagnostics::{diagnostics, BoundConstants, DiagnosticsReport, FitOutcome, HODOGRAPH_HOLDER_EXPONENT};
pub use march::{march, march_with, Forcing, HodographSolution, WallData};
pub use mesh::{build_mesh, CharMesh, Characteristic};

/// Default last marched level before the extrapolation to `t = 0`.
pub const DEFAULT_T_MIN: f64 = 1e-3;

/// Fewest levels between `t₀` and `t_min` accepted by the mesh builder.
pub const MIN_LEVELS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HodographError {
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),
    #[error("level spacing too coarse: {levels} levels between t₀ and t_min, at least {required} needed")]
    MeshTooCoarse { levels: usize, required: usize },
    #[error("mesh geometry error at level t = {t}: {message}")]
    Geometry { t: f64, message: String },
    #[error("non-finite value on characteristic {char_id} at (t, r) = ({t}, {r})")]
    NonFinite { char_id: usize, t: f64, r: f64 },
    #[error("solution has not been closed on the degenerate line")]
    NotClosed,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Gas(#[from] GasError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Upper bound on the level spacing in `t`.
    pub dt: f64,
    /// Last marched level.
    pub t_min: f64,
    /// Trapezoidal corrector sweeps after the Euler predictor.
    pub corrector_iters: usize,
    /// `1` for linear, `3` for monotone cubic interpolation of the
    /// negative-characteristic feet.
    pub interp_order: u8,
    /// When set, exactly this many uniform steps from `t₀` to `t_min`
    /// replace the spacing derived from `dt`.
    pub n_levels: Option<usize>,
}

impl SolverParams {
    /// Spacing `dt` with `t_min = max(10⁻³, dt)` and the default scheme.
    pub fn new(dt: f64) -> Self {
        Self { dt, t_min: DEFAULT_T_MIN.max(dt), corrector_iters: 2, interp_order: 3, n_levels: None }
    }

    pub fn with_t_min(mut self, t_min: f64) -> Self {
        self.t_min = t_min;
        self
    }

    pub fn with_levels(mut self, n_levels: usize) -> Self {
        self.n_levels = Some(n_levels);
        self
    }

    /// Checks the parameters that do not depend on the boundary.
    pub fn validate(&self) -> Result<(), HodographError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(HodographError::InvalidParams(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_min > 0.0 && self.t_min < 1.0) {
            return Err(HodographError::InvalidParams(format!("t_min must lie in (0, 1), got {}", self.t_min)));
        }
        if self.n_levels.is_none() && self.dt > self.t_min * (1.0 + 1e-12) {
            return Err(HodographError::InvalidParams(format!("dt = {} exceeds t_min = {}", self.dt, self.t_min)));
        }
        if self.corrector_iters > 20 {
            return Err(HodographError::InvalidParams(format!("corrector_iters = {} is unreasonable", self.corrector_iters)));
        }
        if self.interp_order != 1 && self.interp_order != 3 {
            return Err(HodographError::InvalidParams(format!("interp_order must be 1 or 3, got {}", self.interp_order)));
        }
        Ok(())
    }
}

/// Right-hand side of the `Ū` equation along `∂₊ = ∂_t + λ∂_r`.
#[inline]
pub fn rhs_u(t: f64, u: f64, v: f64, gas: &GasParams) -> f64 {
    let t2 = t * t;
    let f = gas.f(t);
    let k = gas.kappa;
    (u - v) / (2.0 * t) + (k + 2.0 - t2) / (2.0 * f) * (u - v) * t - (k + 2.0 - 2.0 * t2) / f * u * t
}

/// Right-hand side of the `V̄` equation along `∂₋ = ∂_t − λ∂_r`.
#[inline]
pub fn rhs_v(t: f64, u: f64, v: f64, gas: &GasParams) -> f64 {
    let t2 = t * t;
    let f = gas.f(t);
    let k = gas.kappa;
    (v - u) / (2.0 * t) - (k + 2.0 - t2) / (2.0 * f) * (u - v) * t - (k + 2.0 - 2.0 * t2) / f * v * t
}

/// Right-hand side of the `W̄` transport along `∂₊`, given `S = tV̄_r`.
#[inline]
pub fn rhs_w(t: f64, u: f64, v: f64, s: f64, gas: &GasParams) -> f64 {
    let f = gas.f(t);
    t * t / f * (u - v) - 2.0 * (1.0 - t * t).sqrt() / f * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_evaluated_euler_step() {
        let g = GasParams::air();
        let rhs = rhs_u(0.4, 1.0, 2.0, &g);
        assert_relative_eq!(rhs, -2.577839, epsilon = 1e-6);
        assert_relative_eq!(1.0 - 0.01 * rhs, 1.025778, epsilon = 1e-6);
    }

    #[test]
    fn equal_values_leave_only_damping() {
        let g = GasParams::air();
        let t: f64 = 0.3;
        let damping = -(g.kappa + 2.0 - 2.0 * t * t) / g.f(t) * t * 1.7;
        assert_relative_eq!(rhs_u(t, 1.7, 1.7, &g), damping, max_relative = 1e-15);
        assert_relative_eq!(rhs_v(t, 1.7, 1.7, &g), damping, max_relative = 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(SolverParams::new(1e-3).validate().is_ok());
        assert_eq!(SolverParams::new(4e-3).t_min, 4e-3);
        assert_eq!(SolverParams::new(1e-4).t_min, DEFAULT_T_MIN);
        assert!(SolverParams::new(-1.0).validate().is_err());
        assert!(SolverParams::new(1e-3).with_t_min(1e-4).validate().is_err());
        let mut p = SolverParams::new(1e-3);
        p.interp_order = 2;
        assert!(p.validate().is_err());
    }
}
