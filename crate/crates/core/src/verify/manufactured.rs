//! Manufactured solution for order verification of the marching kernel.

use serde::Serialize;

use crate::boundary::{BoundaryTrace, RegionGeometry, TraceSample};
use crate::gas::GasParams;
use crate::hodograph::{build_mesh, march_with, rhs_u, rhs_v, Forcing, HodographError, HodographSolution, SolverParams};

/// Smooth polynomial fields with `Ū* = V̄*` on `t = 0`, sources chosen so that
/// they solve the marched system exactly.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedForcing {
    pub gas: GasParams,
    /// `+1` for the consistent sources, `−1` to feed them with the wrong sign.
    pub source_sign: f64,
}

impl ManufacturedForcing {
    pub fn new(gas: GasParams) -> Self {
        Self { gas, source_sign: 1.0 }
    }

    pub fn exact_u(t: f64, r: f64) -> f64 {
        2.0 + 0.5 * t + 0.8 * r + 0.3 * t * r + t * t
    }

    pub fn exact_v(t: f64, r: f64) -> f64 {
        2.0 - 0.3 * t + 0.8 * r + 0.1 * t * r + 0.5 * t * t
    }

    fn du(t: f64, r: f64) -> (f64, f64) {
        (0.5 + 0.3 * r + 2.0 * t, 0.8 + 0.3 * t)
    }

    fn dv(t: f64, r: f64) -> (f64, f64) {
        (-0.3 + 0.1 * r + t, 0.8 + 0.1 * t)
    }
}

impl Forcing for ManufacturedForcing {
    fn boundary(&self, foot: &TraceSample) -> (f64, f64) {
        (Self::exact_u(foot.t, foot.r), Self::exact_v(foot.t, foot.r))
    }

    fn source(&self, t: f64, r: f64) -> (f64, f64) {
        let lambda = self.gas.lambda(t);
        let (u, v) = (Self::exact_u(t, r), Self::exact_v(t, r));
        let (u_t, u_r) = Self::du(t, r);
        let (v_t, v_r) = Self::dv(t, r);
        let q_plus = u_t + lambda * u_r - rhs_u(t, u, v, &self.gas);
        let q_minus = v_t - lambda * v_r - rhs_v(t, u, v, &self.gas);
        (self.source_sign * q_plus, self.source_sign * q_minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManufacturedReport {
    pub levels_coarse: usize,
    pub levels_fine: usize,
    pub error_coarse: f64,
    pub error_fine: f64,
    /// `error_coarse / error_fine`; 4 for a second-order scheme.
    pub ratio: f64,
    pub order: f64,
    /// Coarse-run error with the sources negated.
    pub wrong_sign_error: f64,
    pub wrong_sign_factor: f64,
}

fn max_error(sol: &HodographSolution) -> f64 {
    let mesh = &sol.mesh;
    let mut err = 0.0f64;
    for k in 0..=mesh.last_marched() {
        let t = mesh.levels[k];
        for (p, &r) in mesh.nodes_r[k].iter().enumerate() {
            err = err
                .max((sol.u_bar[k][p] - ManufacturedForcing::exact_u(t, r)).abs())
                .max((sol.v_bar[k][p] - ManufacturedForcing::exact_v(t, r)).abs());
        }
    }
    err
}

fn run(trace: &BoundaryTrace, geometry: &RegionGeometry, gas: &GasParams, n: usize, t_min: f64, forcing: &ManufacturedForcing) -> Result<f64, HodographError> {
    let params = SolverParams::new(t_min).with_t_min(t_min).with_levels(n);
    let mesh = build_mesh(trace, geometry, &params)?;
    Ok(max_error(&march_with(&mesh, trace, gas, &params, forcing)?))
}

/// Marches the manufactured problem with `n` and `2n` uniform levels down to
/// the fixed `t_min` and compares the max-norm errors.
pub fn manufactured_problem(trace: &BoundaryTrace, geometry: &RegionGeometry, gas: &GasParams, n: usize, t_min: f64) -> Result<ManufacturedReport, HodographError> {
    let forcing = ManufacturedForcing::new(*gas);
    let error_coarse = run(trace, geometry, gas, n, t_min, &forcing)?;
    let error_fine = run(trace, geometry, gas, 2 * n, t_min, &forcing)?;
    let wrong = ManufacturedForcing { source_sign: -1.0, ..forcing };
    let wrong_sign_error = run(trace, geometry, gas, n, t_min, &wrong)?;
    let ratio = error_coarse / error_fine;
    Ok(ManufacturedReport {
        levels_coarse: n,
        levels_fine: 2 * n,
        error_coarse,
        error_fine,
        ratio,
        order: ratio.log2(),
        wrong_sign_error,
        wrong_sign_factor: wrong_sign_error / error_coarse,
    })
}
