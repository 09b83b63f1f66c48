//! Closure on the degenerate line: extrapolated coalescence `Ū = V̄` and the
//! regular transport of `W̄` that replaces the `0/0` quotient at `t = 0`.

use serde::Serialize;

use super::{rhs_u, rhs_v, rhs_w, HodographError, HodographSolution};
use crate::boundary::BoundaryTrace;
use crate::gas::GasParams;
use crate::numerics::three_point_derivative;

/// Values on `t = 0`, ordered by increasing `r` from `P′` to `D′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SonicLine {
    pub r: Vec<f64>,
    /// Extrapolants of `Ū` and `V̄` before averaging.
    pub u_extrap: Vec<f64>,
    pub v_extrap: Vec<f64>,
    /// Common value `(Ū + V̄)/2`.
    pub common: Vec<f64>,
    /// Transported `W̄(0, r)`.
    pub w_bar: Vec<f64>,
    /// `max |Ū − V̄|` of the extrapolants.
    pub max_discrepancy: f64,
    /// `max |(Ū − V̄)/t − W̄_transported|` on the last marched level.
    pub closure_defect: f64,
    /// `C = 1.5 · max |W̄|` over the run.
    pub closure_constant: f64,
    /// Coalescence is flagged when the discrepancy exceeds `10·C·t_min`.
    pub coalescence_tolerance: f64,
    pub coalescence_flagged: bool,
}

/// Cross-level derivative times `t`, one value per node.
fn scaled_r_derivative(rs: &[f64], vals: &[f64], t: f64) -> Vec<f64> {
    (0..rs.len()).map(|p| t * three_point_derivative(rs, vals, p)).collect()
}

pub fn close_sonic_line(mut sol: HodographSolution, trace: &BoundaryTrace, gas: &GasParams) -> Result<HodographSolution, HodographError> {
    if sol.is_closed() {
        return Ok(sol);
    }
    let mesh = &sol.mesh;
    let last = mesh.last_marched();
    let sonic = mesh.sonic_level();
    let t_last = mesh.levels[last];

    // R and S on every marched level; the single node of level 0 borrows its
    // characteristic's value from level 1
    let mut r_diag = Vec::with_capacity(last + 1);
    let mut s_diag = Vec::with_capacity(last + 1);
    for k in 0..=last {
        if mesh.nodes_r[k].len() < 2 {
            r_diag.push(Vec::new());
            s_diag.push(Vec::new());
            continue;
        }
        r_diag.push(scaled_r_derivative(&mesh.nodes_r[k], &sol.u_bar[k], mesh.levels[k]));
        s_diag.push(scaled_r_derivative(&mesh.nodes_r[k], &sol.v_bar[k], mesh.levels[k]));
    }
    r_diag[0] = vec![r_diag[1][1]];
    s_diag[0] = vec![s_diag[1][1]];

    let g = |k: usize, p: usize| rhs_w(mesh.levels[k], sol.u_bar[k][p], sol.v_bar[k][p], s_diag[k][p], gas);

    // transported W̄ on the marched levels, then its t = 0 value
    let mut w_transport: Vec<Vec<f64>> = (0..=last).map(|k| vec![0.0; k + 1]).collect();
    let mut w_sonic = vec![0.0; sonic + 1];
    let mut u_ext = vec![0.0; sonic + 1];
    let mut v_ext = vec![0.0; sonic + 1];
    for j in 0..=last {
        let mut w = mesh.chars[j].foot.w_bar_bnd;
        w_transport[j][0] = w;
        for k in j..last {
            let h = mesh.levels[k] - mesh.levels[k + 1];
            w -= 0.5 * h * (g(k, k - j) + g(k + 1, k + 1 - j));
            w_transport[k + 1][k + 1 - j] = w;
        }
        let p_last = last - j;
        let q = sonic - j;
        // the integrand at t = 0 is taken equal to its value at t_min
        w_sonic[q] = w - t_last * g(last, p_last);

        let (u_k, v_k) = (sol.u_bar[last][p_last], sol.v_bar[last][p_last]);
        if j < last {
            let t_prev = mesh.levels[last - 1];
            let (u_p, v_p) = (sol.u_bar[last - 1][p_last - 1], sol.v_bar[last - 1][p_last - 1]);
            let lever = t_last / (t_prev - t_last);
            u_ext[q] = u_k + (u_k - u_p) * lever;
            v_ext[q] = v_k + (v_k - v_p) * lever;
        } else {
            // a single marched node: one explicit step to t = 0
            u_ext[q] = u_k - t_last * rhs_u(t_last, u_k, v_k, gas);
            v_ext[q] = v_k - t_last * rhs_v(t_last, u_k, v_k, gas);
        }
    }
    let p_foot = trace.start();
    u_ext[0] = p_foot.a_bar;
    v_ext[0] = p_foot.b_bar;
    w_sonic[0] = p_foot.w_bar_bnd;

    let common: Vec<f64> = u_ext.iter().zip(&v_ext).map(|(u, v)| 0.5 * (u + v)).collect();
    let max_discrepancy = u_ext.iter().zip(&v_ext).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);

    let mut w_bar: Vec<Vec<f64>> = (0..=last)
        .map(|k| {
            let t = mesh.levels[k];
            sol.u_bar[k].iter().zip(&sol.v_bar[k]).map(|(u, v)| (u - v) / t).collect()
        })
        .collect();
    let closure_defect = w_bar[last].iter().zip(&w_transport[last]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    w_bar.push(w_sonic.clone());
    w_transport.push(w_sonic.clone());

    for (q, (&w, &c)) in w_sonic.iter().zip(&common).enumerate() {
        if !(w.is_finite() && c.is_finite()) {
            return Err(HodographError::NonFinite { char_id: sonic - q, t: 0.0, r: mesh.nodes_r[sonic][q] });
        }
    }

    let w_max = w_bar.iter().flatten().fold(0.0f64, |m, w| m.max(w.abs()));
    let closure_constant = 1.5 * w_max;
    let coalescence_tolerance = 10.0 * closure_constant * t_last;

    let line = SonicLine {
        r: mesh.nodes_r[sonic].clone(),
        u_extrap: u_ext,
        v_extrap: v_ext,
        common: common.clone(),
        w_bar: w_sonic,
        max_discrepancy,
        closure_defect,
        closure_constant,
        coalescence_tolerance,
        coalescence_flagged: max_discrepancy > coalescence_tolerance,
    };
    sol.u_bar.push(common.clone());
    sol.v_bar.push(common);
    sol.w_bar = w_bar;
    sol.w_transport = w_transport;
    sol.r_diag = r_diag;
    sol.s_diag = s_diag;
    sol.sonic = Some(line);
    Ok(sol)
}
