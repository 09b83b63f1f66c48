//! Level-by-level Heun marching from the wall image down to `t_min`.

use super::closure::SonicLine;
use super::{rhs_u, rhs_v, CharMesh, HodographError, SolverParams};
use crate::boundary::{BoundaryTrace, TraceSample};
use crate::gas::GasParams;
use crate::interp::{InterpKind, Interpolant};

/// Boundary values and optional source terms for the marched system.
pub trait Forcing: Sync {
    /// `(Ū, V̄)` at a wall point.
    fn boundary(&self, foot: &TraceSample) -> (f64, f64);

    /// Sources `(Q₊, Q₋)` added to the `Ū` and `V̄` right-hand sides.
    fn source(&self, _t: f64, _r: f64) -> (f64, f64) {
        (0.0, 0.0)
    }
}

/// The physical problem: `Ū = ā`, `V̄ = b̄` on the wall, no sources.
#[derive(Debug, Clone, Copy, Default)]
pub struct WallData;

impl Forcing for WallData {
    fn boundary(&self, foot: &TraceSample) -> (f64, f64) {
        (foot.a_bar, foot.b_bar)
    }
}

/// Nodal values on the characteristic mesh, indexed `[level][position]`.
///
/// After marching, `u_bar`/`v_bar` hold the levels `t₀ … t_min`. Closing the
/// sonic line appends the `t = 0` row and fills the `W̄`, `R`, `S` fields.
#[derive(Debug, Clone)]
pub struct HodographSolution {
    pub mesh: CharMesh,
    pub params: SolverParams,
    pub gas: GasParams,
    pub u_bar: Vec<Vec<f64>>,
    pub v_bar: Vec<Vec<f64>>,
    /// `(Ū − V̄)/t` for `t > 0`, the transported value on `t = 0`.
    pub w_bar: Vec<Vec<f64>>,
    /// `W̄` integrated along each positive characteristic from its foot.
    pub w_transport: Vec<Vec<f64>>,
    /// `R = tŪ_r` on the marched levels.
    pub r_diag: Vec<Vec<f64>>,
    /// `S = tV̄_r` on the marched levels.
    pub s_diag: Vec<Vec<f64>>,
    /// Negative-characteristic feet that landed on the wall image.
    pub boundary_hits: usize,
    pub sonic: Option<SonicLine>,
}

impl HodographSolution {
    pub fn is_closed(&self) -> bool {
        self.sonic.is_some()
    }
}

pub fn march(mesh: &CharMesh, trace: &BoundaryTrace, gas: &GasParams, params: &SolverParams) -> Result<HodographSolution, HodographError> {
    march_with(mesh, trace, gas, params, &WallData)
}

/// Marches with arbitrary boundary values and sources (used for
/// manufactured-solution checks).
pub fn march_with(
    mesh: &CharMesh,
    trace: &BoundaryTrace,
    gas: &GasParams,
    params: &SolverParams,
    forcing: &dyn Forcing,
) -> Result<HodographSolution, HodographError> {
    params.validate()?;
    let kind = if params.interp_order == 1 { InterpKind::Linear } else { InterpKind::Monotone };
    let last = mesh.last_marched();
    let mut u_bar: Vec<Vec<f64>> = Vec::with_capacity(last + 2);
    let mut v_bar: Vec<Vec<f64>> = Vec::with_capacity(last + 2);
    let mut boundary_hits = 0usize;

    let (u0, v0) = forcing.boundary(&mesh.chars[0].foot);
    u_bar.push(vec![u0]);
    v_bar.push(vec![v0]);

    for k in 0..last {
        let (tk, tn) = (mesh.levels[k], mesh.levels[k + 1]);
        let h = tk - tn;
        let ds = mesh.shifts[k] - mesh.shifts[k + 1];
        let rk = &mesh.nodes_r[k];
        let rn = &mesh.nodes_r[k + 1];
        let (uk, vk) = (&u_bar[k], &v_bar[k]);
        let interps = if rk.len() >= 2 {
            Some((Interpolant::new(rk.clone(), uk.clone(), kind), Interpolant::new(rk.clone(), vk.clone(), kind)))
        } else {
            None
        };

        let mut un_row = Vec::with_capacity(rn.len());
        let mut vn_row = Vec::with_capacity(rn.len());
        let (ub, vb) = forcing.boundary(&mesh.chars[k + 1].foot);
        un_row.push(ub);
        vn_row.push(vb);

        for p in 1..rn.len() {
            let r_node = rn[p];
            let (u_old, v_here) = (uk[p - 1], vk[p - 1]);
            let fu_k = rhs_u(tk, u_old, v_here, gas) + forcing.source(tk, rk[p - 1]).0;

            // foot of the negative characteristic through the new node
            let r_foot = r_node - ds;
            let (t_f, r_f, u_f, v_f) = if r_foot >= rk[0] {
                match &interps {
                    Some((iu, iv)) => (tk, r_foot, iu.eval(r_foot), iv.eval(r_foot)),
                    None => (tk, rk[0], uk[0], vk[0]),
                }
            } else {
                boundary_hits += 1;
                let hit = trace.minus_characteristic_hit(r_node + mesh.shifts[k + 1], tn, tk)?;
                let (u, v) = forcing.boundary(&hit);
                (hit.t, hit.r, u, v)
            };
            let h_f = t_f - tn;
            let fv_f = rhs_v(t_f, u_f, v_f, gas) + forcing.source(t_f, r_f).1;

            let mut un = u_old - h * fu_k;
            let mut vn = v_f - h_f * fv_f;
            let (q_plus, q_minus) = forcing.source(tn, r_node);
            for _ in 0..params.corrector_iters {
                let fu_n = rhs_u(tn, un, vn, gas) + q_plus;
                let fv_n = rhs_v(tn, un, vn, gas) + q_minus;
                un = u_old - 0.5 * h * (fu_k + fu_n);
                vn = v_f - 0.5 * h_f * (fv_f + fv_n);
            }
            if !(un.is_finite() && vn.is_finite()) {
                return Err(HodographError::NonFinite { char_id: mesh.char_of(k + 1, p), t: tn, r: r_node });
            }
            un_row.push(un);
            vn_row.push(vn);
        }
        u_bar.push(un_row);
        v_bar.push(vn_row);
    }

    Ok(HodographSolution {
        mesh: mesh.clone(),
        params: *params,
        gas: *gas,
        u_bar,
        v_bar,
        w_bar: Vec::new(),
        w_transport: Vec::new(),
        r_diag: Vec::new(),
        s_diag: Vec::new(),
        boundary_hits,
        sonic: None,
    })
}
