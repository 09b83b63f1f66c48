//! Characteristic-aligned mesh of the region `P′E′D′`.

use super::{HodographError, SolverParams, MIN_LEVELS};
use crate::boundary::{BoundaryTrace, RegionGeometry, TraceSample};
use crate::gas::char_shift_s;

/// Relative slack for the region-membership test.
const MEMBERSHIP_TOL: f64 = 1e-12;

/// A positive characteristic `r = ξ + s(t)` seeded at a wall point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub id: usize,
    /// Wall point where the characteristic starts.
    pub foot: TraceSample,
    /// Mesh level of the foot.
    pub foot_level: usize,
    /// Invariant label `ξ = r_b − s(t_b)`, which is also its `r` on `t = 0`.
    pub xi: f64,
}

#[derive(Debug, Clone)]
pub struct CharMesh {
    /// `t₀ > … > t_K = t_min`, then `0`.
    pub levels: Vec<f64>,
    /// `s(t_k)` for every level.
    pub shifts: Vec<f64>,
    /// Characteristic `j` has its foot on level `j`; the last one starts at `P′`.
    pub chars: Vec<Characteristic>,
    /// `r` of every node, `nodes_r[k][p]`, increasing in `p`.
    pub nodes_r: Vec<Vec<f64>>,
    pub geometry: RegionGeometry,
}

impl CharMesh {
    /// Index of the last marched level (`t_min`).
    pub fn last_marched(&self) -> usize {
        self.levels.len() - 2
    }

    /// Index of the `t = 0` level.
    pub fn sonic_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn char_of(&self, k: usize, p: usize) -> usize {
        k - p
    }

    pub fn position_of(&self, k: usize, char_id: usize) -> usize {
        k - char_id
    }

    pub fn node_count(&self) -> usize {
        self.nodes_r.iter().map(Vec::len).sum()
    }
}

/// Level abscissae from `t₀` to `t_min` (hit exactly), then `0`.
fn level_abscissae(t0: f64, params: &SolverParams) -> Result<Vec<f64>, HodographError> {
    if !(params.t_min < t0) {
        return Err(HodographError::InvalidParams(format!("t_min = {} must lie below t₀ = {t0}", params.t_min)));
    }
    let span = t0 - params.t_min;
    let n = match params.n_levels {
        Some(n) => n,
        // the small slack keeps an exact multiple from gaining a sliver level
        None => (span / params.dt - 1e-9).ceil().max(1.0) as usize,
    };
    if n < MIN_LEVELS {
        return Err(HodographError::MeshTooCoarse { levels: n, required: MIN_LEVELS });
    }
    let h = span / n as f64;
    let mut t: Vec<f64> = (0..n).map(|k| t0 - k as f64 * h).collect();
    t.push(params.t_min);
    t.push(0.0);
    Ok(t)
}

pub fn build_mesh(trace: &BoundaryTrace, geometry: &RegionGeometry, params: &SolverParams) -> Result<CharMesh, HodographError> {
    params.validate()?;
    let gas = *trace.gas();
    let levels = level_abscissae(geometry.t0, params)?;
    let shifts = levels.iter().map(|&t| char_shift_s(t, &gas)).collect::<Result<Vec<_>, _>>()?;
    let sonic = levels.len() - 1;

    let mut chars = Vec::with_capacity(levels.len());
    for (k, &t) in levels.iter().enumerate() {
        let foot = if k == 0 {
            *trace.end()
        } else if k == sonic {
            *trace.start()
        } else {
            trace.point_at_x(trace.x_at_t(t)?)?
        };
        chars.push(Characteristic { id: k, foot, foot_level: k, xi: foot.r - shifts[k] });
    }

    let mut nodes_r = Vec::with_capacity(levels.len());
    for k in 0..levels.len() {
        // wall side first: characteristic k, k−1, …, 0
        let row: Vec<f64> = (0..=k)
            .map(|p| {
                let c = &chars[k - p];
                c.foot.r - (shifts[c.foot_level] - shifts[k])
            })
            .collect();
        nodes_r.push(row);
    }

    for (k, row) in nodes_r.iter().enumerate() {
        let t = levels[k];
        if let Some(i) = row.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(HodographError::Geometry {
                t,
                message: format!("characteristics {} and {} cross (wall image not space-like)", k - i, k - i - 1),
            });
        }
        let upper = geometry.r_check(t, &gas)?;
        let lower = row[0];
        let slack = MEMBERSHIP_TOL * geometry.r0.max(1.0);
        if (row[row.len() - 1] - upper).abs() > slack || row.iter().any(|&r| r < lower - slack || r > upper + slack) {
            return Err(HodographError::Geometry { t, message: "node outside the region P'E'D'".into() });
        }
    }

    Ok(CharMesh { levels, shifts, chars, nodes_r, geometry: *geometry })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{compute_trace, region_corners, BoundarySpec};
    use crate::gas::GasParams;

    fn setup() -> (BoundaryTrace, RegionGeometry) {
        let gas = GasParams::air();
        let trace = compute_trace(&BoundarySpec::reference(), &gas).unwrap();
        let geom = region_corners(&trace, &gas).unwrap();
        (trace, geom)
    }

    #[test]
    fn levels_hit_t_min_exactly() {
        let (trace, geom) = setup();
        let mesh = build_mesh(&trace, &geom, &SolverParams::new(4e-3)).unwrap();
        assert_eq!(mesh.levels[0], geom.t0);
        assert_eq!(mesh.levels[mesh.last_marched()], 4e-3);
        assert_eq!(mesh.levels[mesh.sonic_level()], 0.0);
        let h = mesh.levels[0] - mesh.levels[1];
        assert!(h <= 4e-3 && h > 3.9e-3);
    }

    #[test]
    fn e_prime_characteristic_is_r_check() {
        let (trace, geom) = setup();
        let gas = *trace.gas();
        let mesh = build_mesh(&trace, &geom, &SolverParams::new(4e-3)).unwrap();
        for (k, row) in mesh.nodes_r.iter().enumerate() {
            let t = mesh.levels[k];
            assert_eq!(row[row.len() - 1], geom.r_check(t, &gas).unwrap());
            // wall node is the foot of characteristic k
            assert_eq!(row[0], mesh.chars[k].foot.r);
        }
        assert_eq!(*mesh.nodes_r[mesh.sonic_level()].last().unwrap(), geom.r_star);
    }

    #[test]
    fn nodes_follow_positive_characteristics() {
        let (trace, geom) = setup();
        let gas = *trace.gas();
        let mesh = build_mesh(&trace, &geom, &SolverParams::new(4e-3)).unwrap();
        let c = mesh.chars[7];
        for k in 7..mesh.levels.len() {
            let r = mesh.nodes_r[k][mesh.position_of(k, 7)];
            let expect = c.foot.r - (char_shift_s(c.foot.t, &gas).unwrap() - char_shift_s(mesh.levels[k], &gas).unwrap());
            assert!((r - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn triangular_node_count() {
        let (trace, geom) = setup();
        let mesh = build_mesh(&trace, &geom, &SolverParams::new(4e-3)).unwrap();
        let n = mesh.levels.len();
        assert_eq!(mesh.node_count(), n * (n + 1) / 2);
        assert_eq!(mesh.chars.len(), n);
    }

    #[test]
    fn huge_spacing_is_rejected() {
        let (trace, geom) = setup();
        let err = build_mesh(&trace, &geom, &SolverParams::new(0.3)).unwrap_err();
        assert!(matches!(err, HodographError::MeshTooCoarse { .. }));
        let err = build_mesh(&trace, &geom, &SolverParams::new(0.6)).unwrap_err();
        assert!(matches!(err, HodographError::InvalidParams(_)));
    }
}
