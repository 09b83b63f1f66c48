//! The bounding curves `PE` (wall), `PD` (sonic) and `DE` (negative
//! characteristic) as polylines.

use serde::Serialize;

use super::PhysicalPatch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub varpi: f64,
    /// Arc length from the first point of the polyline.
    pub arclength: f64,
    /// Unit tangent oriented along the traversal: the level-curve direction
    /// `(ϖ_y, −ϖ_x)/|∇ϖ|` on `PD`, the secant direction elsewhere.
    pub tangent: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchCurves {
    /// Wall from `P` to `E`.
    pub pe: Vec<CurvePoint>,
    /// Sonic curve from `P` to `D`.
    pub pd: Vec<CurvePoint>,
    /// Negative characteristic from `D` to `E`.
    pub de: Vec<CurvePoint>,
    pub corner_d: (f64, f64),
}

fn polyline(nodes: Vec<&super::PatchNode>, level_tangent: bool) -> Vec<CurvePoint> {
    let n = nodes.len();
    let mut out: Vec<CurvePoint> = Vec::with_capacity(n);
    let mut s = 0.0;
    for (i, node) in nodes.iter().enumerate() {
        if i > 0 {
            s += (node.x - nodes[i - 1].x).hypot(node.y - nodes[i - 1].y);
        }
        let (a, b) = if i + 1 < n { (i, i + 1) } else { (i.saturating_sub(1), i) };
        let (dx, dy) = (nodes[b].x - nodes[a].x, nodes[b].y - nodes[a].y);
        let len = dx.hypot(dy);
        let secant = if len > 0.0 { (dx / len, dy / len) } else { (0.0, 0.0) };
        let tangent = if level_tangent {
            let g = node.grad;
            let norm = g.varpi_x.hypot(g.varpi_y);
            let tan = (g.varpi_y / norm, -g.varpi_x / norm);
            if tan.0 * secant.0 + tan.1 * secant.1 < 0.0 {
                (-tan.0, -tan.1)
            } else {
                tan
            }
        } else {
            secant
        };
        out.push(CurvePoint { x: node.x, y: node.y, t: node.t, r: node.r, theta: node.theta, varpi: node.varpi, arclength: s, tangent });
    }
    out
}

pub fn extract_curves(patch: &PhysicalPatch) -> PatchCurves {
    let sonic = patch.nodes.len() - 1;
    // wall nodes: position 0 of every level, from P (sonic level) up to E
    let pe = polyline((0..=sonic).rev().map(|k| &patch.nodes[k][0]).collect(), false);
    let pd = polyline(patch.sonic_row().iter().collect(), true);
    let mut de_nodes: Vec<_> = patch.characteristic(0).collect();
    de_nodes.reverse();
    let de = polyline(de_nodes, false);
    PatchCurves { pe, pd, de, corner_d: patch.corner_d() }
}
