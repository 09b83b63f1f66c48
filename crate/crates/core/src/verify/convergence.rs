//! Refinement study of the full pipeline.

use serde::Serialize;

use crate::boundary::BoundarySpec;
use crate::gas::GasParams;
use crate::hodograph::SolverParams;
use crate::pipeline::{run_pipeline, PipelineError, RunOptions};

/// Errors at or below this level count as exact.
const EXACT_TOL: f64 = 1e-12;

/// Lowest acceptable observed order.
pub const REQUIRED_ORDER: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub t_min: f64,
    pub levels: usize,
    /// Discrete residual on `t ≥ t₀/4`.
    pub residual: f64,
    /// Discrete residual over every interior node.
    pub residual_full: f64,
    /// Closed-form residual; zero up to rounding on every run.
    pub closed_form_residual: f64,
    /// DE slope defect on `t ≥ t₀/4`.
    pub de_slope_defect: f64,
    /// DE slope defect over every segment, including the one at `D`.
    pub de_slope_defect_full: f64,
    pub pe_error: f64,
    /// `|(Ū − V̄)/t − W̄_transported|` at `t_min`.
    pub closure_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEntry {
    pub quantity: String,
    pub errors: Vec<f64>,
    /// `log₂` of consecutive error ratios.
    pub orders: Vec<f64>,
    /// At machine precision on every run; no order is defined.
    pub exact: bool,
    /// Errors strictly decrease with every refinement.
    pub monotone: bool,
    pub min_order: f64,
    pub passed: bool,
}

impl OrderEntry {
    fn new(quantity: &str, errors: Vec<f64>, required: bool) -> Self {
        let exact = errors.iter().all(|&e| e <= EXACT_TOL);
        let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let monotone = errors.windows(2).all(|w| w[1] < w[0]);
        let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
        let passed = exact || !required || (monotone && min_order >= REQUIRED_ORDER);
        Self { quantity: quantity.into(), errors, orders, exact, monotone, min_order, passed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<OrderEntry>,
    pub passed: bool,
}

impl ConvergenceTable {
    pub fn entry(&self, quantity: &str) -> Option<&OrderEntry> {
        self.orders.iter().find(|o| o.quantity == quantity)
    }
}

/// Runs the pipeline at `dt₀, dt₀/2, …` (`refinements` halvings, so
/// `refinements + 1` runs) with `t_min = dt` and tabulates observed orders.
pub fn convergence_study(spec: &BoundarySpec, gas: &GasParams, refinements: usize, dt0: f64) -> Result<ConvergenceTable, PipelineError> {
    let mut rows = Vec::with_capacity(refinements + 1);
    for i in 0..=refinements {
        let dt = dt0 / f64::from(1u32 << i);
        let run = run_pipeline(spec, gas, &RunOptions::new(SolverParams::new(dt).with_t_min(dt)))?;
        rows.push(ConvergenceRow {
            dt,
            t_min: dt,
            levels: run.solution.mesh.levels.len(),
            residual: run.residual.discrete_max_floor,
            residual_full: run.residual.discrete_max,
            closed_form_residual: run.residual.closed_form_max,
            de_slope_defect: run.checks.de_slope_defect_supersonic,
            de_slope_defect_full: run.checks.de_slope_defect,
            pe_error: run.checks.pe_error,
            closure_defect: run.diagnostics.closure_defect,
        });
    }
    let col = |f: fn(&ConvergenceRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let orders = vec![
        OrderEntry::new("residual", col(|r| r.residual), true),
        OrderEntry::new("residual_full", col(|r| r.residual_full), false),
        OrderEntry::new("de_slope_defect", col(|r| r.de_slope_defect), true),
        OrderEntry::new("de_slope_defect_full", col(|r| r.de_slope_defect_full), false),
        OrderEntry::new("pe_error", col(|r| r.pe_error), true),
        OrderEntry::new("closure_defect", col(|r| r.closure_defect), true),
    ];
    let passed = rows.len() >= 2 && orders.iter().all(|o| o.passed);
    Ok(ConvergenceTable { rows, orders, passed })
}
