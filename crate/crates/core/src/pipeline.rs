//! The full construction: admissibility, wall trace, marching, closure,
//! inversion and every invariant check, as one call.

use serde::Serialize;
use thiserror::Error;

use crate::boundary::{check_admissibility, compute_trace, region_corners, AdmissibilityReport, BoundaryError, BoundarySpec, BoundaryTrace, RegionGeometry};
use crate::gas::GasParams;
use crate::hodograph::{build_mesh, close_sonic_line, diagnostics, march, DiagnosticsReport, HodographError, HodographSolution, SolverParams};
use crate::inversion::{check_patch, extract_curves, reconstruct, residual_euler, InversionChecks, InversionError, PatchCurves, PhysicalPatch, ResidualReport, SUPERSONIC_FLOOR_FRACTION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("wall data are not admissible: {}", .0.failures.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(", "))]
    Inadmissible(Box<AdmissibilityReport>),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Hodograph(#[from] HodographError),
    #[error(transparent)]
    Inversion(#[from] InversionError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub params: SolverParams,
    /// Negates `V̄` before the inversion. Test hook for the invariant checks.
    pub flip_v_sign: bool,
}

impl RunOptions {
    pub fn new(params: SolverParams) -> Self {
        Self { params, flip_v_sign: false }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub admissibility: AdmissibilityReport,
    pub trace: BoundaryTrace,
    pub geometry: RegionGeometry,
    pub solution: HodographSolution,
    pub diagnostics: DiagnosticsReport,
    pub patch: PhysicalPatch,
    pub curves: PatchCurves,
    pub checks: InversionChecks,
    pub residual: ResidualReport,
}

/// Scalar summary used by reports and acceptance tests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub dt: f64,
    pub t_min: f64,
    pub levels: usize,
    pub nodes: usize,
    pub corner_d: (f64, f64),
    pub residual: ResidualReport,
    pub de_slope_defect: f64,
    pub de_slope_defect_supersonic: f64,
    pub pe_error: f64,
    pub closure_defect: f64,
    pub invariant_failures: Vec<String>,
}

impl PipelineRun {
    /// Invariant violations that make a run unacceptable.
    pub fn invariant_failures(&self) -> Vec<String> {
        let mut out = self.checks.failures.clone();
        if self.diagnostics.positivity_violations > 0 {
            out.push(format!("positivity: {} non-positive values of Ū or V̄", self.diagnostics.positivity_violations));
        }
        out
    }

    pub fn summary(&self) -> RunSummary {
        let p = &self.solution.params;
        RunSummary {
            dt: p.dt,
            t_min: p.t_min,
            levels: self.solution.mesh.levels.len(),
            nodes: self.solution.mesh.node_count(),
            corner_d: self.curves.corner_d,
            residual: self.residual,
            de_slope_defect: self.checks.de_slope_defect,
            de_slope_defect_supersonic: self.checks.de_slope_defect_supersonic,
            pe_error: self.checks.pe_error,
            closure_defect: self.diagnostics.closure_defect,
            invariant_failures: self.invariant_failures(),
        }
    }
}

/// Checks the wall data, then solves, inverts and checks the patch.
pub fn run_pipeline(spec: &BoundarySpec, gas: &GasParams, opts: &RunOptions) -> Result<PipelineRun, PipelineError> {
    let admissibility = check_admissibility(spec, gas);
    if !admissibility.passed {
        return Err(PipelineError::Inadmissible(Box::new(admissibility)));
    }
    opts.params.validate()?;
    let trace = compute_trace(spec, gas)?;
    let geometry = region_corners(&trace, gas)?;
    let mesh = build_mesh(&trace, &geometry, &opts.params)?;
    let marched = march(&mesh, &trace, gas, &opts.params)?;
    let mut solution = close_sonic_line(marched, &trace, gas)?;
    let diagnostics = diagnostics(&solution, &trace, gas);
    if opts.flip_v_sign {
        solution.v_bar.iter_mut().flatten().for_each(|v| *v = -*v);
    }
    let patch = reconstruct(&solution, gas)?;
    let curves = extract_curves(&patch);
    let checks = check_patch(&patch, &curves, &trace, &geometry, gas);
    let residual = residual_euler(&patch, gas, SUPERSONIC_FLOOR_FRACTION * geometry.t0);
    Ok(PipelineRun { admissibility, trace, geometry, solution, diagnostics, patch, curves, checks, residual })
}
