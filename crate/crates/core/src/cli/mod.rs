//! Command layer behind the binary: configuration ingestion, orchestration of
//! the pipeline and serialization of fields, curves and reports.
//!
//! Exit codes: `0` success, `1` configuration or I/O error, `2` inadmissible
//! wall data, `3` solver failure, `4` invariant or verification failure.

mod config;
mod output;

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::boundary::{check_admissibility, compute_trace, region_corners, AdmissibilityReport, BoundarySpec, BoundaryTrace, RegionGeometry};
use crate::gas::GasParams;
use crate::hodograph::{BoundConstants, FitOutcome, HODOGRAPH_HOLDER_EXPONENT};
use crate::inversion::PHYSICAL_HOLDER_EXPONENT;
use crate::pipeline::{run_pipeline, PipelineError, PipelineRun, RunOptions, RunSummary};
use crate::verify::{
    analytic_oracle_residuals, convergence_study, manufactured_problem, ConvergenceTable, ManufacturedReport, OracleField, OracleReport, CLOSED_FORM_RESIDUAL_TOL,
    HODOGRAPH_EXPONENT_FLOOR, MANUFACTURED_RATIO_RANGE, ORACLE_RESIDUAL_TOL, ORACLE_SELF_TOL, PHYSICAL_EXPONENT_FLOOR,
};

pub use config::{BoundaryConfig, ConfigError, Format, GasConfig, OutputConfig, Overrides, Preset, RunConfig, SolverConfig, VerifyCheck, VerifyConfig};
pub use output::{num, ArtifactWriter, CURVE_COLUMNS, NODE_COLUMNS, PD_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Success,
    ConfigError,
    Inadmissible,
    SolverFailure,
    InvariantFailure,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::ConfigError => 1,
            ExitStatus::Inadmissible => 2,
            ExitStatus::SolverFailure => 3,
            ExitStatus::InvariantFailure => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
    #[error("solver failure: {0}")]
    Solver(PipelineError),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) | CliError::Output { .. } => ExitStatus::ConfigError,
            CliError::Solver(PipelineError::Inadmissible(_)) => ExitStatus::Inadmissible,
            CliError::Solver(_) => ExitStatus::SolverFailure,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Solver(e)
    }
}

/// What a finished command reports: its exit status, human-readable lines
/// for standard output, and the files it wrote.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: ExitStatus,
    pub lines: Vec<String>,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Solve,
    Verify,
    Converge,
}

#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub config: PathBuf,
    pub overrides: Overrides,
    /// Negates `V̄` before the inversion; exercises the invariant checks.
    pub flip_v_sign: bool,
}

/// Loads the configuration, runs the command and maps every failure to its
/// exit status.
pub fn execute(command: Command, inv: &Invocation) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::from_path(&inv.config)?;
    cfg.apply(&inv.overrides)?;
    let ctx = Context::new(&cfg)?;
    match command {
        Command::Check => ctx.check(),
        Command::Solve => ctx.solve(inv.flip_v_sign),
        Command::Verify => ctx.verify(),
        Command::Converge => ctx.converge(),
    }
}

struct Context<'a> {
    cfg: &'a RunConfig,
    gas: GasParams,
    writer: ArtifactWriter,
    artifacts: Vec<PathBuf>,
}

fn write_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Output { path: path.display().to_string(), message: e.to_string() }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct CheckReport<'a> {
    command: &'static str,
    status: ExitStatus,
    config: &'a RunConfig,
    admissibility: &'a AdmissibilityReport,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    command: &'static str,
    status: ExitStatus,
    config: &'a RunConfig,
    summary: RunSummary,
    corner_p: (f64, f64),
    corner_d: (f64, f64),
    geometry: &'a RegionGeometry,
    bound_constants: &'a BoundConstants,
    admissibility: &'a AdmissibilityReport,
    diagnostics: &'a crate::hodograph::DiagnosticsReport,
    checks: &'a crate::inversion::InversionChecks,
}

#[derive(Serialize)]
struct HolderReport {
    /// Hodograph-plane traces along `t = 0`, theory exponent `1/3`.
    hodograph_predicted: f64,
    hodograph_floor: f64,
    hodograph: Vec<FitOutcome>,
    /// Physical gradient traces along the sonic curve, theory exponent `1/6`.
    physical_predicted: f64,
    physical_floor: f64,
    physical: Vec<FitOutcome>,
    passed: bool,
}

#[derive(Serialize)]
struct OracleSection {
    report: OracleReport,
    self_tolerance: f64,
    residual_tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ManufacturedSection {
    report: ManufacturedReport,
    accepted_ratio: (f64, f64),
    passed: bool,
}

#[derive(Serialize)]
struct ResidualSection {
    report: crate::inversion::ResidualReport,
    closed_form_tolerance: f64,
    passed: bool,
}

#[derive(Serialize, Default)]
struct VerifyReport {
    command: &'static str,
    oracle: Option<OracleSection>,
    manufactured: Option<ManufacturedSection>,
    residual: Option<ResidualSection>,
    holder: Option<HolderReport>,
    passed: bool,
}

#[derive(Serialize)]
struct ConvergeReport<'a> {
    command: &'static str,
    refinements: usize,
    dt0: f64,
    table: &'a ConvergenceTable,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        let gas = cfg.gas_params()?;
        let dir = cfg.output_dir();
        let writer = ArtifactWriter::new(&dir, &cfg.hash()).map_err(|e| write_err(&dir, e))?;
        Ok(Self { cfg, gas, writer, artifacts: Vec::new() })
    }

    fn record(&mut self, r: std::io::Result<PathBuf>, name: &str) -> Result<(), CliError> {
        let path = r.map_err(|e| write_err(&self.writer.dir.join(name), e))?;
        self.artifacts.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<(), CliError> {
        if self.cfg.wants(Format::Json) {
            let r = self.writer.write_json(name, body);
            self.record(r, name)?;
        }
        Ok(())
    }

    fn finish(self, status: ExitStatus, lines: Vec<String>) -> Result<Outcome, CliError> {
        Ok(Outcome { status, lines, artifacts: self.artifacts })
    }

    fn spec(&self) -> Result<BoundarySpec, CliError> {
        Ok(self.cfg.boundary_spec()?)
    }

    fn run_options(&self, flip_v_sign: bool) -> Result<RunOptions, CliError> {
        let mut opts = RunOptions::new(self.cfg.solver_params()?);
        opts.flip_v_sign = flip_v_sign;
        Ok(opts)
    }

    fn check(mut self) -> Result<Outcome, CliError> {
        let spec = self.spec()?;
        let rep = check_admissibility(&spec, &self.gas);
        let status = if rep.passed { ExitStatus::Success } else { ExitStatus::Inadmissible };
        let mut lines = vec![format!("admissibility: {} ({} wall samples)", mark(rep.passed), rep.n_samples)];
        for f in &rep.failures {
            lines.push(format!("  {}: {} violations, worst {} at x = {}", f.name, f.violations, f.value, f.x));
        }
        self.json("admissibility.json", &CheckReport { command: "check", status, config: self.cfg, admissibility: &rep })?;
        self.finish(status, lines)
    }

    fn solve(mut self, flip_v_sign: bool) -> Result<Outcome, CliError> {
        let spec = self.spec()?;
        let run = run_pipeline(&spec, &self.gas, &self.run_options(flip_v_sign)?)?;
        if self.cfg.wants(Format::Csv) {
            let w = self.writer.clone();
            self.record(w.write_nodes(&run.patch), "nodes.csv")?;
            self.record(w.write_curve("pe.csv", &run.curves.pe), "pe.csv")?;
            self.record(w.write_pd(&run.curves.pd), "pd.csv")?;
            self.record(w.write_curve("de.csv", &run.curves.de), "de.csv")?;
        }
        let failures = run.invariant_failures();
        let status = if failures.is_empty() { ExitStatus::Success } else { ExitStatus::InvariantFailure };
        let summary = run.summary();
        let mut lines = solve_lines(&run, &summary);
        lines.extend(failures.iter().map(|f| format!("invariant failure: {f}")));
        let report = SolveReport {
            command: "solve",
            status,
            config: self.cfg,
            corner_p: run.patch.corner_p(),
            corner_d: run.curves.corner_d,
            summary,
            geometry: &run.geometry,
            bound_constants: &run.diagnostics.constants,
            admissibility: &run.admissibility,
            diagnostics: &run.diagnostics,
            checks: &run.checks,
        };
        self.json("report.json", &report)?;
        self.finish(status, lines)
    }

    fn verify(mut self) -> Result<Outcome, CliError> {
        let cfg = self.cfg;
        let v = &cfg.verify;
        let mut rep = VerifyReport { command: "verify", ..Default::default() };
        let mut lines = Vec::new();

        // independent of the wall data and the solver
        if cfg.check_enabled(VerifyCheck::Oracle) {
            let field = OracleField::random(v.oracle_samples, v.seed, &self.gas);
            let o = analytic_oracle_residuals(&field, &self.gas);
            let passed = o.self_test_passed(ORACLE_SELF_TOL) && o.characteristic_residual < ORACLE_RESIDUAL_TOL && o.angle_residual < ORACLE_RESIDUAL_TOL;
            lines.push(format!(
                "oracle: {} ({} samples, angle-form residual {:e}, characteristic residual {:e})",
                mark(passed),
                o.samples,
                o.angle_residual,
                o.characteristic_residual
            ));
            rep.oracle = Some(OracleSection { report: o, self_tolerance: ORACLE_SELF_TOL, residual_tolerance: ORACLE_RESIDUAL_TOL, passed });
        }

        let needs_wall = [VerifyCheck::Manufactured, VerifyCheck::Residual, VerifyCheck::Holder].iter().any(|&c| cfg.check_enabled(c));
        if needs_wall {
            let spec = self.spec()?;
            let (trace, geometry) = admissible_trace(&spec, &self.gas)?;
            if cfg.check_enabled(VerifyCheck::Manufactured) {
                let m = manufactured_problem(&trace, &geometry, &self.gas, v.manufactured_levels, v.manufactured_t_min).map_err(PipelineError::from)?;
                let (lo, hi) = MANUFACTURED_RATIO_RANGE;
                let passed = m.ratio >= lo && m.ratio <= hi && m.wrong_sign_factor > 1.0;
                lines.push(format!("manufactured: {} (error ratio {:.4}, observed order {:.4})", mark(passed), m.ratio, m.order));
                rep.manufactured = Some(ManufacturedSection { report: m, accepted_ratio: MANUFACTURED_RATIO_RANGE, passed });
            }
            if cfg.check_enabled(VerifyCheck::Residual) || cfg.check_enabled(VerifyCheck::Holder) {
                let run = run_pipeline(&spec, &self.gas, &self.run_options(false)?)?;
                if cfg.check_enabled(VerifyCheck::Residual) {
                    let r = run.residual;
                    let passed = r.closed_form_max < CLOSED_FORM_RESIDUAL_TOL && r.discrete_max_floor.is_finite();
                    lines.push(format!(
                        "residual: {} (closed form {:e}, discrete {:e} on t >= {:.4})",
                        mark(passed),
                        r.closed_form_max,
                        r.discrete_max_floor,
                        r.t_floor
                    ));
                    rep.residual = Some(ResidualSection { report: r, closed_form_tolerance: CLOSED_FORM_RESIDUAL_TOL, passed });
                }
                if cfg.check_enabled(VerifyCheck::Holder) {
                    let h = holder_report(&run);
                    lines.push(format!(
                        "holder: {} (u_bar exponent {}, physical minimum {})",
                        mark(h.passed),
                        fmt_opt(run.diagnostics.holder_exponent("u_bar")),
                        fmt_opt(run.checks.min_pd_exponent())
                    ));
                    rep.holder = Some(h);
                }
            }
        }

        rep.passed = rep.oracle.as_ref().is_none_or(|s| s.passed)
            && rep.manufactured.as_ref().is_none_or(|s| s.passed)
            && rep.residual.as_ref().is_none_or(|s| s.passed)
            && rep.holder.as_ref().is_none_or(|s| s.passed);
        let status = if rep.passed { ExitStatus::Success } else { ExitStatus::InvariantFailure };
        self.json("verify.json", &rep)?;
        self.finish(status, lines)
    }

    fn converge(mut self) -> Result<Outcome, CliError> {
        let spec = self.spec()?;
        let v = &self.cfg.verify;
        let table = convergence_study(&spec, &self.gas, v.refinement_levels, v.dt0)?;
        if self.cfg.wants(Format::Csv) {
            let cols = ["dt", "t_min", "levels", "residual", "residual_full", "closed_form_residual", "de_slope_defect", "de_slope_defect_full", "pe_error", "closure_defect"];
            let rows = table.rows.iter().map(|r| {
                let mut row = vec![num(r.dt), num(r.t_min), r.levels.to_string()];
                row.extend([r.residual, r.residual_full, r.closed_form_residual, r.de_slope_defect, r.de_slope_defect_full, r.pe_error, r.closure_defect].map(num));
                row
            });
            let res = self.writer.write_csv("convergence.csv", &cols, rows);
            self.record(res, "convergence.csv")?;
        }
        let mut lines = Vec::new();
        for o in &table.orders {
            let orders: Vec<String> = o.orders.iter().map(|x| format!("{x:.3}")).collect();
            let note = if o.exact { " (exact)" } else { "" };
            lines.push(format!("{}: {} orders [{}]{note}", o.quantity, mark(o.passed), orders.join(", ")));
        }
        let status = if table.passed { ExitStatus::Success } else { ExitStatus::InvariantFailure };
        self.json("convergence.json", &ConvergeReport { command: "converge", refinements: v.refinement_levels, dt0: v.dt0, table: &table })?;
        self.finish(status, lines)
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

fn admissible_trace(spec: &BoundarySpec, gas: &GasParams) -> Result<(BoundaryTrace, RegionGeometry), CliError> {
    let adm = check_admissibility(spec, gas);
    if !adm.passed {
        return Err(PipelineError::Inadmissible(Box::new(adm)).into());
    }
    let trace = compute_trace(spec, gas).map_err(PipelineError::from)?;
    let geometry = region_corners(&trace, gas).map_err(PipelineError::from)?;
    Ok((trace, geometry))
}

fn holder_report(run: &PipelineRun) -> HolderReport {
    let hodograph = run.diagnostics.holder.clone();
    let physical = run.checks.holder_pd.clone();
    let hodo_ok = run.diagnostics.holder_exponent("u_bar").is_some_and(|e| e >= HODOGRAPH_EXPONENT_FLOOR);
    let phys_ok = !physical.is_empty() && physical.iter().all(|f| f.fit.as_ref().is_some_and(|h| h.exponent >= PHYSICAL_EXPONENT_FLOOR));
    HolderReport {
        hodograph_predicted: HODOGRAPH_HOLDER_EXPONENT,
        hodograph_floor: HODOGRAPH_EXPONENT_FLOOR,
        hodograph,
        physical_predicted: PHYSICAL_HOLDER_EXPONENT,
        physical_floor: PHYSICAL_EXPONENT_FLOOR,
        physical,
        passed: hodo_ok && phys_ok,
    }
}

fn solve_lines(run: &PipelineRun, s: &RunSummary) -> Vec<String> {
    let (px, py) = run.patch.corner_p();
    vec![
        format!("levels: {}, nodes: {}, dt: {}, t_min: {}", s.levels, s.nodes, s.dt, s.t_min),
        format!("corner P: ({px:.6}, {py:.6})"),
        format!("corner D: ({:.6}, {:.6})", s.corner_d.0, s.corner_d.1),
        format!("curves: PE {} points, PD {} points, DE {} points", run.curves.pe.len(), run.curves.pd.len(), run.curves.de.len()),
        format!("min jacobian (t > 0): {:e}", run.checks.min_jacobian),
        format!("residual: closed form {:e}, discrete {:e}", s.residual.closed_form_max, s.residual.discrete_max_floor),
    ]
}
