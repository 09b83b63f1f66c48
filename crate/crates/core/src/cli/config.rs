//! Run configuration: TOML sections for gas, boundary, solver, output and
//! verification, with command-line overrides and a content hash.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::boundary::{BoundaryError, BoundarySpec, LinearVarpi, PolynomialWall, VarpiTable, WallCurve, WallTable};
use crate::gas::{GasError, GasParams};
use crate::hodograph::{HodographError, SolverParams, DEFAULT_T_MIN, MIN_LEVELS};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Gas(#[from] GasError),
    #[error(transparent)]
    Solver(#[from] HodographError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GasConfig {
    pub gamma: f64,
    pub bernoulli: f64,
}

impl Default for GasConfig {
    fn default() -> Self {
        Self { gamma: 1.4, bernoulli: 6.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Concave wall `φ′ = 1 − 0.4x − 2x²` on `[0, 0.3]`, `ϖ̂ = 1 − 0.5x`.
    Reference,
    /// Straight wall; fails concavity.
    FlatWall,
    /// Flow already supersonic at `x₁`; fails the sonic start.
    SubsonicStart,
    /// Polynomial wall slope and linear `ϖ̂` from `wall_slope`, `varpi_slope`.
    Polynomial,
    /// Wall `(x, φ′, φ″)` and Mach `(x, ϖ̂)` tables from `wall_table`, `varpi_table`.
    Tables,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundaryConfig {
    pub preset: Preset,
    /// Wall interval; tables default to the common range of both tables.
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    /// Coefficients of `φ′(x) = c₀ + c₁x + …` for the polynomial preset.
    pub wall_slope: Option<Vec<f64>>,
    /// `dϖ̂/dx` of the linear profile `ϖ̂ = 1 + slope·(x − x₁)`.
    pub varpi_slope: Option<f64>,
    /// `φ(x₁)`.
    pub y_offset: f64,
    /// Table paths, relative to the configuration file.
    pub wall_table: Option<PathBuf>,
    pub varpi_table: Option<PathBuf>,
    /// Wall samples used by the checks and the stored trace.
    pub samples: Option<usize>,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self {
            preset: Preset::Reference,
            x1: None,
            x2: None,
            wall_slope: None,
            varpi_slope: None,
            y_offset: 0.0,
            wall_table: None,
            varpi_table: None,
            samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub dt: f64,
    /// Defaults to `max(10⁻³, dt)`.
    pub t_min: Option<f64>,
    pub corrector_iters: usize,
    pub interp_order: u8,
    /// Total number of positive characteristics, including the one through
    /// the sonic point; overrides the spacing derived from `dt`.
    pub n_characteristics: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_min: None, corrector_iters: 2, interp_order: 3, n_characteristics: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: PathBuf::from("out"), formats: vec![Format::Csv, Format::Json] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyCheck {
    /// Residuals of the exact transonic flow; needs no solver run.
    Oracle,
    /// Order of the marching kernel on a manufactured solution.
    Manufactured,
    /// Euler residual of the reconstructed patch.
    Residual,
    /// Hölder fits in the hodograph and physical planes.
    Holder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub checks: Vec<VerifyCheck>,
    /// Halvings of `dt0` in the convergence study.
    pub refinement_levels: usize,
    pub dt0: f64,
    pub oracle_samples: usize,
    pub seed: u64,
    /// Coarse level count of the manufactured problem.
    pub manufactured_levels: usize,
    pub manufactured_t_min: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            checks: vec![VerifyCheck::Oracle, VerifyCheck::Manufactured, VerifyCheck::Residual, VerifyCheck::Holder],
            refinement_levels: 3,
            dt0: 8e-3,
            oracle_samples: 1000,
            seed: 42,
            manufactured_levels: 64,
            manufactured_t_min: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub gas: GasConfig,
    pub boundary: BoundaryConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    pub verify: VerifyConfig,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line values that replace configuration entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub t_min: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub refine: Option<usize>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse { path: path.display().to_string(), message: e.to_string() })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse { path: "<string>".into(), message: e.to_string() })?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(dt) = o.dt {
            self.solver.dt = dt;
        }
        if let Some(t) = o.t_min {
            self.solver.t_min = Some(t);
        }
        if let Some(out) = &o.out {
            // a command-line path is relative to the working directory
            self.output.directory = std::path::absolute(out).map_err(|e| ConfigError::Io { path: out.display().to_string(), message: e.to_string() })?;
        }
        if let Some(seed) = o.seed {
            self.verify.seed = seed;
        }
        if let Some(n) = o.refine {
            self.verify.refinement_levels = n;
        }
        self.validate()
    }

    /// Range checks that do not need the boundary; referenced files must exist.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.gas_params()?;
        let s = &self.solver;
        if !(s.dt > 0.0 && s.dt.is_finite()) {
            return Err(ConfigError::Invalid(format!("solver.dt must be positive, got {}", s.dt)));
        }
        if let Some(n) = s.n_characteristics {
            if n < MIN_LEVELS + 2 {
                return Err(ConfigError::Invalid(format!("solver.n_characteristics must be at least {}, got {n}", MIN_LEVELS + 2)));
            }
        }
        let v = &self.verify;
        if v.refinement_levels < 2 {
            return Err(ConfigError::Invalid(format!("verify.refinement_levels must be at least 2, got {}", v.refinement_levels)));
        }
        if !(v.dt0 > 0.0 && v.dt0.is_finite()) {
            return Err(ConfigError::Invalid(format!("verify.dt0 must be positive, got {}", v.dt0)));
        }
        if v.oracle_samples == 0 {
            return Err(ConfigError::Invalid("verify.oracle_samples must be positive".into()));
        }
        let b = &self.boundary;
        match b.preset {
            Preset::Polynomial => {
                if b.wall_slope.as_ref().is_none_or(Vec::is_empty) || b.varpi_slope.is_none() || b.x2.is_none() {
                    return Err(ConfigError::Invalid("the polynomial preset needs boundary.wall_slope, boundary.varpi_slope and boundary.x2".into()));
                }
            }
            Preset::Tables => {
                for (key, p) in [("wall_table", &b.wall_table), ("varpi_table", &b.varpi_table)] {
                    let p = p.as_ref().ok_or_else(|| ConfigError::Invalid(format!("the tables preset needs boundary.{key}")))?;
                    let full = self.resolve(p);
                    if !full.is_file() {
                        return Err(ConfigError::Io { path: full.display().to_string(), message: "file not found".into() });
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.output.directory)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }

    pub fn check_enabled(&self, c: VerifyCheck) -> bool {
        self.verify.checks.contains(&c)
    }

    pub fn gas_params(&self) -> Result<GasParams, ConfigError> {
        Ok(GasParams::new(self.gas.gamma, self.gas.bernoulli)?)
    }

    pub fn solver_params(&self) -> Result<SolverParams, ConfigError> {
        let s = &self.solver;
        let mut p = SolverParams::new(s.dt).with_t_min(s.t_min.unwrap_or(DEFAULT_T_MIN.max(s.dt)));
        p.corrector_iters = s.corrector_iters;
        p.interp_order = s.interp_order;
        if let Some(n) = s.n_characteristics {
            // one characteristic per level, the sonic level included
            p = p.with_levels(n - 2);
        }
        Ok(p)
    }

    pub fn boundary_spec(&self) -> Result<BoundarySpec, ConfigError> {
        let b = &self.boundary;
        let spec = match b.preset {
            Preset::Reference => BoundarySpec::reference(),
            Preset::FlatWall => BoundarySpec::flat_wall(),
            Preset::SubsonicStart => BoundarySpec::subsonic_start(),
            Preset::Polynomial => {
                let x1 = b.x1.unwrap_or(0.0);
                let x2 = b.x2.expect("validated");
                let mut wall = PolynomialWall::new(b.wall_slope.clone().expect("validated"));
                // place φ(x₁) at the configured offset
                wall.y_offset = b.y_offset - wall.phi(x1);
                let varpi = LinearVarpi { x1, slope: b.varpi_slope.expect("validated") };
                BoundarySpec::new(x1, x2, Arc::new(wall), Arc::new(varpi))?
            }
            Preset::Tables => {
                let wall = WallTable::from_path(&self.resolve(b.wall_table.as_ref().expect("validated")), b.y_offset)?;
                let varpi = VarpiTable::from_path(&self.resolve(b.varpi_table.as_ref().expect("validated")))?;
                let (w_lo, w_hi) = wall.x_range();
                let (v_lo, v_hi) = varpi.x_range();
                let x1 = b.x1.unwrap_or(w_lo.max(v_lo));
                let x2 = b.x2.unwrap_or(w_hi.min(v_hi));
                if x1 < w_lo.max(v_lo) || x2 > w_hi.min(v_hi) {
                    return Err(ConfigError::Invalid(format!("wall interval [{x1}, {x2}] exceeds the table ranges")));
                }
                BoundarySpec::new(x1, x2, Arc::new(wall), Arc::new(varpi))?
            }
        };
        Ok(match b.samples {
            Some(n) => spec.with_samples(n)?,
            None => spec,
        })
    }

    /// SHA-256 of the effective configuration and every referenced table.
    /// The output directory is left out: it does not affect any number.
    pub fn hash(&self) -> String {
        let mut content = self.clone();
        content.output.directory = PathBuf::new();
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&content).expect("configuration serializes"));
        for p in [&self.boundary.wall_table, &self.boundary.varpi_table].into_iter().flatten() {
            if let Ok(bytes) = std::fs::read(self.resolve(p)) {
                h.update(&bytes);
            }
        }
        hex::encode(h.finalize())
    }
}
