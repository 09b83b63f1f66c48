//! Wall streamline data: admissibility checks, the derived trace of boundary
//! values for `(U, V)`, and its image in the partial hodograph plane.

mod admissibility;
mod profiles;
pub(crate) mod trace;

use std::sync::Arc;

use thiserror::Error;

use crate::gas::GasError;
use crate::numerics::NumericsError;

pub use admissibility::{check_admissibility, AdmissibilityFailure, AdmissibilityReport, Check, Margins};
pub use profiles::{LinearMach, LinearVarpi, PolynomialWall, VarpiProfile, VarpiTable, WallCurve, WallTable};
pub use trace::{compute_trace, region_corners, BoundaryTrace, RegionGeometry, TraceSample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("invalid boundary specification: {0}")]
    InvalidSpec(String),
    #[error("{what}, line {line}: {message}")]
    Table { what: &'static str, line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{quantity} is not strictly increasing along the wall near x = {x}")]
    NonMonotone { quantity: &'static str, x: f64 },
    #[error("characteristic from E' exits through the P' side: r* = {r_star} ≤ 0")]
    DegenerateRegion { r_star: f64 },
    #[error("{quantity} = {value} outside the boundary range [{lo}, {hi}]")]
    OutOfRange { quantity: &'static str, value: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Gas(#[from] GasError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The wall arc `PE` on `[x₁, x₂]` with its Mach-angle distribution.
#[derive(Debug, Clone)]
pub struct BoundarySpec {
    pub x1: f64,
    pub x2: f64,
    pub wall: Arc<dyn WallCurve>,
    pub varpi: Arc<dyn VarpiProfile>,
    /// Number of uniformly spaced samples for checks and the stored trace.
    pub n_samples: usize,
}

const DEFAULT_SAMPLES: usize = 257;

impl BoundarySpec {
    pub fn new(x1: f64, x2: f64, wall: Arc<dyn WallCurve>, varpi: Arc<dyn VarpiProfile>) -> Result<Self, BoundaryError> {
        if !(x1.is_finite() && x2.is_finite() && x2 > x1) {
            return Err(BoundaryError::InvalidSpec(format!("need x₁ < x₂, got [{x1}, {x2}]")));
        }
        Ok(Self { x1, x2, wall, varpi, n_samples: DEFAULT_SAMPLES })
    }

    pub fn with_samples(mut self, n_samples: usize) -> Result<Self, BoundaryError> {
        if n_samples < 3 {
            return Err(BoundaryError::InvalidSpec(format!("need at least 3 boundary samples, got {n_samples}")));
        }
        self.n_samples = n_samples;
        Ok(self)
    }

    /// Concave increasing wall `φ′ = 1 − 0.4x − 2x²` on `[0, 0.3]` with
    /// `ϖ̂ = 1 − 0.5x`; sonic at the origin with `φ″(0) = −0.4`.
    pub fn reference() -> Self {
        Self::new(
            0.0,
            0.3,
            Arc::new(PolynomialWall::new(vec![1.0, -0.4, -2.0])),
            Arc::new(LinearVarpi { x1: 0.0, slope: -0.5 }),
        )
        .expect("valid interval")
    }

    /// Straight wall of slope 1: not concave, so it must be rejected.
    pub fn flat_wall() -> Self {
        Self::new(0.0, 0.3, Arc::new(PolynomialWall::new(vec![1.0])), Arc::new(LinearVarpi { x1: 0.0, slope: -0.5 }))
            .expect("valid interval")
    }

    /// Reference wall with a flow that is already supersonic at `x₁`.
    pub fn subsonic_start() -> Self {
        #[derive(Debug)]
        struct Shifted;
        impl VarpiProfile for Shifted {
            fn varpi(&self, x: f64) -> f64 {
                0.9 - 0.5 * x
            }
            fn dvarpi(&self, _x: f64) -> f64 {
                -0.5
            }
        }
        Self::new(0.0, 0.3, Arc::new(PolynomialWall::new(vec![1.0, -0.4, -2.0])), Arc::new(Shifted))
            .expect("valid interval")
    }

    /// Uniform sample abscissae, endpoints included exactly.
    pub fn sample_xs(&self) -> Vec<f64> {
        let n = self.n_samples;
        (0..n)
            .map(|i| match i {
                0 => self.x1,
                _ if i == n - 1 => self.x2,
                _ => self.x1 + (self.x2 - self.x1) * i as f64 / (n - 1) as f64,
            })
            .collect()
    }
}
