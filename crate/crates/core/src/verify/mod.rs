//! Independent oracles and studies: exact-flow residual checks,
//! manufactured-solution order verification, convergence studies and
//! Hölder-exponent regression.

mod convergence;
mod holder;
mod manufactured;
mod oracle;

pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable, OrderEntry};
pub use holder::{holder_fit, HolderError, HolderFit, MIN_SAMPLES};
pub use manufactured::{manufactured_problem, ManufacturedForcing, ManufacturedReport};
pub use oracle::{analytic_oracle_residuals, ringleb_sample, sonic_speed, OracleField, OracleReport, OracleSample};

/// The exact flow must satisfy its own equations to this relative level.
pub const ORACLE_SELF_TOL: f64 = 1e-10;
/// Characteristic and angle-variable forms evaluated on the exact flow.
pub const ORACLE_RESIDUAL_TOL: f64 = 1e-8;
/// Accepted error ratio between `n` and `2n` levels (order 2 ± 0.5).
pub const MANUFACTURED_RATIO_RANGE: (f64, f64) = (3.5, 4.5);
/// Closed-form Euler residual of the reconstructed patch.
pub const CLOSED_FORM_RESIDUAL_TOL: f64 = 1e-10;
/// Lowest accepted fitted exponent of `Ū(0, ·)` (theory `1/3`).
pub const HODOGRAPH_EXPONENT_FLOOR: f64 = 0.30;
/// Lowest accepted fitted exponent of the gradient traces across `PD`
/// (theory `1/6`).
pub const PHYSICAL_EXPONENT_FLOOR: f64 = 0.11;
