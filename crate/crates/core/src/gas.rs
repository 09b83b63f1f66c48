//! Gas-dynamic state algebra for steady isentropic irrotational flow.
//!
//! States are carried either as velocities `(u, v)` with sound speed `c`, or
//! in angle form: flow angle `theta`, Mach angle `omega` and `varpi = sin(omega)`.
//! The hodograph coefficients `F`, `lambda` and the characteristic shift
//! `s(t) = ∫₀ᵗ lambda` live here as well, since every later stage needs them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{adaptive_simpson, NumericsError};

/// Absolute tolerance for the characteristic shift quadrature.
pub const SHIFT_QUAD_TOL: f64 = 1e-12;

/// Relative distance from `q = c` treated as exactly sonic.
const SONIC_SNAP: f64 = 1e-14;

/// `|cos(angle)|` below which a characteristic counts as vertical.
const VERTICAL_COS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GasError {
    #[error("invalid gas parameters: {0}")]
    InvalidParams(String),
    #[error("subsonic state: q = {q} < c = {c}")]
    Subsonic { q: f64, c: f64 },
    #[error("non-physical state: q² = {q2} ≥ B₀ = {bernoulli}")]
    NonPhysical { q2: f64, bernoulli: f64 },
    #[error("{quantity} = {value} outside its domain {domain}")]
    Domain { quantity: &'static str, value: f64, domain: &'static str },
    #[error("characteristic shift quadrature failed: {0}")]
    Quadrature(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams {
    pub gamma: f64,
    pub kappa: f64,
    pub bernoulli: f64,
    pub entropy_const: f64,
}

impl GasParams {
    pub fn new(gamma: f64, bernoulli: f64) -> Result<Self, GasError> {
        Self::with_entropy_const(gamma, bernoulli, 1.0)
    }

    pub fn with_entropy_const(gamma: f64, bernoulli: f64, entropy_const: f64) -> Result<Self, GasError> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(GasError::InvalidParams(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(bernoulli > 0.0 && bernoulli.is_finite()) {
            return Err(GasError::InvalidParams(format!("Bernoulli constant must be positive, got {bernoulli}")));
        }
        if !(entropy_const > 0.0 && entropy_const.is_finite()) {
            return Err(GasError::InvalidParams(format!("entropy constant must be positive, got {entropy_const}")));
        }
        Ok(Self { gamma, kappa: (gamma - 1.0) / 2.0, bernoulli, entropy_const })
    }

    /// Diatomic gas with `B₀ = 6`, so the sonic speed is exactly 1.
    pub fn air() -> Self {
        Self::new(1.4, 6.0).expect("valid constants")
    }

    /// Density from `c² = A γ ρ^{γ-1}`.
    pub fn density(&self, c: f64) -> f64 {
        (c * c / (self.entropy_const * self.gamma)).powf(1.0 / (self.gamma - 1.0))
    }

    /// `F(t) = (1 - t²)(κ + 1 - t²)` without domain checking.
    #[inline]
    pub fn f(&self, t: f64) -> f64 {
        let t2 = t * t;
        (1.0 - t2) * (self.kappa + 1.0 - t2)
    }

    /// `λ(t) = √(1 - t²) t² / F(t)` without domain checking.
    #[inline]
    pub fn lambda(&self, t: f64) -> f64 {
        let t2 = t * t;
        t2 / ((1.0 - t2).sqrt() * (self.kappa + 1.0 - t2))
    }

    /// `∫_a^b λ`, either order of limits.
    pub fn shift_between(&self, a: f64, b: f64) -> Result<f64, GasError> {
        check_t(a)?;
        check_t(b)?;
        Ok(adaptive_simpson(|t| self.lambda(t), a, b, SHIFT_QUAD_TOL)?)
    }
}

fn check_t(t: f64) -> Result<(), GasError> {
    if (0.0..1.0).contains(&t) {
        Ok(())
    } else {
        Err(GasError::Domain { quantity: "t", value: t, domain: "[0, 1)" })
    }
}

fn check_varpi(varpi: f64) -> Result<(), GasError> {
    if varpi > 0.0 && varpi <= 1.0 {
        Ok(())
    } else {
        Err(GasError::Domain { quantity: "varpi", value: varpi, domain: "(0, 1]" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleState {
    pub theta: f64,
    pub omega: f64,
    pub varpi: f64,
    pub mach: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
}

impl AngleState {
    pub fn new(theta: f64, varpi: f64, gas: &GasParams) -> Result<Self, GasError> {
        check_varpi(varpi)?;
        let omega = varpi.asin();
        Ok(Self {
            theta,
            omega,
            varpi,
            mach: 1.0 / varpi,
            alpha: theta + omega,
            beta: theta - omega,
            xi: xi_of_varpi(varpi, gas)?,
        })
    }

    pub fn is_sonic(&self) -> bool {
        self.varpi == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityState {
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub q: f64,
    pub rho: f64,
}

impl VelocityState {
    /// Relative Bernoulli defect `|q² + c²/κ - B₀| / B₀`.
    pub fn bernoulli_defect(&self, gas: &GasParams) -> f64 {
        (self.q * self.q + self.c * self.c / gas.kappa - gas.bernoulli).abs() / gas.bernoulli
    }
}

pub fn angles_from_velocity(u: f64, v: f64, gas: &GasParams) -> Result<AngleState, GasError> {
    let q2 = u * u + v * v;
    if !(q2 < gas.bernoulli) {
        return Err(GasError::NonPhysical { q2, bernoulli: gas.bernoulli });
    }
    let q = q2.sqrt();
    let c = (gas.kappa * (gas.bernoulli - q2)).sqrt();
    // states within rounding of q == c are snapped to exactly sonic
    let ratio = c / q;
    if ratio > 1.0 + SONIC_SNAP {
        return Err(GasError::Subsonic { q, c });
    }
    let varpi = if ratio > 1.0 - SONIC_SNAP { 1.0 } else { ratio };
    AngleState::new(v.atan2(u), varpi, gas)
}

pub fn velocity_from_angles(theta: f64, varpi: f64, gas: &GasParams) -> Result<VelocityState, GasError> {
    check_varpi(varpi)?;
    let v2 = varpi * varpi;
    let c = (gas.kappa * gas.bernoulli * v2 / (gas.kappa + v2)).sqrt();
    let q = c / varpi;
    Ok(VelocityState { u: q * theta.cos(), v: q * theta.sin(), c, q, rho: gas.density(c) })
}

/// Slope of a characteristic direction. Vertical directions are tagged
/// instead of producing `±∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Vertical,
}

impl Slope {
    pub fn from_angle(angle: f64) -> Self {
        let c = angle.cos();
        if c.abs() < VERTICAL_COS_TOL {
            Slope::Vertical
        } else {
            Slope::Finite(angle.sin() / c)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Slope::Finite(v) => Some(v),
            Slope::Vertical => None,
        }
    }
}

/// `(Λ+, Λ-) = (tan(θ+ω), tan(θ-ω))`.
pub fn eigenvalues(state: &AngleState) -> (Slope, Slope) {
    (Slope::from_angle(state.alpha), Slope::from_angle(state.beta))
}

/// Quotient form `(uv ± c√(q²-c²)) / (u² - c²)` of the same eigenvalues.
pub fn eigenvalues_from_velocity(u: f64, v: f64, c: f64) -> (Slope, Slope) {
    let q2 = u * u + v * v;
    let root = c * (q2 - c * c).max(0.0).sqrt();
    let den = u * u - c * c;
    let scale = u * u + c * c;
    if den.abs() < VERTICAL_COS_TOL * scale {
        return (Slope::Vertical, Slope::Vertical);
    }
    (Slope::Finite((u * v + root) / den), Slope::Finite((u * v - root) / den))
}

pub fn coefficient_f(t: f64, gas: &GasParams) -> Result<f64, GasError> {
    check_t(t)?;
    Ok(gas.f(t))
}

pub fn char_slope_lambda(t: f64, gas: &GasParams) -> Result<f64, GasError> {
    check_t(t)?;
    Ok(gas.lambda(t))
}

/// `s(t) = ∫₀ᵗ λ(τ) dτ` by adaptive Simpson.
pub fn char_shift_s(t: f64, gas: &GasParams) -> Result<f64, GasError> {
    gas.shift_between(0.0, t)
}

/// `Ξ = ln(ϖ² / (κ + ϖ²)) / (4κ)`.
pub fn xi_of_varpi(varpi: f64, gas: &GasParams) -> Result<f64, GasError> {
    check_varpi(varpi)?;
    let v2 = varpi * varpi;
    Ok((v2 / (gas.kappa + v2)).ln() / (4.0 * gas.kappa))
}

/// `dΞ/dϖ = 1 / (2ϖ(κ + ϖ²))`.
pub fn dxi_dvarpi(varpi: f64, gas: &GasParams) -> f64 {
    1.0 / (2.0 * varpi * (gas.kappa + varpi * varpi))
}
