//! Boundary values of `(U, V)` along the wall and their hodograph image.

use serde::Serialize;

use super::{BoundaryError, BoundarySpec};
use crate::gas::{char_shift_s, GasError, GasParams};
use crate::interp::{InterpKind, Interpolant};
use crate::numerics::find_root;

/// Everything the solver needs at one wall point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub x: f64,
    pub y: f64,
    pub theta_hat: f64,
    pub varpi_hat: f64,
    /// `t = cos ω̂ = √(1 − ϖ̂²)`.
    pub t: f64,
    /// `r = θ̂₁ − θ̂`.
    pub r: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub d_hat: f64,
    /// `ā = 1/â`, the boundary value of `Ū`.
    pub a_bar: f64,
    /// `b̄ = −1/b̂`, the boundary value of `V̄`.
    pub b_bar: f64,
    /// `2d̂/(âb̂)`, the boundary value of `W̄`.
    pub w_bar_bnd: f64,
}

fn evaluate(spec: &BoundarySpec, gas: &GasParams, theta_hat_1: f64, x: f64) -> Result<TraceSample, GasError> {
    let dphi = spec.wall.dphi(x);
    let d2phi = spec.wall.d2phi(x);
    let varpi = spec.varpi.varpi(x);
    let dvarpi = spec.varpi.dvarpi(x);
    if !(varpi > 0.0 && varpi <= 1.0) {
        return Err(GasError::Domain { quantity: "varpi_hat", value: varpi, domain: "(0, 1]" });
    }
    let theta_hat = dphi.atan();
    let t = (1.0 - varpi * varpi).max(0.0).sqrt();
    let cos_theta = theta_hat.cos();
    let mach_term = t / (gas.kappa + varpi * varpi) * dvarpi;
    let turn_term = d2phi / (1.0 + dphi * dphi);
    let a_hat = cos_theta / (2.0 * varpi) * (mach_term - turn_term);
    let b_hat = cos_theta / (2.0 * varpi) * (mach_term + turn_term);
    let d_hat = cos_theta * dvarpi / (2.0 * varpi * (gas.kappa + varpi * varpi));
    Ok(TraceSample {
        x,
        y: spec.wall.phi(x),
        theta_hat,
        varpi_hat: varpi,
        t,
        r: theta_hat_1 - theta_hat,
        a_hat,
        b_hat,
        d_hat,
        a_bar: 1.0 / a_hat,
        b_bar: -1.0 / b_hat,
        w_bar_bnd: 2.0 * d_hat / (a_hat * b_hat),
    })
}

/// Sampled boundary trace. Point queries are answered from the underlying
/// boundary functions, so lookups are exact rather than interpolated.
#[derive(Debug, Clone)]
pub struct BoundaryTrace {
    spec: BoundarySpec,
    gas: GasParams,
    theta_hat_1: f64,
    samples: Vec<TraceSample>,
    x_of_r: Interpolant,
}

/// Builds the trace on the boundary's uniform samples.
pub fn compute_trace(spec: &BoundarySpec, gas: &GasParams) -> Result<BoundaryTrace, BoundaryError> {
    let start = spec.varpi.varpi(spec.x1);
    if start != 1.0 {
        return Err(BoundaryError::InvalidSpec(format!("flow must be sonic at x₁, found ϖ̂(x₁) = {start}")));
    }
    let theta_hat_1 = spec.wall.dphi(spec.x1).atan();
    let samples = spec
        .sample_xs()
        .into_iter()
        .map(|x| evaluate(spec, gas, theta_hat_1, x))
        .collect::<Result<Vec<_>, _>>()?;
    for w in samples.windows(2) {
        if !(w[1].t > w[0].t) {
            return Err(BoundaryError::NonMonotone { quantity: "t", x: w[1].x });
        }
        if !(w[1].r > w[0].r) {
            return Err(BoundaryError::NonMonotone { quantity: "r", x: w[1].x });
        }
    }
    let x_of_r = Interpolant::new(
        samples.iter().map(|s| s.r).collect(),
        samples.iter().map(|s| s.x).collect(),
        InterpKind::Monotone,
    );
    Ok(BoundaryTrace { spec: spec.clone(), gas: *gas, theta_hat_1, samples, x_of_r })
}

impl BoundaryTrace {
    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn spec(&self) -> &BoundarySpec {
        &self.spec
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn theta_hat_1(&self) -> f64 {
        self.theta_hat_1
    }

    pub fn start(&self) -> &TraceSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &TraceSample {
        &self.samples[self.samples.len() - 1]
    }

    /// `t₀ = t(x₂)`.
    pub fn t0(&self) -> f64 {
        self.end().t
    }

    /// `r₀ = r(x₂)`.
    pub fn r0(&self) -> f64 {
        self.end().r
    }

    /// Exact boundary values at abscissa `x ∈ [x₁, x₂]`.
    pub fn point_at_x(&self, x: f64) -> Result<TraceSample, BoundaryError> {
        let (x1, x2) = (self.spec.x1, self.spec.x2);
        if !(x >= x1 && x <= x2) {
            return Err(BoundaryError::OutOfRange { quantity: "x", value: x, lo: x1, hi: x2 });
        }
        Ok(evaluate(&self.spec, &self.gas, self.theta_hat_1, x)?)
    }

    fn xtol(&self) -> f64 {
        4.0 * f64::EPSILON * self.spec.x1.abs().max(self.spec.x2.abs()).max(self.spec.x2 - self.spec.x1)
    }

    fn t_of_x(&self, x: f64) -> f64 {
        let v = self.spec.varpi.varpi(x);
        (1.0 - v * v).max(0.0).sqrt()
    }

    fn r_of_x(&self, x: f64) -> f64 {
        self.theta_hat_1 - self.spec.wall.dphi(x).atan()
    }

    /// Wall abscissa where `t(x) = t`.
    pub fn x_at_t(&self, t: f64) -> Result<f64, BoundaryError> {
        let (t_lo, t_hi) = (self.start().t, self.t0());
        if t == t_lo {
            return Ok(self.spec.x1);
        }
        if t == t_hi {
            return Ok(self.spec.x2);
        }
        if !(t > t_lo && t < t_hi) {
            return Err(BoundaryError::OutOfRange { quantity: "t", value: t, lo: t_lo, hi: t_hi });
        }
        let i = self.samples.partition_point(|s| s.t <= t);
        let (a, b) = (self.samples[i - 1].x, self.samples[i].x);
        Ok(find_root(|x| self.t_of_x(x) - t, a, b, self.xtol())?)
    }

    /// Wall abscissa `x̂(r)`, solved exactly from `r(x) = r`.
    pub fn x_at_r(&self, r: f64) -> Result<f64, BoundaryError> {
        let (r_lo, r_hi) = (self.start().r, self.r0());
        if !(r >= r_lo && r <= r_hi) {
            return Err(BoundaryError::OutOfRange { quantity: "r", value: r, lo: r_lo, hi: r_hi });
        }
        let i = self.samples.partition_point(|s| s.r < r);
        if self.samples[i].r == r {
            return Ok(self.samples[i].x);
        }
        let (a, b) = (self.samples[i - 1].x, self.samples[i].x);
        Ok(find_root(|x| self.r_of_x(x) - r, a, b, self.xtol())?)
    }

    /// Monotone-cubic interpolant of the sampled inverse map `x̂(r)`.
    pub fn x_hat_interpolated(&self, r: f64) -> f64 {
        self.x_of_r.eval(r)
    }

    /// Boundary values at hodograph abscissa `r ∈ [0, r₀]`; reproduces the
    /// stored samples exactly.
    pub fn boundary_lookup(&self, r: f64) -> Result<TraceSample, BoundaryError> {
        let x = self.x_at_r(r)?;
        if let Ok(i) = self.samples.binary_search_by(|s| s.x.total_cmp(&x)) {
            return Ok(self.samples[i]);
        }
        self.point_at_x(x)
    }

    /// Slope `dr̃/dt` of the boundary image at `x` (infinite slope of `t` at
    /// the sonic point gives `0` there).
    pub fn dr_dt(&self, x: f64) -> f64 {
        let dphi = self.spec.wall.dphi(x);
        let dr_dx = -self.spec.wall.d2phi(x) / (1.0 + dphi * dphi);
        let v = self.spec.varpi.varpi(x);
        let t = (1.0 - v * v).max(0.0).sqrt();
        if t == 0.0 {
            return 0.0;
        }
        let dt_dx = -v * self.spec.varpi.dvarpi(x) / t;
        dr_dx / dt_dx
    }

    /// Wall point where the negative characteristic `r + s(t) = invariant`
    /// meets the boundary image, searched for `t ∈ [t_lo, t_hi]`.
    pub fn minus_characteristic_hit(&self, invariant: f64, t_lo: f64, t_hi: f64) -> Result<TraceSample, BoundaryError> {
        let xa = self.x_at_t(t_lo)?;
        let xb = self.x_at_t(t_hi)?;
        let gas = self.gas;
        let g = |x: f64| {
            let t = self.t_of_x(x);
            self.r_of_x(x) + char_shift_s(t, &gas).unwrap_or(f64::NAN) - invariant
        };
        let x = find_root(g, xa, xb, self.xtol())?;
        self.point_at_x(x)
    }

    /// `max |â + b̂ − 2t·d̂|` over the samples.
    pub fn identity_defect(&self) -> f64 {
        self.samples.iter().map(|s| (s.a_hat + s.b_hat - 2.0 * s.t * s.d_hat).abs()).fold(0.0, f64::max)
    }

    /// Observed `(m̂₀, M̂₀)`: extrema of `â`, `−b̂`, `−d̂` over the samples.
    pub fn hat_bounds(&self) -> (f64, f64) {
        let vals = self.samples.iter().flat_map(|s| [s.a_hat, -s.b_hat, -s.d_hat]);
        extrema(vals)
    }

    /// Observed `(m̄₀, M̄₀)`: extrema of `ā`, `b̄` over the samples.
    pub fn bar_bounds(&self) -> (f64, f64) {
        extrema(self.samples.iter().flat_map(|s| [s.a_bar, s.b_bar]))
    }
}

pub(crate) fn extrema(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Corners of the hodograph region `P′E′D′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionGeometry {
    pub t0: f64,
    pub r0: f64,
    /// `s(t₀)`.
    pub s_t0: f64,
    /// `r* = r₀ − s(t₀)`, the corner `D′ = (0, r*)`.
    pub r_star: f64,
}

impl RegionGeometry {
    /// `ř(t) = r₀ − (s(t₀) − s(t))`, the positive characteristic through `E′`.
    pub fn r_check(&self, t: f64, gas: &GasParams) -> Result<f64, GasError> {
        Ok(self.r0 - (self.s_t0 - char_shift_s(t, gas)?))
    }
}

pub fn region_corners(trace: &BoundaryTrace, gas: &GasParams) -> Result<RegionGeometry, BoundaryError> {
    let t0 = trace.t0();
    let r0 = trace.r0();
    let s_t0 = char_shift_s(t0, gas)?;
    let r_star = r0 - s_t0;
    if !(r_star > 0.0) {
        return Err(BoundaryError::DegenerateRegion { r_star });
    }
    Ok(RegionGeometry { t0, r0, s_t0, r_star })
}
