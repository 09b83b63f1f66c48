//! Scalar quadrature and root bracketing shared by the gas algebra and the
//! boundary trace.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("adaptive Simpson did not reach tolerance {tol:e} on [{a}, {b}] (depth limit {depth})")]
    QuadratureNotConverged { a: f64, b: f64, tol: f64, depth: u32 },
    #[error("root not bracketed on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    NotBracketed { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("non-finite function value at {x}")]
    NonFinite { x: f64 },
}

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Uses the classical Richardson-corrected recursion; the tolerance is split
/// evenly between halves at each level.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut converged = true;
    let value = simpson_step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut converged);
    if !value.is_finite() {
        return Err(NumericsError::NonFinite { x: m });
    }
    if converged {
        Ok(value)
    } else {
        Err(NumericsError::QuadratureNotConverged { a, b, tol, depth: MAX_DEPTH })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    converged: &mut bool,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *converged = false;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged)
}

/// Bracketed root of a continuous function by the Illinois variant of
/// regula falsi, falling back to bisection when the secant stalls.
///
/// Terminates when the bracket is narrower than `xtol` or `f` vanishes.
pub fn find_root<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(NumericsError::NonFinite { x: a });
    }
    if !fb.is_finite() {
        return Err(NumericsError::NonFinite { x: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NotBracketed { a, b, fa, fb });
    }
    let mut side = 0i8;
    for iter in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        // every fourth step is a plain bisection so the bracket always shrinks
        let c = if iter % 4 == 3 {
            0.5 * (a + b)
        } else {
            let c = (a * fb - b * fa) / (fb - fa);
            if c.is_finite() && c > a.min(b) && c < a.max(b) {
                c
            } else {
                0.5 * (a + b)
            }
        };
        let fc = f(c);
        if !fc.is_finite() {
            return Err(NumericsError::NonFinite { x: c });
        }
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Nonuniform three-point derivative at `xs[i]`, one-sided at the ends.
/// Falls back to a two-point secant for two samples.
pub fn three_point_derivative(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let n = xs.len();
    debug_assert!(n >= 2 && ys.len() == n);
    if n == 2 {
        return (ys[1] - ys[0]) / (xs[1] - xs[0]);
    }
    let (j0, j1, j2) = if i == 0 {
        (0, 1, 2)
    } else if i == n - 1 {
        (n - 3, n - 2, n - 1)
    } else {
        (i - 1, i, i + 1)
    };
    let (x0, x1, x2) = (xs[j0], xs[j1], xs[j2]);
    let (y0, y1, y2) = (ys[j0], ys[j1], ys[j2]);
    let x = xs[i];
    // derivative of the Lagrange parabola through the three points
    let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    y0 * l0 + y1 * l1 + y2 * l2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_and_transcendental() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn simpson_reports_non_convergence() {
        let r = adaptive_simpson(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-14);
        assert!(r.is_err());
    }

    #[test]
    fn root_of_cubic() {
        let r = find_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
        assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn three_point_exact_for_parabola() {
        let xs = [0.0, 0.1, 0.35, 0.4, 0.9];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        for i in 0..xs.len() {
            let d = three_point_derivative(&xs, &ys, i);
            assert!((d - (6.0 * xs[i] - 1.0)).abs() < 1e-12);
        }
    }
}
