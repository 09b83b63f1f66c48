//! One-dimensional interpolation on strictly increasing abscissae.
//!
//! [`Interpolant`] is a cubic Hermite curve whose node slopes come from the
//! not-a-knot C² spline, optionally passed through a Hyman monotonicity
//! filter. On smooth monotone data the filter is inactive, so the curve keeps
//! fourth-order accuracy while never overshooting monotone stretches.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterpKind {
    Linear,
    /// Not-a-knot spline slopes, no limiting.
    Spline,
    /// Not-a-knot spline slopes with the Hyman filter applied.
    Monotone,
}

#[derive(Debug, Clone)]
pub struct Interpolant {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Option<Vec<f64>>,
}

impl Interpolant {
    /// Builds an interpolant. Fewer than four nodes always falls back to
    /// linear interpolation.
    ///
    /// Panics if `xs` and `ys` differ in length or hold fewer than two points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, kind: InterpKind) -> Self {
        assert_eq!(xs.len(), ys.len(), "abscissa/ordinate length mismatch");
        assert!(xs.len() >= 2, "need at least two nodes");
        debug_assert!(xs.windows(2).all(|w| w[1] > w[0]), "abscissae must increase");
        let slopes = match kind {
            InterpKind::Linear => None,
            _ if xs.len() < 4 => None,
            InterpKind::Spline => Some(not_a_knot_slopes(&xs, &ys)),
            InterpKind::Monotone => {
                let mut d = not_a_knot_slopes(&xs, &ys);
                hyman_filter(&xs, &ys, &mut d);
                Some(d)
            }
        };
        Self { xs, ys, slopes }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&v| v <= x);
        i.clamp(1, n - 1) - 1
    }

    /// Value at `x`; outside the node range the end segment is extended.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let h = x1 - x0;
        match &self.slopes {
            None => y0 + (y1 - y0) * (x - x0) / h,
            Some(d) => {
                let s = (x - x0) / h;
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * y0 + h10 * h * d[i] + h01 * y1 + h11 * h * d[i + 1]
            }
        }
    }

    /// First derivative at `x`.
    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let h = x1 - x0;
        match &self.slopes {
            None => (y1 - y0) / h,
            Some(d) => {
                let s = (x - x0) / h;
                let s2 = s * s;
                let dh00 = (6.0 * s2 - 6.0 * s) / h;
                let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
                let dh01 = (-6.0 * s2 + 6.0 * s) / h;
                let dh11 = 3.0 * s2 - 2.0 * s;
                dh00 * y0 + dh10 * d[i] + dh01 * y1 + dh11 * d[i + 1]
            }
        }
    }
}

/// Node slopes of the not-a-knot cubic spline (requires at least four nodes).
pub fn not_a_knot_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 4);
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    diag[0] = h[1];
    sup[0] = h[0] + h[1];
    rhs[0] = ((h[0] + 2.0 * sup[0]) * h[1] * del[0] + h[0] * h[0] * del[1]) / sup[0];
    for i in 1..n - 1 {
        sub[i] = h[i];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        sup[i] = h[i - 1];
        rhs[i] = 3.0 * (h[i] * del[i - 1] + h[i - 1] * del[i]);
    }
    let a = h[n - 3];
    let b = h[n - 2];
    sub[n - 1] = a + b;
    diag[n - 1] = a;
    rhs[n - 1] = (b * b * del[n - 3] + (2.0 * (a + b) + b) * a * del[n - 2]) / (a + b);

    solve_tridiagonal(&sub, &diag, &sup, &mut rhs);
    rhs
}

/// Thomas algorithm; `rhs` is overwritten by the solution.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
}

/// Hyman's filter: on locally monotone data the slope keeps the data's sign
/// and is capped at three times the smaller adjacent secant.
fn hyman_filter(xs: &[f64], ys: &[f64], d: &mut [f64]) {
    let n = xs.len();
    let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
    let clamp = |d: f64, s: f64, cap: f64| -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let sd = s.signum();
        sd * (sd * d).clamp(0.0, cap)
    };
    d[0] = clamp(d[0], del[0], 3.0 * del[0].abs());
    d[n - 1] = clamp(d[n - 1], del[n - 2], 3.0 * del[n - 2].abs());
    for i in 1..n - 1 {
        if del[i - 1] * del[i] > 0.0 {
            d[i] = clamp(d[i], del[i], 3.0 * del[i - 1].abs().min(del[i].abs()));
        } else if del[i - 1] == 0.0 || del[i] == 0.0 {
            d[i] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize, a: f64, b: f64) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * (i as f64 / (n - 1) as f64).powf(1.3)).collect()
    }

    #[test]
    fn spline_reproduces_cubics() {
        let xs = grid(9, -1.0, 2.0);
        let p = |x: f64| 0.5 * x * x * x - x * x + 3.0;
        let ys: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
        let f = Interpolant::new(xs, ys, InterpKind::Spline);
        for k in 0..50 {
            let x = -1.0 + 3.0 * k as f64 / 49.0;
            assert!((f.eval(x) - p(x)).abs() < 1e-12, "x = {x}");
            assert!((f.derivative(x) - (1.5 * x * x - 2.0 * x)).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_at_nodes_and_linear_fallback() {
        let xs = vec![0.0, 1.0, 3.0];
        let ys = vec![1.0, 2.0, 0.0];
        let f = Interpolant::new(xs.clone(), ys.clone(), InterpKind::Monotone);
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(f.eval(*x), *y);
        }
        assert!((f.eval(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fourth_order_on_smooth_data() {
        let err = |n: usize| {
            let xs = grid(n, 0.0, 1.0);
            let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin() + x).collect();
            let f = Interpolant::new(xs.clone(), ys, InterpKind::Monotone);
            xs.windows(2)
                .map(|w| {
                    let m = 0.5 * (w[0] + w[1]);
                    (f.eval(m) - ((2.0 * m).sin() + m)).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_curve(
            steps in prop::collection::vec((0.01f64..1.0, 0.0f64..1.0), 4..20)
        ) {
            let mut xs = vec![0.0];
            let mut ys = vec![0.0];
            for (dx, dy) in &steps {
                xs.push(xs.last().unwrap() + dx);
                ys.push(ys.last().unwrap() + dy);
            }
            let f = Interpolant::new(xs.clone(), ys, InterpKind::Monotone);
            let a = xs[0];
            let b = *xs.last().unwrap();
            let mut prev = f.eval(a);
            for k in 1..=400 {
                let v = f.eval(a + (b - a) * k as f64 / 400.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
