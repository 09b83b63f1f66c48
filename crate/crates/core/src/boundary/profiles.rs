//! Wall curves `y = φ(x)` and Mach-angle profiles `ϖ̂(x)` along the wall.
//!
//! Closed-form presets and sampled tables share the two traits below, so the
//! trace builder never needs to know where the data came from.

use std::fmt::Debug;
use std::path::Path;

use super::BoundaryError;
use crate::interp::{InterpKind, Interpolant};

/// A wall curve with two continuous derivatives.
pub trait WallCurve: Debug + Send + Sync {
    fn phi(&self, x: f64) -> f64;
    fn dphi(&self, x: f64) -> f64;
    fn d2phi(&self, x: f64) -> f64;
}

/// `ϖ̂(x) = sin ω̂(x)` along the wall, with its derivative.
pub trait VarpiProfile: Debug + Send + Sync {
    fn varpi(&self, x: f64) -> f64;
    fn dvarpi(&self, x: f64) -> f64;
}

/// Wall whose slope is a polynomial: `φ′(x) = Σ cₖ xᵏ`, `φ(x) = y₀ + Σ cₖ xᵏ⁺¹/(k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialWall {
    pub slope_coeffs: Vec<f64>,
    pub y_offset: f64,
}

impl PolynomialWall {
    pub fn new(slope_coeffs: Vec<f64>) -> Self {
        Self { slope_coeffs, y_offset: 0.0 }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

impl WallCurve for PolynomialWall {
    fn phi(&self, x: f64) -> f64 {
        let integrated: Vec<f64> =
            std::iter::once(0.0).chain(self.slope_coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64)).collect();
        self.y_offset + horner(&integrated, x)
    }

    fn dphi(&self, x: f64) -> f64 {
        horner(&self.slope_coeffs, x)
    }

    fn d2phi(&self, x: f64) -> f64 {
        let derived: Vec<f64> = self.slope_coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
        horner(&derived, x)
    }
}

/// `ϖ̂(x) = 1 + slope·(x − x₁)`, sonic at `x₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearVarpi {
    pub x1: f64,
    pub slope: f64,
}

impl VarpiProfile for LinearVarpi {
    fn varpi(&self, x: f64) -> f64 {
        1.0 + self.slope * (x - self.x1)
    }

    fn dvarpi(&self, _x: f64) -> f64 {
        self.slope
    }
}

/// Linear Mach number `M̂(x) = 1 + slope·(x − x₁)`, converted through `ϖ̂ = 1/M̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMach {
    pub x1: f64,
    pub slope: f64,
}

impl VarpiProfile for LinearMach {
    fn varpi(&self, x: f64) -> f64 {
        1.0 / (1.0 + self.slope * (x - self.x1))
    }

    fn dvarpi(&self, x: f64) -> f64 {
        let m = 1.0 + self.slope * (x - self.x1);
        -self.slope / (m * m)
    }
}

/// Tabulated wall `(x, φ′, φ″)`. The slope is the cubic Hermite curve through
/// the tabulated slopes with the tabulated curvatures as node derivatives, so
/// `φ″` is continuous and reproduced at the nodes; `φ` is its exact integral.
#[derive(Debug, Clone)]
pub struct WallTable {
    xs: Vec<f64>,
    slope: Vec<f64>,
    curvature: Vec<f64>,
    /// `φ` at each node, accumulated segment by segment.
    phi_nodes: Vec<f64>,
}

impl WallTable {
    pub fn new(xs: Vec<f64>, slope: Vec<f64>, curvature: Vec<f64>, y_offset: f64) -> Result<Self, BoundaryError> {
        if xs.len() < 2 || xs.len() != slope.len() || xs.len() != curvature.len() {
            return Err(BoundaryError::InvalidSpec("wall table needs at least two rows of (x, φ′, φ″)".into()));
        }
        check_increasing(&xs, "wall table")?;
        let mut phi_nodes = vec![y_offset];
        for i in 0..xs.len() - 1 {
            let h = xs[i + 1] - xs[i];
            // exact integral of the Hermite cubic over a full segment
            let inc = h * (slope[i] + slope[i + 1]) / 2.0 + h * h * (curvature[i] - curvature[i + 1]) / 12.0;
            phi_nodes.push(phi_nodes[i] + inc);
        }
        Ok(Self { xs, slope, curvature, phi_nodes })
    }

    pub fn from_str(text: &str, y_offset: f64) -> Result<Self, BoundaryError> {
        let rows = parse_columns(text, 3, "wall table")?;
        Self::new(rows[0].clone(), rows[1].clone(), rows[2].clone(), y_offset)
    }

    pub fn from_path(path: &Path, y_offset: f64) -> Result<Self, BoundaryError> {
        let text = read_table(path)?;
        Self::from_str(&text, y_offset)
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, n - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        (i, h, (x - self.xs[i]) / h)
    }
}

impl WallCurve for WallTable {
    fn phi(&self, x: f64) -> f64 {
        let (i, h, s) = self.locate(x);
        let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
        let i00 = s - s3 + s4 / 2.0;
        let i10 = s2 / 2.0 - 2.0 * s3 / 3.0 + s4 / 4.0;
        let i01 = s3 - s4 / 2.0;
        let i11 = s4 / 4.0 - s3 / 3.0;
        self.phi_nodes[i]
            + h * (i00 * self.slope[i] + i01 * self.slope[i + 1])
            + h * h * (i10 * self.curvature[i] + i11 * self.curvature[i + 1])
    }

    fn dphi(&self, x: f64) -> f64 {
        let (i, h, s) = self.locate(x);
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.slope[i]
            + (s3 - 2.0 * s2 + s) * h * self.curvature[i]
            + (-2.0 * s3 + 3.0 * s2) * self.slope[i + 1]
            + (s3 - s2) * h * self.curvature[i + 1]
    }

    fn d2phi(&self, x: f64) -> f64 {
        let (i, h, s) = self.locate(x);
        let s2 = s * s;
        (6.0 * s2 - 6.0 * s) / h * self.slope[i]
            + (3.0 * s2 - 4.0 * s + 1.0) * self.curvature[i]
            + (-6.0 * s2 + 6.0 * s) / h * self.slope[i + 1]
            + (3.0 * s2 - 2.0 * s) * self.curvature[i + 1]
    }
}

/// Tabulated `(x, ϖ̂)` fitted by a monotonicity-preserving cubic spline.
#[derive(Debug, Clone)]
pub struct VarpiTable {
    curve: Interpolant,
}

impl VarpiTable {
    pub fn new(xs: Vec<f64>, varpi: Vec<f64>) -> Result<Self, BoundaryError> {
        if xs.len() < 2 || xs.len() != varpi.len() {
            return Err(BoundaryError::InvalidSpec("Mach table needs at least two rows of (x, ϖ̂)".into()));
        }
        check_increasing(&xs, "Mach table")?;
        Ok(Self { curve: Interpolant::new(xs, varpi, InterpKind::Monotone) })
    }

    pub fn from_str(text: &str) -> Result<Self, BoundaryError> {
        let rows = parse_columns(text, 2, "Mach table")?;
        Self::new(rows[0].clone(), rows[1].clone())
    }

    pub fn from_path(path: &Path) -> Result<Self, BoundaryError> {
        let text = read_table(path)?;
        Self::from_str(&text)
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.curve.x_min(), self.curve.x_max())
    }
}

impl VarpiProfile for VarpiTable {
    fn varpi(&self, x: f64) -> f64 {
        self.curve.eval(x)
    }

    fn dvarpi(&self, x: f64) -> f64 {
        self.curve.derivative(x)
    }
}

fn read_table(path: &Path) -> Result<String, BoundaryError> {
    std::fs::read_to_string(path).map_err(|e| BoundaryError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn check_increasing(xs: &[f64], what: &'static str) -> Result<(), BoundaryError> {
    match xs.windows(2).position(|w| !(w[1] > w[0])) {
        None => Ok(()),
        Some(i) => Err(BoundaryError::Table { what, line: i + 2, message: format!("x must increase strictly, {} then {}", xs[i], xs[i + 1]) }),
    }
}

/// Whitespace-delimited numeric columns; blank lines and `#` comments are skipped.
fn parse_columns(text: &str, ncols: usize, what: &'static str) -> Result<Vec<Vec<f64>>, BoundaryError> {
    let mut cols = vec![Vec::new(); ncols];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != ncols {
            return Err(BoundaryError::Table {
                what,
                line: lineno + 1,
                message: format!("expected {ncols} columns, found {}", fields.len()),
            });
        }
        for (col, field) in cols.iter_mut().zip(fields) {
            let v: f64 = field.parse().map_err(|_| BoundaryError::Table {
                what,
                line: lineno + 1,
                message: format!("not a number: {field:?}"),
            })?;
            col.push(v);
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_wall_derivatives() {
        let w = PolynomialWall::new(vec![1.0, -0.4, -2.0]);
        let x = 0.2;
        assert!((w.dphi(x) - (1.0 - 0.08 - 0.08)).abs() < 1e-15);
        assert!((w.d2phi(x) - (-0.4 - 0.8)).abs() < 1e-15);
        assert!((w.phi(x) - (0.2 - 0.2 * 0.04 - 2.0 / 3.0 * 0.008)).abs() < 1e-15);
    }

    #[test]
    fn wall_table_reproduces_cubic_wall() {
        // φ′ quadratic ⇒ Hermite slope reproduces it exactly, φ a cubic
        let exact = PolynomialWall::new(vec![1.0, -0.4, -2.0]);
        let xs: Vec<f64> = (0..7).map(|i| 0.05 * i as f64).collect();
        let table = WallTable::new(
            xs.clone(),
            xs.iter().map(|&x| exact.dphi(x)).collect(),
            xs.iter().map(|&x| exact.d2phi(x)).collect(),
            0.0,
        )
        .unwrap();
        for k in 0..=30 {
            let x = 0.3 * k as f64 / 30.0;
            assert!((table.phi(x) - exact.phi(x)).abs() < 1e-14);
            assert!((table.dphi(x) - exact.dphi(x)).abs() < 1e-14);
            assert!((table.d2phi(x) - exact.d2phi(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_mach_converts_to_varpi() {
        let m = LinearMach { x1: 0.0, slope: 2.0 };
        assert_eq!(m.varpi(0.0), 1.0);
        assert!((m.varpi(0.5) - 0.5).abs() < 1e-15);
        let h = 1e-6;
        let fd = (m.varpi(0.3 + h) - m.varpi(0.3 - h)) / (2.0 * h);
        assert!((fd - m.dvarpi(0.3)).abs() < 1e-8);
    }

    #[test]
    fn table_parsing_and_errors() {
        let t = VarpiTable::from_str("# x varpi\n0 1\n0.1 0.95\n\n0.2 0.9 # tail\n").unwrap();
        assert!((t.varpi(0.1) - 0.95).abs() < 1e-15);
        assert_eq!(t.x_range(), (0.0, 0.2));
        let bad = VarpiTable::from_str("0 1\n0.1 abc\n").unwrap_err();
        assert!(matches!(bad, BoundaryError::Table { line: 2, .. }));
        let cols = VarpiTable::from_str("0 1 2\n").unwrap_err();
        assert!(matches!(cols, BoundaryError::Table { line: 1, .. }));
        let order = WallTable::from_str("0 1 -1\n0.2 0.9 -1\n0.1 0.8 -1\n", 0.0).unwrap_err();
        assert!(matches!(order, BoundaryError::Table { line: 3, .. }));
        let missing = VarpiTable::from_path(Path::new("/nonexistent/table.txt")).unwrap_err();
        assert!(matches!(missing, BoundaryError::Io { .. }));
    }
}
