//! Artifact writers. Every table starts with a `# config_hash=` line followed
//! by the column header; numbers use the shortest round-trip representation,
//! so identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::inversion::{CurvePoint, PhysicalPatch};

pub const NODE_COLUMNS: [&str; 11] = ["char_id", "t", "r", "u_bar", "v_bar", "w_bar", "x", "y", "theta", "varpi", "jacobian"];
pub const CURVE_COLUMNS: [&str; 4] = ["x", "y", "theta", "varpi"];
pub const PD_COLUMNS: [&str; 7] = ["x", "y", "theta", "varpi", "arclength", "tangent_x", "tangent_y"];

/// Output directory plus the hash stamped into every file.
#[derive(Debug, Clone)]
pub struct ArtifactWriter {
    pub dir: PathBuf,
    pub config_hash: String,
}

impl ArtifactWriter {
    pub fn new(dir: &Path, config_hash: &str) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), config_hash: config_hash.to_string() })
    }

    fn table(&self, columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
        let mut out = String::new();
        writeln!(out, "# config_hash={}", self.config_hash).unwrap();
        writeln!(out, "{}", columns.join(",")).unwrap();
        for row in rows {
            debug_assert_eq!(row.len(), columns.len());
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }

    pub fn write_csv(&self, name: &str, columns: &[&str], rows: impl Iterator<Item = Vec<String>>) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, self.table(columns, rows))?;
        Ok(path)
    }

    pub fn write_nodes(&self, patch: &PhysicalPatch) -> std::io::Result<PathBuf> {
        let rows = patch.iter().map(|n| {
            let mut row = vec![n.char_id.to_string()];
            row.extend([n.t, n.r, n.u_bar, n.v_bar, n.w_bar, n.x, n.y, n.theta, n.varpi, n.jacobian].map(num));
            row
        });
        self.write_csv("nodes.csv", &NODE_COLUMNS, rows)
    }

    pub fn write_curve(&self, name: &str, points: &[CurvePoint]) -> std::io::Result<PathBuf> {
        self.write_csv(name, &CURVE_COLUMNS, points.iter().map(|p| [p.x, p.y, p.theta, p.varpi].map(num).to_vec()))
    }

    pub fn write_pd(&self, points: &[CurvePoint]) -> std::io::Result<PathBuf> {
        let rows = points.iter().map(|p| [p.x, p.y, p.theta, p.varpi, p.arclength, p.tangent.0, p.tangent.1].map(num).to_vec());
        self.write_csv("pd.csv", &PD_COLUMNS, rows)
    }

    /// Pretty JSON with the hash as the first key.
    pub fn write_json<T: Serialize>(&self, name: &str, body: &T) -> std::io::Result<PathBuf> {
        #[derive(Serialize)]
        struct Stamped<'a, T> {
            config_hash: &'a str,
            #[serde(flatten)]
            body: &'a T,
        }
        let path = self.dir.join(name);
        let text = serde_json::to_string_pretty(&Stamped { config_hash: &self.config_hash, body })?;
        fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

/// Shortest round-trip decimal; non-finite values spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
