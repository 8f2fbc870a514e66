//! CSV, legacy VTK and manifest writers.
//!
//! Numbers are printed with 17 significant digits through Rust's own float
//! formatting, so files do not depend on the locale and identical runs give
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tenmoment_core::state::cons_to_prim;
use tenmoment_core::{GridField, PrimitiveState, ProblemId};

use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn prim_columns(w: &PrimitiveState, out: &mut String) {
    for v in w.to_array() {
        out.push(',');
        out.push_str(&num(v));
    }
}

/// Field as CSV text. 1-D: `x,rho,v1,v2,p11,p12,p22`; 2-D adds `y` after `x`
/// and `trace,det` of the pressure at the end.
pub fn field_csv(field: &GridField) -> Result<String, CliError> {
    let m = field.mesh;
    let mut s = String::new();
    if m.is_2d() {
        s.push_str("x,y,rho,v1,v2,p11,p12,p22,trace,det\n");
    } else {
        s.push_str("x,rho,v1,v2,p11,p12,p22\n");
    }
    for ((i, j), u) in field.interior() {
        let w = cons_to_prim(u)?;
        let (x, y) = m.center(i, j);
        s.push_str(&num(x));
        if m.is_2d() {
            s.push(',');
            s.push_str(&num(y));
        }
        prim_columns(&w, &mut s);
        if m.is_2d() {
            let _ = write!(s, ",{},{}", num(w.pressure_trace()), num(w.pressure_det()));
        }
        s.push('\n');
    }
    Ok(s)
}

/// Legacy ASCII structured-points VTK with one scalar per primitive plus the
/// pressure trace and determinant.
pub fn field_vtk(field: &GridField, title: &str) -> Result<String, CliError> {
    let m = field.mesh;
    let prims = field.interior().map(|(_, u)| cons_to_prim(u)).collect::<Result<Vec<_>, _>>()?;
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {} {} 1", m.nx, m.ny);
    let (x0, y0) = m.center(0, 0);
    let _ = writeln!(s, "ORIGIN {} {} 0", num(x0), num(y0));
    let _ = writeln!(s, "SPACING {} {} 1", num(m.dx()), num(m.dy()));
    let _ = writeln!(s, "POINT_DATA {}", prims.len());
    type Column = (&'static str, fn(&PrimitiveState) -> f64);
    let columns: [Column; 8] = [
        ("rho", |w| w.rho),
        ("v1", |w| w.v1),
        ("v2", |w| w.v2),
        ("p11", |w| w.p11),
        ("p12", |w| w.p12),
        ("p22", |w| w.p22),
        ("trace", |w| w.pressure_trace()),
        ("det", |w| w.pressure_det()),
    ];
    for (name, f) in columns {
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for w in &prims {
            s.push_str(&num(f(w)));
            s.push('\n');
        }
    }
    Ok(s)
}

/// Which 1-D cut a 2-D problem is usually compared along.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cut {
    /// Horizontal line `y = c`, interpolated between the two nearest rows.
    Row(f64),
    /// The anti-diagonal `x + y = c` through cell centres of a square mesh.
    AntiDiagonal(f64),
}

pub fn default_cut(id: ProblemId) -> Option<Cut> {
    match id {
        ProblemId::NearVacuum2d | ProblemId::DiscontinuousNearVacuum2d => Some(Cut::Row(0.0)),
        ProblemId::Realistic2d => Some(Cut::Row(50.0)),
        ProblemId::UniformPlasma => Some(Cut::AntiDiagonal(4.0)),
        _ => None,
    }
}

/// Cross-section CSV with header `x,y,rho,v1,v2,p11,p12,p22`.
pub fn cross_section_csv(field: &GridField, cut: Cut) -> Result<String, CliError> {
    let m = field.mesh;
    if !m.is_2d() {
        return Err(CliError::config("cross-sections need a 2-D field"));
    }
    let mut s = String::from("x,y,rho,v1,v2,p11,p12,p22\n");
    match cut {
        Cut::Row(c) => {
            let pos = (c - m.y0) / m.dy() - 0.5;
            if !(0.0..=(m.ny - 1) as f64).contains(&pos) {
                return Err(CliError::config(format!("line y = {c} lies outside the cell centres")));
            }
            let j0 = (pos.floor() as usize).min(m.ny - 2);
            let t = pos - j0 as f64;
            for i in 0..m.nx {
                let a = cons_to_prim(field.get(i, j0))?.to_array();
                let b = cons_to_prim(field.get(i, j0 + 1))?.to_array();
                let w = PrimitiveState::from_array(std::array::from_fn(|k| (1.0 - t) * a[k] + t * b[k]));
                let _ = write!(s, "{},{}", num(m.center(i, 0).0), num(c));
                prim_columns(&w, &mut s);
                s.push('\n');
            }
        }
        Cut::AntiDiagonal(c) => {
            for i in 0..m.nx {
                let x = m.center(i, 0).0;
                let pos = (c - x - m.y0) / m.dy() - 0.5;
                let j = pos.round();
                if (pos - j).abs() > 1e-9 || j < 0.0 || j >= m.ny as f64 {
                    continue;
                }
                let (x, y) = m.center(i, j as usize);
                let w = cons_to_prim(field.get(i, j as usize))?;
                let _ = write!(s, "{},{}", num(x), num(y));
                prim_columns(&w, &mut s);
                s.push('\n');
            }
        }
    }
    Ok(s)
}

/// Writes `contents` and returns its SHA-256 as lowercase hex.
pub fn write_file(path: &Path, contents: &str) -> Result<String, CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(contents.as_bytes())))
}

/// Plain-text `key=value` manifest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunManifest {
    pub entries: Vec<(String, String)>,
    /// Output files relative to the output directory, with checksums.
    pub files: Vec<(PathBuf, String)>,
}

impl RunManifest {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        for (f, sum) in &self.files {
            let _ = writeln!(s, "sha256.{}={sum}", f.display());
        }
        s
    }
}
