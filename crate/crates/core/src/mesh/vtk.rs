//! Legacy VTK (ASCII, v3.0) unstructured-grid export.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Mesh;
use crate::error::{Error, Result};
use crate::output::fmt_g17;

/// Fields attached to a VTK export.
#[derive(Debug, Clone, Default)]
pub struct VtkData {
    pub point_scalars: Vec<(String, Vec<f64>)>,
    pub point_vectors: Vec<(String, Vec<[f64; 2]>)>,
    pub cell_scalars: Vec<(String, Vec<f64>)>,
}

impl VtkData {
    pub fn scalar(mut self, name: &str, values: Vec<f64>) -> Self {
        self.point_scalars.push((name.into(), values));
        self
    }

    pub fn vector(mut self, name: &str, values: Vec<[f64; 2]>) -> Self {
        self.point_vectors.push((name.into(), values));
        self
    }

    pub fn cell_scalar(mut self, name: &str, values: Vec<f64>) -> Self {
        self.cell_scalars.push((name.into(), values));
        self
    }
}

/// Render the mesh and its fields as a legacy VTK document.
pub fn vtk_string(mesh: &Mesh, title: &str, data: &VtkData) -> Result<String> {
    let np = mesh.num_nodes();
    let nc = mesh.num_triangles();
    for (name, v) in &data.point_scalars {
        if v.len() != np {
            return Err(Error::InvalidParameter(format!("point field {name} has {} values", v.len())));
        }
    }
    for (name, v) in &data.point_vectors {
        if v.len() != np {
            return Err(Error::InvalidParameter(format!("point field {name} has {} values", v.len())));
        }
    }
    for (name, v) in &data.cell_scalars {
        if v.len() != nc {
            return Err(Error::InvalidParameter(format!("cell field {name} has {} values", v.len())));
        }
    }
    let mut s = String::new();
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    writeln!(s, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(s, "POINTS {np} double").unwrap();
    for p in mesh.points() {
        writeln!(s, "{} {} 0", fmt_g17(p.x), fmt_g17(p.y)).unwrap();
    }
    writeln!(s, "CELLS {nc} {}", 4 * nc).unwrap();
    for t in mesh.triangles() {
        writeln!(s, "3 {} {} {}", t.nodes[0], t.nodes[1], t.nodes[2]).unwrap();
    }
    writeln!(s, "CELL_TYPES {nc}").unwrap();
    for _ in 0..nc {
        s.push_str("5\n");
    }
    if !data.point_scalars.is_empty() || !data.point_vectors.is_empty() {
        writeln!(s, "POINT_DATA {np}").unwrap();
        for (name, v) in &data.point_scalars {
            writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
            for x in v {
                writeln!(s, "{}", fmt_g17(*x)).unwrap();
            }
        }
        for (name, v) in &data.point_vectors {
            writeln!(s, "VECTORS {name} double").unwrap();
            for [x, y] in v {
                writeln!(s, "{} {} 0", fmt_g17(*x), fmt_g17(*y)).unwrap();
            }
        }
    }
    if !data.cell_scalars.is_empty() {
        writeln!(s, "CELL_DATA {nc}").unwrap();
        for (name, v) in &data.cell_scalars {
            writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
            for x in v {
                writeln!(s, "{}", fmt_g17(*x)).unwrap();
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(mesh: &Mesh, path: &Path, title: &str, data: &VtkData) -> Result<()> {
    let s = vtk_string(mesh, title, data)?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, s)?;
    Ok(())
}
