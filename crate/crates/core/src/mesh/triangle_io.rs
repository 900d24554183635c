//! Reader and writer for the `.node` / `.ele` text format of the Triangle
//! mesh generator.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Mesh, Point2, Tag, TagSet};
use crate::error::{Error, Result};

/// Maps nonzero boundary markers to tags. Marker 0 means interior; markers
/// missing from the map get `default`.
#[derive(Debug, Clone)]
pub struct MarkerMap {
    pub map: HashMap<i64, Tag>,
    pub default: Tag,
}

impl Default for MarkerMap {
    fn default() -> Self {
        Self {
            map: HashMap::new(),
            default: Tag::Boundary,
        }
    }
}

impl MarkerMap {
    pub fn with(mut self, marker: i64, tag: Tag) -> Self {
        self.map.insert(marker, tag);
        self
    }

    fn tag(&self, marker: i64) -> TagSet {
        if marker == 0 {
            TagSet::EMPTY
        } else {
            TagSet::single(*self.map.get(&marker).unwrap_or(&self.default))
        }
    }
}

/// Lines with comments stripped, paired with their 1-based line number.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse<T: std::str::FromStr>(file: &'static str, line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::MeshFormat {
        file,
        line,
        msg: format!("cannot parse '{s}'"),
    })
}

fn format_err(file: &'static str, line: usize, msg: impl Into<String>) -> Error {
    Error::MeshFormat {
        file,
        line,
        msg: msg.into(),
    }
}

/// Parse a mesh from `.node` and `.ele` contents. The index base (0 or 1) is
/// taken from the first node id; node ids must then be consecutive and
/// triangle references must use the same base.
pub fn load_triangle_mesh(node_text: &str, ele_text: &str, markers: &MarkerMap) -> Result<Mesh> {
    const NODE: &str = ".node";
    const ELE: &str = ".ele";

    let mut it = records(node_text);
    let (hl, header) = it.next().ok_or_else(|| format_err(NODE, 0, "empty file"))?;
    if header.len() < 2 {
        return Err(format_err(NODE, hl, "header needs <#points> <dim> [<#attrs> <#markers>]"));
    }
    let count: usize = parse(NODE, hl, header[0])?;
    let dim: usize = parse(NODE, hl, header[1])?;
    if dim != 2 {
        return Err(format_err(NODE, hl, format!("dimension {dim}, expected 2")));
    }
    let nattr: usize = header.get(2).map_or(Ok(0), |s| parse(NODE, hl, s))?;
    let nmark: usize = header.get(3).map_or(Ok(0), |s| parse(NODE, hl, s))?;
    if nmark > 1 {
        return Err(format_err(NODE, hl, "at most one boundary marker per node"));
    }

    let mut base: Option<i64> = None;
    let mut points = Vec::with_capacity(count);
    let mut tags = Vec::with_capacity(count);
    for (line, f) in it.by_ref().take(count) {
        if f.len() < 3 + nattr + nmark {
            return Err(format_err(NODE, line, "too few fields"));
        }
        let id: i64 = parse(NODE, line, f[0])?;
        let b = *base.get_or_insert(id);
        if b != 0 && b != 1 {
            return Err(format_err(NODE, line, format!("first id {id} is neither 0 nor 1")));
        }
        if id != b + points.len() as i64 {
            return Err(format_err(NODE, line, format!("id {id} breaks consecutive numbering from base {b}")));
        }
        let x: f64 = parse(NODE, line, f[1])?;
        let y: f64 = parse(NODE, line, f[2])?;
        points.push(Point2::new(x, y));
        let marker: i64 = if nmark == 1 { parse(NODE, line, f[3 + nattr])? } else { 0 };
        tags.push(markers.tag(marker));
    }
    if points.len() != count {
        return Err(format_err(NODE, 0, format!("header promises {count} points, found {}", points.len())));
    }
    let base = base.unwrap_or(0);

    let mut it = records(ele_text);
    let (hl, header) = it.next().ok_or_else(|| format_err(ELE, 0, "empty file"))?;
    if header.len() < 2 {
        return Err(format_err(ELE, hl, "header needs <#triangles> <nodes per triangle> [<#attrs>]"));
    }
    let ntri: usize = parse(ELE, hl, header[0])?;
    let per: usize = parse(ELE, hl, header[1])?;
    if per != 3 {
        return Err(format_err(ELE, hl, format!("{per} nodes per triangle, expected 3")));
    }
    let mut cells = Vec::with_capacity(ntri);
    for (line, f) in it.take(ntri) {
        if f.len() < 4 {
            return Err(format_err(ELE, line, "too few fields"));
        }
        let id: i64 = parse(ELE, line, f[0])?;
        if id != base + cells.len() as i64 {
            return Err(format_err(ELE, line, format!("triangle id {id} does not follow base {base}")));
        }
        let mut tri = [0usize; 3];
        for k in 0..3 {
            let raw: i64 = parse(ELE, line, f[1 + k])?;
            let local = raw - base;
            if local < 0 || local >= count as i64 {
                return Err(Error::NodeOutOfRange {
                    triangle: cells.len(),
                    index: raw,
                });
            }
            tri[k] = local as usize;
        }
        cells.push(tri);
    }
    if cells.len() != ntri {
        return Err(format_err(ELE, 0, format!("header promises {ntri} triangles, found {}", cells.len())));
    }
    Mesh::new(points, cells, tags)
}

/// Read `<stem>.node` and `<stem>.ele`.
pub fn load_triangle_files(node: &Path, ele: &Path, markers: &MarkerMap) -> Result<Mesh> {
    let n = fs::read_to_string(node)?;
    let e = fs::read_to_string(ele)?;
    load_triangle_mesh(&n, &e, markers)
}

/// Write a mesh as 1-based `.node` / `.ele` files. Node markers are the
/// index of the node's first tag in [`Tag::ALL`] plus one, 0 for interior.
pub fn write_triangle_mesh(mesh: &Mesh, node: &Path, ele: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(node)?);
    writeln!(out, "{} 2 0 1", mesh.num_nodes())?;
    for (i, p) in mesh.points().iter().enumerate() {
        let marker = mesh
            .node_tags(i)
            .first()
            .map_or(0, |t| Tag::ALL.iter().position(|&a| a == t).unwrap() + 1);
        writeln!(out, "{} {:.17e} {:.17e} {}", i + 1, p.x, p.y, marker)?;
    }
    out.flush()?;
    let mut out = std::io::BufWriter::new(fs::File::create(ele)?);
    writeln!(out, "{} 3 0", mesh.num_triangles())?;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let n = tri.nodes;
        writeln!(out, "{} {} {} {}", t + 1, n[0] + 1, n[1] + 1, n[2] + 1)?;
    }
    out.flush()?;
    Ok(())
}

/// Marker map matching [`write_triangle_mesh`].
pub fn written_marker_map() -> MarkerMap {
    let mut m = MarkerMap::default();
    for (i, &t) in Tag::ALL.iter().enumerate() {
        m.map.insert(i as i64 + 1, t);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODES: &str = "# unit triangle\n3 2 0 1\n1 0.0 0.0 1\n2 1.0 0.0 1\n3 0.0 1.0 1\n";

    #[test]
    fn single_triangle() {
        let m = load_triangle_mesh(NODES, "1 3 0\n1 1 2 3\n", &MarkerMap::default()).unwrap();
        assert_eq!(m.num_triangles(), 1);
        assert!((m.total_area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clockwise_input_matches() {
        let a = load_triangle_mesh(NODES, "1 3 0\n1 1 2 3\n", &MarkerMap::default()).unwrap();
        let b = load_triangle_mesh(NODES, "1 3 0\n1 1 3 2\n", &MarkerMap::default()).unwrap();
        assert_eq!(a.geometry(0), b.geometry(0));
        assert_eq!(a.triangle(0).nodes, b.triangle(0).nodes);
    }

    #[test]
    fn zero_based_square() {
        let node = "4 2 0 0\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n";
        let ele = "2 3 0\n0 0 1 2  # lower\n1 0 2 3\n";
        let m = load_triangle_mesh(node, ele, &MarkerMap::default()).unwrap();
        let census = m.edge_census();
        assert_eq!(census.values().filter(|&&c| c == 2).count(), 1);
        assert_eq!(census.len(), 5);
    }

    #[test]
    fn errors() {
        let mm = MarkerMap::default();
        assert!(matches!(
            load_triangle_mesh(NODES, "1 3 0\n1 1 2 4\n", &mm),
            Err(Error::NodeOutOfRange { index: 4, .. })
        ));
        assert!(matches!(
            load_triangle_mesh(NODES, "1 3 0\n1 0 1 2\n", &mm),
            Err(Error::NodeOutOfRange { index: 0, .. })
        ));
        assert!(matches!(load_triangle_mesh("x 2\n", "", &mm), Err(Error::MeshFormat { .. })));
        let flat = "3 2 0 0\n1 0 0\n2 1 0\n3 2 0\n";
        assert!(matches!(
            load_triangle_mesh(flat, "1 3 0\n1 1 2 3\n", &mm),
            Err(Error::DegenerateTriangle(0))
        ));
        let mixed = "3 2 0 0\n0 0 0\n2 1 0\n3 0 1\n";
        assert!(matches!(load_triangle_mesh(mixed, "1 3 0\n0 0 1 2\n", &mm), Err(Error::MeshFormat { .. })));
    }

    #[test]
    fn markers_become_tags() {
        let mm = MarkerMap::default().with(1, Tag::Surface);
        let m = load_triangle_mesh(NODES, "1 3 0\n1 1 2 3\n", &mm).unwrap();
        assert!(m.node_tags(0).contains(Tag::Surface));
        assert!(m.boundary_edges().iter().all(|e| e.tag == Tag::Surface));
    }

    #[test]
    fn roundtrip() {
        let m = crate::mesh::gen_ogrid_cylinder(0.5, 3.0, 16, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (n, e) = (dir.path().join("m.node"), dir.path().join("m.ele"));
        write_triangle_mesh(&m, &n, &e).unwrap();
        let r = load_triangle_files(&n, &e, &written_marker_map()).unwrap();
        assert_eq!(r.points(), m.points());
        assert_eq!(r.all_node_tags(), m.all_node_tags());
        assert_eq!(r.num_triangles(), m.num_triangles());
    }
}
