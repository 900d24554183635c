//! Conforming triangular meshes and the per-element geometry consumed by
//! both the cell-centered and the least-squares schemes.
//!
//! Conventions used everywhere downstream:
//!
//! * triangles are stored counterclockwise;
//! * `normals[i]` is the outward normal of the edge *opposite* node `i`,
//!   scaled to that edge's length, so `normals[0] + normals[1] + normals[2] = 0`;
//! * `neighbors[i]` is the triangle across that same edge.

mod generate;
mod patch;
mod triangle_io;
mod vtk;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use generate::{
    gen_equilateral_grid, gen_jittered_square, gen_ogrid, gen_ogrid_cylinder, gen_structured_rect,
    gen_structured_square, refine_uniform, Grading, OgridStyle, StructuredStyle,
};
pub use patch::{rescale_patch, Patch};
pub use triangle_io::{
    load_triangle_files, load_triangle_mesh, write_triangle_mesh, written_marker_map, MarkerMap,
};
pub use vtk::{write_vtk, VtkData};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Vectors share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    /// Rotate by -90 degrees: `(x, y) -> (y, -x)`.
    pub fn perp_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

/// Boundary marker attached to nodes and boundary edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Farfield,
    Surface,
    Bottom,
    Top,
    Left,
    Right,
    /// Boundary with no scenario-specific meaning.
    Boundary,
}

impl Tag {
    pub const ALL: [Tag; 7] = [
        Tag::Farfield,
        Tag::Surface,
        Tag::Bottom,
        Tag::Top,
        Tag::Left,
        Tag::Right,
        Tag::Boundary,
    ];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            Tag::Farfield => "farfield",
            Tag::Surface => "surface",
            Tag::Bottom => "bottom",
            Tag::Top => "top",
            Tag::Left => "left",
            Tag::Right => "right",
            Tag::Boundary => "boundary",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Set of tags carried by a node. Empty means interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct TagSet(u8);

impl TagSet {
    pub const EMPTY: TagSet = TagSet(0);

    pub fn single(tag: Tag) -> Self {
        TagSet(tag.bit())
    }

    pub fn insert(&mut self, tag: Tag) {
        self.0 |= tag.bit();
    }

    pub fn contains(self, tag: Tag) -> bool {
        self.0 & tag.bit() != 0
    }

    pub fn is_interior(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tag> {
        Tag::ALL.into_iter().filter(move |t| self.contains(*t))
    }

    pub fn first(self) -> Option<Tag> {
        self.iter().next()
    }

    fn intersect(self, o: TagSet) -> TagSet {
        TagSet(self.0 & o.0)
    }
}

impl FromIterator<Tag> for TagSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        let mut s = TagSet::EMPTY;
        for t in iter {
            s.insert(t);
        }
        s
    }
}

/// Triangle connectivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    /// Vertex indices, counterclockwise.
    pub nodes: [usize; 3],
    /// `neighbors[i]` faces the edge opposite `nodes[i]`.
    pub neighbors: [Option<usize>; 3],
}

/// Geometry of one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub area: f64,
    /// Outward edge normals scaled to edge length; `normals[i]` is opposite node `i`.
    pub normals: [Vec2; 3],
    pub centroid: Point2,
    /// Present only when every angle is strictly below a right angle.
    pub circumcenter: Option<Point2>,
    /// `edge_lengths[i]` is the length of the edge opposite node `i`.
    pub edge_lengths: [f64; 3],
}

impl ElementGeometry {
    /// Geometry of a counterclockwise triangle.
    pub fn from_vertices(p: [Point2; 3]) -> Self {
        let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
        let mut normals = [Vec2::default(); 3];
        let mut edge_lengths = [0.0; 3];
        for i in 0..3 {
            let a = p[(i + 1) % 3];
            let b = p[(i + 2) % 3];
            let d = b - a;
            normals[i] = d.perp_cw();
            edge_lengths[i] = d.norm();
        }
        let centroid = Point2::new(
            (p[0].x + p[1].x + p[2].x) / 3.0,
            (p[0].y + p[1].y + p[2].y) / 3.0,
        );
        let acute = (0..3).all(|i| {
            let o = p[i];
            (p[(i + 1) % 3] - o).dot(p[(i + 2) % 3] - o) > 0.0
        });
        let circumcenter = acute.then(|| circumcenter(p));
        Self {
            area,
            normals,
            centroid,
            circumcenter,
            edge_lengths,
        }
    }

    /// Circumcenter when available, otherwise the centroid.
    pub fn center(&self) -> Point2 {
        self.circumcenter.unwrap_or(self.centroid)
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }
}

fn circumcenter(p: [Point2; 3]) -> Point2 {
    // Solve relative to p0 to limit cancellation.
    let b = p[1] - p[0];
    let c = p[2] - p[0];
    let d = 2.0 * b.cross(c);
    let b2 = b.dot(b);
    let c2 = c.dot(c);
    let ux = (c.y * b2 - b.y * c2) / d;
    let uy = (b.x * c2 - c.x * b2) / d;
    p[0] + Point2::new(ux, uy)
}

/// An edge on the domain boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub triangle: usize,
    /// Local index of the node opposite this edge.
    pub local: usize,
    /// End nodes, in the triangle's counterclockwise order.
    pub nodes: [usize; 2],
    pub tag: Tag,
}

/// Immutable triangular mesh with cached geometry.
#[derive(Debug, Clone)]
pub struct Mesh {
    points: Vec<Point2>,
    triangles: Vec<Triangle>,
    node_tags: Vec<TagSet>,
    boundary_edges: Vec<BoundaryEdge>,
    geometry: Vec<ElementGeometry>,
}

impl Mesh {
    /// Build a mesh from raw connectivity. Clockwise triangles are reoriented,
    /// zero-area triangles are rejected. Boundary edges take the tag common to
    /// both end nodes, falling back to either end's tag and finally to
    /// [`Tag::Boundary`].
    pub fn new(points: Vec<Point2>, cells: Vec<[usize; 3]>, node_tags: Vec<TagSet>) -> Result<Self> {
        if node_tags.len() != points.len() {
            return Err(Error::InvalidParameter(format!(
                "{} node tags for {} points",
                node_tags.len(),
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("node {i} has non-finite coordinates")));
        }
        let mut triangles = Vec::with_capacity(cells.len());
        for (t, mut n) in cells.into_iter().enumerate() {
            if let Some(&bad) = n.iter().find(|&&k| k >= points.len()) {
                return Err(Error::NodeOutOfRange {
                    triangle: t,
                    index: bad as i64,
                });
            }
            if n[0] == n[1] || n[1] == n[2] || n[0] == n[2] {
                return Err(Error::DegenerateTriangle(t));
            }
            let (a, b, c) = (points[n[0]], points[n[1]], points[n[2]]);
            let twice_area = (b - a).cross(c - a);
            let scale = (b - a).norm().max((c - a).norm()).max((c - b).norm());
            if twice_area.abs() <= 1e-14 * scale * scale {
                return Err(Error::DegenerateTriangle(t));
            }
            if twice_area < 0.0 {
                n.swap(1, 2);
            }
            triangles.push(Triangle {
                nodes: n,
                neighbors: [None; 3],
            });
        }

        let mut edge_map: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                let a = tri.nodes[(i + 1) % 3];
                let b = tri.nodes[(i + 2) % 3];
                edge_map.entry((a.min(b), a.max(b))).or_default().push((t, i));
            }
        }
        let mut boundary_edges = Vec::new();
        // Iterate triangles in order so the boundary edge list is deterministic.
        for t in 0..triangles.len() {
            for i in 0..3 {
                let a = triangles[t].nodes[(i + 1) % 3];
                let b = triangles[t].nodes[(i + 2) % 3];
                let users = &edge_map[&(a.min(b), a.max(b))];
                match users.len() {
                    1 => {
                        let common = node_tags[a].intersect(node_tags[b]);
                        let tag = common
                            .first()
                            .or_else(|| node_tags[a].first())
                            .or_else(|| node_tags[b].first())
                            .unwrap_or(Tag::Boundary);
                        boundary_edges.push(BoundaryEdge {
                            triangle: t,
                            local: i,
                            nodes: [a, b],
                            tag,
                        });
                    }
                    2 => {
                        let other = if users[0].0 == t { users[1].0 } else { users[0].0 };
                        triangles[t].neighbors[i] = Some(other);
                    }
                    k => {
                        return Err(Error::InvalidParameter(format!(
                            "edge ({a}, {b}) is shared by {k} triangles"
                        )))
                    }
                }
            }
        }
        // A boundary node nobody tagged still needs a tag.
        let mut node_tags = node_tags;
        for e in &boundary_edges {
            for &k in &e.nodes {
                if node_tags[k].is_interior() {
                    node_tags[k].insert(e.tag);
                }
            }
        }

        let geometry = triangles
            .iter()
            .map(|t| ElementGeometry::from_vertices(t.nodes.map(|k| points[k])))
            .collect();
        Ok(Self {
            points,
            triangles,
            node_tags,
            boundary_edges,
            geometry,
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point2 {
        self.points[i]
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &Triangle {
        &self.triangles[t]
    }

    pub fn num_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn node_tags(&self, i: usize) -> TagSet {
        self.node_tags[i]
    }

    pub fn all_node_tags(&self) -> &[TagSet] {
        &self.node_tags
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    /// See [`element_geometry`].
    pub fn geometry(&self, t: usize) -> &ElementGeometry {
        &self.geometry[t]
    }

    pub fn geometries(&self) -> &[ElementGeometry] {
        &self.geometry
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// Nodes carrying `tag`, in index order.
    pub fn nodes_with_tag(&self, tag: Tag) -> Vec<usize> {
        (0..self.num_nodes())
            .filter(|&i| self.node_tags[i].contains(tag))
            .collect()
    }

    /// For every node, the triangles that contain it.
    pub fn node_to_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_nodes()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &k in &tri.nodes {
                out[k].push(t);
            }
        }
        out
    }

    /// Number of triangles incident on every undirected edge, keyed by
    /// sorted node pair.
    pub fn edge_census(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                let a = tri.nodes[(i + 1) % 3];
                let b = tri.nodes[(i + 2) % 3];
                *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        m
    }

    /// Replace point coordinates, keeping connectivity. Geometry is rebuilt.
    pub(crate) fn with_points(&self, points: Vec<Point2>) -> Self {
        let geometry = self
            .triangles
            .iter()
            .map(|t| ElementGeometry::from_vertices(t.nodes.map(|k| points[k])))
            .collect();
        Self {
            points,
            triangles: self.triangles.clone(),
            node_tags: self.node_tags.clone(),
            boundary_edges: self.boundary_edges.clone(),
            geometry,
        }
    }

    /// Index of a triangle containing `p` (barycentric test with a small
    /// tolerance), found by linear scan.
    pub fn locate(&self, p: Point2) -> Option<(usize, [f64; 3])> {
        self.triangles.iter().enumerate().find_map(|(t, tri)| {
            let bary = barycentric(tri.nodes.map(|k| self.points[k]), p);
            (bary.iter().all(|&b| b >= -1e-12)).then_some((t, bary))
        })
    }

    /// Linear interpolation of a nodal scalar at `p`.
    pub fn interpolate(&self, values: &[f64], p: Point2) -> Option<f64> {
        let (t, b) = self.locate(p)?;
        let n = self.triangles[t].nodes;
        Some(b[0] * values[n[0]] + b[1] * values[n[1]] + b[2] * values[n[2]])
    }
}

/// Per-element geometry for triangle `t`.
pub fn element_geometry(mesh: &Mesh, t: usize) -> ElementGeometry {
    *mesh.geometry(t)
}

/// Barycentric coordinates of `p` in a counterclockwise triangle.
pub fn barycentric(v: [Point2; 3], p: Point2) -> [f64; 3] {
    let d = (v[1] - v[0]).cross(v[2] - v[0]);
    let l1 = (v[2] - v[1]).cross(p - v[1]) / d;
    let l2 = (v[0] - v[2]).cross(p - v[2]) / d;
    [l1, l2, 1.0 - l1 - l2]
}
