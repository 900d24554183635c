//! Structured mesh generators.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mesh, Point2, Tag, TagSet};
use crate::error::{Error, Result};

/// Coordinate tolerance used for positional boundary tagging.
const TAG_TOL: f64 = 1e-9;

/// Diagonal layout of [`gen_structured_square`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuredStyle {
    /// Congruent right triangles, every square split along the same diagonal.
    Right,
    /// Rows of equilateral triangles with side `1/n`.
    EquilateralPatch,
}

/// Vertical node distribution for rectangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// Geometric growth away from the bottom edge: each interval is `ratio`
    /// times the one below it.
    Geometric { ratio: f64 },
}

/// Node layout of an annular O-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OgridStyle {
    /// Nodes on radial lines; quads split with diagonals mirrored about the
    /// x-axis so the mesh is symmetric under `y -> -y`.
    Radial,
    /// Alternate rings rotated by half an angular step (near-equilateral cells).
    Staggered,
}

/// Structured triangulation of the unit square. The equilateral style is a
/// lattice of side `1/n` shifted so the middle cell's centroid is the origin.
pub fn gen_structured_square(n: usize, style: StructuredStyle) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    match style {
        StructuredStyle::Right => gen_structured_rect(n, n, (0.0, 1.0), (0.0, 1.0), Grading::Uniform),
        StructuredStyle::EquilateralPatch => {
            let m = gen_equilateral_grid(n, n, 1.0 / n as f64)?;
            // put the centroid of the middle cell at the origin
            let mid = (n / 2) * 2 * n + 2 * (n / 2);
            let c = m.geometry(mid).centroid;
            m.map_points(|p| p - c)
        }
    }
}

/// Right-triangle mesh of `[x0,x1] x [y0,y1]` with `nx` by `ny` cells, tagged
/// `Left`, `Right`, `Bottom` and `Top` by position.
pub fn gen_structured_rect(
    nx: usize,
    ny: usize,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    grading: Grading,
) -> Result<Mesh> {
    if nx == 0 || ny == 0 || !(x1 > x0) || !(y1 > y0) {
        return Err(Error::InvalidParameter(format!(
            "bad rectangle {nx}x{ny} on [{x0},{x1}]x[{y0},{y1}]"
        )));
    }
    let xs: Vec<f64> = (0..=nx).map(|i| x0 + (x1 - x0) * (i as f64 / nx as f64)).collect();
    let ys: Vec<f64> = match grading {
        Grading::Uniform => (0..=ny).map(|j| y0 + (y1 - y0) * (j as f64 / ny as f64)).collect(),
        Grading::Geometric { ratio } => {
            if !(ratio > 0.0) {
                return Err(Error::InvalidParameter("grading ratio must be positive".into()));
            }
            if (ratio - 1.0).abs() < 1e-12 {
                (0..=ny).map(|j| y0 + (y1 - y0) * (j as f64 / ny as f64)).collect()
            } else {
                let total = ratio.powi(ny as i32) - 1.0;
                (0..=ny)
                    .map(|j| y0 + (y1 - y0) * (ratio.powi(j as i32) - 1.0) / total)
                    .collect()
            }
        }
    };
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut points = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut tags = Vec::with_capacity(points.capacity());
    let tol = TAG_TOL * (x1 - x0).max(y1 - y0);
    for &y in &ys {
        for &x in &xs {
            points.push(Point2::new(x, y));
            let mut t = TagSet::EMPTY;
            if (x - x0).abs() < tol {
                t.insert(Tag::Left);
            }
            if (x - x1).abs() < tol {
                t.insert(Tag::Right);
            }
            if (y - y0).abs() < tol {
                t.insert(Tag::Bottom);
            }
            if (y - y1).abs() < tol {
                t.insert(Tag::Top);
            }
            tags.push(t);
        }
    }
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let a = idx(i, j);
            let b = idx(i + 1, j);
            let c = idx(i + 1, j + 1);
            let d = idx(i, j + 1);
            cells.push([a, b, c]);
            cells.push([a, c, d]);
        }
    }
    Mesh::new(points, cells, tags)
}

/// Unit square with `n` cells per side whose interior nodes are moved by up
/// to `amplitude` cell widths in each direction and whose squares are split
/// along randomly chosen diagonals. Tags are those of the unperturbed grid.
pub fn gen_jittered_square(n: usize, amplitude: f64, seed: u64) -> Result<Mesh> {
    if !(0.0..0.5).contains(&amplitude) {
        return Err(Error::InvalidParameter("jitter amplitude must lie in [0, 0.5)".into()));
    }
    let base = gen_structured_rect(n, n, (0.0, 1.0), (0.0, 1.0), Grading::Uniform)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1.0 / n as f64;
    let points: Vec<Point2> = base
        .points()
        .iter()
        .zip(base.all_node_tags())
        .map(|(&p, t)| {
            if t.is_interior() {
                let dx = rng.gen_range(-amplitude..=amplitude) * h;
                let dy = rng.gen_range(-amplitude..=amplitude) * h;
                Point2::new(p.x + dx, p.y + dy)
            } else {
                p
            }
        })
        .collect();
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            let ccw = |t: [usize; 3]| (points[t[1]] - points[t[0]]).cross(points[t[2]] - points[t[0]]) > 0.0;
            let ac = [[a, b, c], [a, c, d]];
            let bd = [[a, b, d], [b, c, d]];
            let (ac_ok, bd_ok) = (ac.iter().all(|&t| ccw(t)), bd.iter().all(|&t| ccw(t)));
            // a nonconvex quad admits only one diagonal
            let pick = if rng.gen_bool(0.5) { (ac, ac_ok, bd) } else { (bd, bd_ok, ac) };
            cells.extend(if pick.1 { pick.0 } else { pick.2 });
        }
    }
    Mesh::new(points, cells, base.all_node_tags().to_vec())
}

/// Lattice of equilateral triangles: `rows` strips, each with `cols` upward
/// triangles. Odd node rows are shifted by half a side. The row height is
/// snapped to a dyadic value so every cell is bitwise congruent; the side
/// ratio error this introduces is below 1e-12.
pub fn gen_equilateral_grid(rows: usize, cols: usize, side: f64) -> Result<Mesh> {
    if rows == 0 || cols == 0 || !(side > 0.0) {
        return Err(Error::InvalidParameter("equilateral grid needs rows, cols, side > 0".into()));
    }
    let scale = 2f64.powi(44);
    let height = (side * 3f64.sqrt() / 2.0 * scale).round() / scale;
    let per_row = cols + 1;
    let idx = |i: usize, j: usize| j * per_row + i;
    let mut points = Vec::new();
    for j in 0..=rows {
        let shift = if j % 2 == 1 { 0.5 * side } else { 0.0 };
        for i in 0..=cols {
            points.push(Point2::new(i as f64 * side + shift, j as f64 * height));
        }
    }
    let mut cells = Vec::new();
    for j in 0..rows {
        for i in 0..cols {
            if j % 2 == 0 {
                // lower row unshifted
                cells.push([idx(i, j), idx(i + 1, j), idx(i, j + 1)]);
                cells.push([idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            } else {
                // lower row shifted right by half a side
                cells.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
                cells.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            }
        }
    }
    // boundary nodes pick up the generic tag from the edge census
    let tags = vec![TagSet::EMPTY; points.len()];
    Mesh::new(points, cells, tags)
}

fn geometric_ratio(first: f64, total: f64, layers: usize) -> f64 {
    let sum = |q: f64| -> f64 {
        if (q - 1.0).abs() < 1e-12 {
            first * layers as f64
        } else {
            first * (q.powi(layers as i32) - 1.0) / (q - 1.0)
        }
    };
    let (mut lo, mut hi) = (1e-6, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sum(mid) < total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Radii of an O-grid with geometric spacing whose first layer thickness
/// equals the surface arc length.
pub(crate) fn ogrid_radii(a: f64, r_far: f64, n_theta: usize, n_r: usize) -> Vec<f64> {
    let first = 2.0 * PI * a / n_theta as f64;
    let q = geometric_ratio(first, r_far - a, n_r);
    let mut radii = Vec::with_capacity(n_r + 1);
    let mut r = a;
    let mut dr = first;
    radii.push(a);
    for _ in 0..n_r {
        r += dr;
        dr *= q;
        radii.push(r);
    }
    // Remove accumulated rounding so the outer ring sits exactly at r_far.
    let s = (r_far - a) / (radii[n_r] - a);
    for r in radii.iter_mut() {
        *r = a + (*r - a) * s;
    }
    radii[n_r] = r_far;
    radii
}

/// Annular O-grid about `center`: inner ring (radius `a`) tagged `Surface`,
/// outer ring (radius `r_far`) tagged `Farfield`. Node `j * n_theta + k` is
/// the `k`-th node of ring `j`; surface node `k` sits at angle `2 pi k / n_theta`.
pub fn gen_ogrid(
    center: Point2,
    a: f64,
    r_far: f64,
    n_theta: usize,
    n_r: usize,
    style: OgridStyle,
) -> Result<Mesh> {
    if !(a > 0.0 && r_far > a) || n_theta < 8 || n_r < 2 {
        return Err(Error::InvalidParameter(format!(
            "O-grid needs 0 < a < R_far, n_theta >= 8, n_r >= 2 (got a={a}, R={r_far}, {n_theta}x{n_r})"
        )));
    }
    let radii = ogrid_radii(a, r_far, n_theta, n_r);
    let dtheta = 2.0 * PI / n_theta as f64;
    let offset = |j: usize| match style {
        OgridStyle::Staggered if j % 2 == 1 => 0.5 * dtheta,
        _ => 0.0,
    };
    let mut points = Vec::with_capacity(n_theta * (n_r + 1));
    let mut tags = Vec::with_capacity(points.capacity());
    for (j, &r) in radii.iter().enumerate() {
        for k in 0..n_theta {
            let th = k as f64 * dtheta + offset(j);
            points.push(center + Point2::new(r * th.cos(), r * th.sin()));
            tags.push(if j == 0 {
                TagSet::single(Tag::Surface)
            } else if j == n_r {
                TagSet::single(Tag::Farfield)
            } else {
                TagSet::EMPTY
            });
        }
    }
    let idx = |j: usize, k: usize| j * n_theta + (k % n_theta);
    let mut cells = Vec::with_capacity(2 * n_theta * n_r);
    for j in 0..n_r {
        for k in 0..n_theta {
            let (a0, b0, c0, d0) = (idx(j, k), idx(j, k + 1), idx(j + 1, k + 1), idx(j + 1, k));
            match style {
                OgridStyle::Radial => {
                    if 2 * k < n_theta {
                        cells.push([a0, b0, c0]);
                        cells.push([a0, c0, d0]);
                    } else {
                        cells.push([a0, b0, d0]);
                        cells.push([b0, c0, d0]);
                    }
                }
                OgridStyle::Staggered => {
                    if j % 2 == 0 {
                        // outer node k lies between inner k and k+1
                        cells.push([a0, b0, d0]);
                        cells.push([b0, c0, d0]);
                    } else {
                        // inner node k lies between outer k and k+1
                        cells.push([a0, c0, d0]);
                        cells.push([a0, b0, c0]);
                    }
                }
            }
        }
    }
    Mesh::new(points, cells, tags)
}

/// Radial O-grid about a cylinder of radius `a` centered at the origin.
pub fn gen_ogrid_cylinder(a: f64, r_far: f64, n_theta: usize, n_r: usize) -> Result<Mesh> {
    gen_ogrid(Point2::default(), a, r_far, n_theta, n_r, OgridStyle::Radial)
}

/// Split every triangle into four through its edge midpoints. Midpoints of
/// boundary edges inherit the edge tag; midpoints of curved boundaries are
/// not projected.
pub fn refine_uniform(mesh: &Mesh) -> Result<Mesh> {
    let mut points = mesh.points().to_vec();
    let mut tags = mesh.all_node_tags().to_vec();
    let mut boundary_tag: HashMap<(usize, usize), Tag> = HashMap::new();
    for e in mesh.boundary_edges() {
        let (a, b) = (e.nodes[0], e.nodes[1]);
        boundary_tag.insert((a.min(b), a.max(b)), e.tag);
    }
    let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cells = Vec::with_capacity(4 * mesh.num_triangles());
    for tri in mesh.triangles() {
        let n = tri.nodes;
        let mut m = [0usize; 3];
        for i in 0..3 {
            let a = n[(i + 1) % 3];
            let b = n[(i + 2) % 3];
            let key = (a.min(b), a.max(b));
            m[i] = *mid.entry(key).or_insert_with(|| {
                let pa = mesh.point(a);
                let pb = mesh.point(b);
                points.push(Point2::new(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)));
                tags.push(boundary_tag.get(&key).map_or(TagSet::EMPTY, |&t| TagSet::single(t)));
                points.len() - 1
            });
        }
        // m[i] is opposite n[i]
        cells.push([n[0], m[2], m[1]]);
        cells.push([m[2], n[1], m[0]]);
        cells.push([m[1], m[0], n[2]]);
        cells.push([m[0], m[1], m[2]]);
    }
    Mesh::new(points, cells, tags)
}

impl Mesh {
    /// Apply an orientation-preserving point map (a conformal map, a shift,
    /// a scaling) to every node.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Mesh> {
        let points: Vec<Point2> = self.points().iter().map(|&p| f(p)).collect();
        let out = self.with_points(points);
        if let Some(t) = out.geometries().iter().position(|g| !(g.area > 0.0)) {
            return Err(Error::DegenerateTriangle(t));
        }
        Ok(out)
    }
}
