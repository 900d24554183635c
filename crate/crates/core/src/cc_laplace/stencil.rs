use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point2, Tag};

/// Where each cell's unknown lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Circumcenter for strictly acute cells, centroid otherwise.
    #[default]
    CircumcenterOrCentroid,
    Centroid,
}

/// Face between two cells, coefficient `l / d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub cells: [usize; 2],
    pub coef: f64,
}

/// Boundary face closed by a mirror-image ghost cell. The ghost sits at the
/// reflection of the cell center across the edge line, so the coefficient
/// is `l / (2 dist(center, edge line))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhostFace {
    pub cell: usize,
    /// Index into `Mesh::boundary_edges`.
    pub edge: usize,
    pub tag: Tag,
    pub coef: f64,
    pub midpoint: Point2,
}

/// Two-point flux stencil of the Laplacian on a cell-centered mesh.
#[derive(Debug, Clone)]
pub struct CcStencil {
    pub centers: Vec<Point2>,
    pub faces: Vec<Face>,
    pub ghosts: Vec<GhostFace>,
    /// Per cell: `(neighbor, coef)` for each interior face.
    pub neighbors: Vec<Vec<(usize, f64)>>,
    /// Per cell: indices into `ghosts`.
    pub cell_ghosts: Vec<Vec<usize>>,
    /// Sum of interior face coefficients of each cell.
    pub diag: Vec<f64>,
    pub areas: Vec<f64>,
}

/// Build the stencil of every cell.
pub fn build_cc_stencil(mesh: &Mesh, placement: Placement) -> Result<CcStencil> {
    let centers: Vec<Point2> = mesh
        .geometries()
        .iter()
        .map(|g| match placement {
            Placement::CircumcenterOrCentroid => g.center(),
            Placement::Centroid => g.centroid,
        })
        .collect();
    let nt = mesh.num_triangles();
    let mut faces = Vec::new();
    let mut neighbors = vec![Vec::with_capacity(3); nt];
    let mut diag = vec![0.0; nt];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for (i, nb) in tri.neighbors.iter().enumerate() {
            let Some(s) = *nb else { continue };
            if s < t {
                continue;
            }
            let l = mesh.geometry(t).edge_lengths[i];
            let d = centers[t].dist(centers[s]);
            if !(d > 1e-14 * l) {
                return Err(Error::CoincidentCenters(t, s));
            }
            let coef = l / d;
            faces.push(Face { cells: [t, s], coef });
            neighbors[t].push((s, coef));
            neighbors[s].push((t, coef));
            diag[t] += coef;
            diag[s] += coef;
        }
    }
    let mut ghosts = Vec::new();
    let mut cell_ghosts = vec![Vec::new(); nt];
    for (k, e) in mesh.boundary_edges().iter().enumerate() {
        let a = mesh.point(e.nodes[0]);
        let b = mesh.point(e.nodes[1]);
        let l = a.dist(b);
        let dist = ((b - a).cross(centers[e.triangle] - a) / l).abs();
        if !(dist > 1e-14 * l) {
            return Err(Error::CoincidentCenters(e.triangle, e.triangle));
        }
        cell_ghosts[e.triangle].push(ghosts.len());
        ghosts.push(GhostFace {
            cell: e.triangle,
            edge: k,
            tag: e.tag,
            coef: l / (2.0 * dist),
            midpoint: Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y)),
        });
    }
    Ok(CcStencil {
        centers,
        faces,
        ghosts,
        neighbors,
        cell_ghosts,
        diag,
        areas: mesh.geometries().iter().map(|g| g.area).collect(),
    })
}

impl CcStencil {
    pub fn num_cells(&self) -> usize {
        self.centers.len()
    }

    /// Discrete Laplacian flux balance of cell `t`, ghost values included:
    /// `sum_f c_f (psi_f - psi_t) + sum_g 2 c_g (psi_b - psi_t)`.
    pub fn residual(&self, psi: &[f64], boundary: &[f64], t: usize) -> f64 {
        let mut r = 0.0;
        for &(s, c) in &self.neighbors[t] {
            r += c * (psi[s] - psi[t]);
        }
        for &g in &self.cell_ghosts[t] {
            r += 2.0 * self.ghosts[g].coef * (boundary[g] - psi[t]);
        }
        r
    }
}
