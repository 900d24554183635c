use std::collections::{HashMap, HashSet};

use super::stencil::{build_cc_stencil, CcStencil, Placement};
use crate::analytic::farfield_stream;
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point2, Tag};

/// Cell values plus the ghost values of surface faces.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub values: Vec<f64>,
    /// Ghost face indices (into `CcStencil::ghosts`) on the surface.
    pub surface_ghosts: Vec<usize>,
    /// `2 psi* - psi_cell` for each entry of `surface_ghosts`.
    pub ghost_values: Vec<f64>,
}

impl CellField {
    pub fn new(stencil: &CcStencil, values: Vec<f64>) -> Self {
        let surface_ghosts: Vec<usize> = (0..stencil.ghosts.len())
            .filter(|&g| stencil.ghosts[g].tag == Tag::Surface)
            .collect();
        let ghost_values = vec![0.0; surface_ghosts.len()];
        Self {
            values,
            surface_ghosts,
            ghost_values,
        }
    }

    /// Reflect every surface cell about `psi_star`.
    pub fn update_ghosts(&mut self, stencil: &CcStencil, psi_star: f64) {
        for (v, &g) in self.ghost_values.iter_mut().zip(&self.surface_ghosts) {
            *v = 2.0 * psi_star - self.values[stencil.ghosts[g].cell];
        }
    }
}

/// One lexicographic Gauss-Seidel (or SOR, `omega != 1`) sweep. `boundary[g]`
/// is the prescribed value on ghost face `g`; the ghost itself carries
/// `2 boundary[g] - psi_cell`, folded into the update implicitly. Returns the
/// largest change.
pub fn gauss_seidel_sweep(stencil: &CcStencil, psi: &mut [f64], boundary: &[f64], omega: f64) -> Result<f64> {
    let mut max_change: f64 = 0.0;
    for t in 0..psi.len() {
        // residual form: a field that already satisfies the stencil does not move
        let p = psi[t];
        let mut res = 0.0;
        let mut den = stencil.diag[t];
        for &(s, c) in &stencil.neighbors[t] {
            res += c * (psi[s] - p);
        }
        for &g in &stencil.cell_ghosts[t] {
            let c2 = 2.0 * stencil.ghosts[g].coef;
            res += c2 * (boundary[g] - p);
            den += c2;
        }
        if den == 0.0 {
            return Err(Error::ZeroDiagonal(t));
        }
        let delta = omega * res / den;
        psi[t] += delta;
        max_change = max_change.max(delta.abs());
    }
    Ok(max_change)
}

/// Average of the trailing edge cells, written to every surface ghost.
pub fn kutta_surface_update(stencil: &CcStencil, field: &mut CellField, te_cells: &[usize]) -> Result<f64> {
    if te_cells.is_empty() {
        return Err(Error::TrailingEdgeNotFound);
    }
    let psi_star = te_cells.iter().map(|&t| field.values[t]).sum::<f64>() / te_cells.len() as f64;
    field.update_ghosts(stencil, psi_star);
    Ok(psi_star)
}

/// Surface node with the sharpest corner, and the downstream direction
/// bisecting the exterior angle there.
pub fn find_trailing_edge(mesh: &Mesh) -> Result<(usize, Point2)> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in mesh.boundary_edges().iter().filter(|e| e.tag == Tag::Surface) {
        adj.entry(e.nodes[0]).or_default().push(e.nodes[1]);
        adj.entry(e.nodes[1]).or_default().push(e.nodes[0]);
    }
    let mut best: Option<(f64, usize, Point2)> = None;
    let mut keys: Vec<usize> = adj.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let nb = &adj[&k];
        if nb.len() != 2 {
            continue;
        }
        let p = mesh.point(k);
        let a = mesh.point(nb[0]) - p;
        let b = mesh.point(nb[1]) - p;
        let (ua, ub) = (a * (1.0 / a.norm()), b * (1.0 / b.norm()));
        let angle = ua.dot(ub).clamp(-1.0, 1.0).acos();
        if best.map_or(true, |(ang, _, _)| angle < ang) {
            let s = ua + ub;
            best = Some((angle, k, -s * (1.0 / s.norm())));
        }
    }
    match best {
        // a smooth body has no corner sharper than a right angle
        Some((angle, node, dir)) if angle < std::f64::consts::FRAC_PI_2 => Ok((node, dir)),
        _ => Err(Error::TrailingEdgeNotFound),
    }
}

/// Cells immediately downstream of the trailing edge: the cell whose corner
/// at the trailing edge contains the downstream ray, or the two cells
/// sharing a mesh edge that lies along the ray.
pub fn trailing_edge_cells(mesh: &Mesh) -> Result<Vec<usize>> {
    let (te, dir) = find_trailing_edge(mesh)?;
    let p = mesh.point(te);
    let n2t = mesh.node_to_triangles();
    for &t in &n2t[te] {
        let tri = mesh.triangle(t);
        let j = tri.nodes.iter().position(|&n| n == te).unwrap();
        let e1 = mesh.point(tri.nodes[(j + 1) % 3]) - p;
        let e2 = mesh.point(tri.nodes[(j + 2) % 3]) - p;
        if e1.cross(dir) < 0.0 || dir.cross(e2) < 0.0 {
            continue;
        }
        let sector = e1.cross(e2).atan2(e1.dot(e2));
        let off1 = e1.cross(dir).atan2(e1.dot(dir));
        let off2 = dir.cross(e2).atan2(dir.dot(e2));
        let tol = 0.15 * sector;
        // neighbors[i] faces the edge opposite local node i
        let across = if off1 <= off2 && off1 < tol {
            tri.neighbors[(j + 2) % 3]
        } else if off2 < off1 && off2 < tol {
            tri.neighbors[(j + 1) % 3]
        } else {
            None
        };
        return Ok(match across {
            Some(s) => vec![t.min(s), t.max(s)],
            None => vec![t],
        });
    }
    Err(Error::TrailingEdgeNotFound)
}

/// Controls for [`solve_airfoil_stream`].
#[derive(Debug, Clone)]
pub struct CcOptions {
    pub placement: Placement,
    /// Relaxation factor; 1 is plain Gauss-Seidel.
    pub omega: f64,
    pub plateau_tol: f64,
    pub plateau_sweeps: usize,
    pub max_sweeps: usize,
    /// Explicit trailing edge cells instead of the geometric search.
    pub kutta_cells: Option<Vec<usize>>,
}

impl Default for CcOptions {
    fn default() -> Self {
        Self {
            placement: Placement::CircumcenterOrCentroid,
            omega: 1.0,
            plateau_tol: 1e-10,
            plateau_sweeps: 10,
            max_sweeps: 1_000_000,
            kutta_cells: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AirfoilSolution {
    pub stencil: CcStencil,
    pub field: CellField,
    pub psi_star: f64,
    /// `psi*` after every sweep.
    pub history: Vec<f64>,
    pub sweeps: usize,
    /// False when the sweep cap was hit before the plateau.
    pub converged: bool,
    pub kutta_cells: Vec<usize>,
    pub circulation: f64,
}

/// Stream function around a body: farfield ghosts carry the uniform flow
/// plus vortex `gamma`, surface ghosts the iterated `psi*`.
pub fn solve_airfoil_stream(mesh: &Mesh, alpha: f64, gamma: f64, opts: &CcOptions) -> Result<AirfoilSolution> {
    solve_airfoil_stream_with(mesh, opts, |p| farfield_stream(alpha, gamma, p.x, p.y))
}

/// As [`solve_airfoil_stream`] with arbitrary farfield data.
pub fn solve_airfoil_stream_with(
    mesh: &Mesh,
    opts: &CcOptions,
    farfield: impl Fn(Point2) -> Result<f64>,
) -> Result<AirfoilSolution> {
    let stencil = build_cc_stencil(mesh, opts.placement)?;
    let kutta = match &opts.kutta_cells {
        Some(c) if !c.is_empty() => c.clone(),
        Some(_) => return Err(Error::TrailingEdgeNotFound),
        None => trailing_edge_cells(mesh)?,
    };
    let init = stencil.centers.iter().map(|&c| farfield(c)).collect::<Result<Vec<_>>>()?;
    let mut field = CellField::new(&stencil, init);
    let mut boundary = vec![0.0; stencil.ghosts.len()];
    for (g, gf) in stencil.ghosts.iter().enumerate() {
        if gf.tag != Tag::Surface {
            boundary[g] = farfield(gf.midpoint)?;
        }
    }
    let surface = field.surface_ghosts.clone();
    let set_surface = |boundary: &mut [f64], v: f64| {
        for &g in &surface {
            boundary[g] = v;
        }
    };
    let mut psi_star = kutta_surface_update(&stencil, &mut field, &kutta)?;
    set_surface(&mut boundary, psi_star);
    let mut history = Vec::new();
    let mut quiet = 0;
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        gauss_seidel_sweep(&stencil, &mut field.values, &boundary, opts.omega)?;
        sweeps += 1;
        let next = kutta_surface_update(&stencil, &mut field, &kutta)?;
        set_surface(&mut boundary, next);
        history.push(next);
        quiet = if (next - psi_star).abs() < opts.plateau_tol { quiet + 1 } else { 0 };
        psi_star = next;
        if quiet >= opts.plateau_sweeps {
            converged = true;
            break;
        }
    }
    let circulation = surface_circulation(&stencil, &field.values, psi_star);
    Ok(AirfoilSolution {
        stencil,
        field,
        psi_star,
        history,
        sweeps,
        converged,
        kutta_cells: kutta,
        circulation,
    })
}

/// Circulation (clockwise positive) as the flux of `grad psi` out of the
/// body through the surface ghost faces.
pub fn surface_circulation(stencil: &CcStencil, psi: &[f64], psi_star: f64) -> f64 {
    stencil
        .ghosts
        .iter()
        .filter(|g| g.tag == Tag::Surface)
        .map(|g| 2.0 * g.coef * (psi[g.cell] - psi_star))
        .sum()
}

/// Circulation (clockwise positive) as the outward flux of `grad psi` across
/// the closed contour of faces around the ring of cells touching the
/// surface. Face velocities are the two-point gradients `(psi_2 - psi_1)/d`.
pub fn estimate_circulation(mesh: &Mesh, stencil: &CcStencil, psi: &[f64]) -> Result<f64> {
    let ring: HashSet<usize> = (0..mesh.num_triangles())
        .filter(|&t| {
            mesh.triangle(t)
                .nodes
                .iter()
                .any(|&n| mesh.node_tags(n).contains(Tag::Surface))
        })
        .collect();
    if ring.is_empty() {
        return Err(Error::ContourNotClosed);
    }
    let mut degree: HashMap<usize, usize> = HashMap::new();
    let mut flux = 0.0;
    let mut faces = 0;
    let mut ring_sorted: Vec<usize> = ring.iter().copied().collect();
    ring_sorted.sort_unstable();
    for &t in &ring_sorted {
        let tri = mesh.triangle(t);
        for i in 0..3 {
            let Some(s) = tri.neighbors[i] else { continue };
            if ring.contains(&s) {
                continue;
            }
            let c = stencil
                .neighbors[t]
                .iter()
                .find(|x| x.0 == s)
                .map(|x| x.1)
                .ok_or(Error::ContourNotClosed)?;
            flux += c * (psi[s] - psi[t]);
            faces += 1;
            for k in [tri.nodes[(i + 1) % 3], tri.nodes[(i + 2) % 3]] {
                *degree.entry(k).or_default() += 1;
            }
        }
    }
    if faces == 0 || degree.values().any(|&d| d % 2 != 0) {
        return Err(Error::ContourNotClosed);
    }
    Ok(flux)
}
