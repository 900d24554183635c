//! Flow around a Kármán-Trefftz airfoil: the cell-centered stream function
//! circulation study and the least-squares velocity solve.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{error_norms, fan_out, surface_loop, surface_normal_at_node, ErrorReport};
use crate::analytic::{airfoil_farfield_velocity, FarfieldMode, KarmanTrefftz};
use crate::cc_laplace::{find_trailing_edge, solve_airfoil_stream, solve_airfoil_stream_with, CcOptions};
use crate::error::{Error, Result};
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::{newton_solve, BcSet, BcTerm, CauchyRiemann, NewtonOptions, NewtonState, NodalField};
use crate::mesh::{gen_ogrid, Mesh, OgridStyle, Point2, Tag};
use crate::output::CsvTable;

/// Radial intervals giving cells about as deep as they are wide.
pub fn isotropic_layers(n_theta: usize, a: f64, r_far: f64) -> usize {
    let q = 1.0 + 2.0 * PI / n_theta as f64;
    ((r_far / a).ln() / q.ln()).ceil().max(2.0) as usize
}

/// O-grid around the preimage circle mapped onto the airfoil. Surface node 0
/// is the trailing edge.
pub fn airfoil_mesh(kt: &KarmanTrefftz, n_theta: usize, n_r: usize, r_far: f64, style: OgridStyle) -> Result<Mesh> {
    let c = kt.circle_center();
    let circle = gen_ogrid(Point2::new(c.re, c.im), kt.a, r_far, n_theta, n_r, style)?;
    circle.map_points(|p| {
        let z = kt.map(Complex64::new(p.x, p.y)).expect("O-grid nodes lie outside the circle");
        Point2::new(z.re, z.im)
    })
}

/// One resolution of the circulation study.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculationLevel {
    pub surface_points: usize,
    pub cells: usize,
    pub circulation: f64,
    pub error: f64,
    pub sweeps: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculationStudy {
    pub exact: f64,
    pub levels: Vec<CirculationLevel>,
}

impl CirculationStudy {
    /// True when the error shrinks at every refinement.
    pub fn monotone(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].error < w[0].error)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["surface_points", "cells", "gamma", "gamma_exact", "error", "sweeps"]);
        for l in &self.levels {
            t.push(vec![
                l.surface_points as f64,
                l.cells as f64,
                l.circulation,
                self.exact,
                l.error,
                l.sweeps as f64,
            ]);
        }
        t
    }
}

/// Stream function imposed on the outer boundary of the circulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StreamFarfield {
    /// Uniform flow plus a point vortex of the exact circulation.
    #[default]
    Vortex,
    /// The exact stream function of the mapped flow.
    Exact,
}

/// Cell-centered stream function on staggered O-grids with the given
/// surface counts. The surface value is iterated from the trailing edge
/// cells.
pub fn circulation_study(
    kt: &KarmanTrefftz,
    alpha: f64,
    surface_counts: &[usize],
    r_far: f64,
    farfield: StreamFarfield,
    cc: &CcOptions,
) -> Result<CirculationStudy> {
    let exact = kt.kutta_circulation(alpha);
    let levels = fan_out(surface_counts.to_vec(), |n| -> Result<CirculationLevel> {
        let n_r = isotropic_layers(n, kt.a, r_far);
        let mesh = airfoil_mesh(kt, n, n_r, r_far, OgridStyle::Staggered)?;
        let sol = match farfield {
            StreamFarfield::Vortex => solve_airfoil_stream(&mesh, alpha, exact, cc)?,
            StreamFarfield::Exact => solve_airfoil_stream_with(&mesh, cc, |p| kt.exact_stream(alpha, p))?,
        };
        Ok(CirculationLevel {
            surface_points: n,
            cells: mesh.num_triangles(),
            circulation: sol.circulation,
            error: (sol.circulation - exact).abs(),
            sweeps: sol.sweeps,
            converged: sol.converged,
        })
    });
    Ok(CirculationStudy {
        exact,
        levels: levels.into_iter().collect::<Result<_>>()?,
    })
}

/// Kutta pair: the two triangles sharing the mesh edge that leaves the
/// trailing edge node most nearly along the downstream bisector. Returns the
/// vertices off that edge and its unit normal.
pub fn kutta_pair(mesh: &Mesh) -> Result<(usize, usize, Point2)> {
    let (te, dir) = find_trailing_edge(mesh)?;
    let p = mesh.point(te);
    let n2t = mesh.node_to_triangles();
    let mut best: Option<(f64, usize)> = None;
    for &t in &n2t[te] {
        for &n in &mesh.triangle(t).nodes {
            if n == te || !mesh.node_tags(n).is_interior() {
                continue;
            }
            let e = mesh.point(n) - p;
            let cos = e.dot(dir) / e.norm();
            if best.is_none_or(|b| cos > b.0) {
                best = Some((cos, n));
            }
        }
    }
    let (_, far) = best.ok_or(Error::TrailingEdgeNotFound)?;
    kutta_pair_on_edge(mesh, te, far)
}

/// Kutta pair on the explicit edge `(a, b)`.
pub fn kutta_pair_on_edge(mesh: &Mesh, a: usize, b: usize) -> Result<(usize, usize, Point2)> {
    let n2t = mesh.node_to_triangles();
    let sharing: Vec<usize> = n2t[a]
        .iter()
        .copied()
        .filter(|&t| mesh.triangle(t).nodes.contains(&b))
        .collect();
    if sharing.len() != 2 {
        return Err(Error::TrailingEdgeNotFound);
    }
    let off = |t: usize| *mesh.triangle(t).nodes.iter().find(|&&n| n != a && n != b).unwrap();
    let e = mesh.point(b) - mesh.point(a);
    let normal = e.perp_cw() * (1.0 / e.norm());
    Ok((off(sharing[0]), off(sharing[1]), normal))
}

#[derive(Debug, Clone)]
pub struct AirfoilLsqOptions {
    pub alpha: f64,
    pub farfield_mode: FarfieldMode,
    pub r_far: f64,
    pub newton: NewtonOptions,
    /// Explicit Kutta edge `(trailing edge node, downstream node)`.
    pub kutta_edge: Option<(usize, usize)>,
}

impl Default for AirfoilLsqOptions {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            farfield_mode: FarfieldMode::Corrected,
            r_far: 5.0,
            newton: NewtonOptions {
                solver: LinearSolver::Gmres {
                    settings: GmresSettings::STRICT,
                    tol: 1e-10,
                },
                functional_tol: None,
                ..NewtonOptions::default()
            },
            kutta_edge: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AirfoilLsqResult {
    pub state: NewtonState,
    pub report: ErrorReport,
    /// `x, y, u, v, u_exact, v_exact` around the surface from the trailing edge.
    pub surface: CsvTable,
    /// `(u_1 - u_2) . n` of the element averages at convergence.
    pub kutta_residual: f64,
    pub kutta_nodes: (usize, usize),
}

/// Cauchy-Riemann solve with farfield velocities, tangency along averaged
/// surface normals and the Kutta pair term.
pub fn solve_airfoil(mesh: &Mesh, kt: &KarmanTrefftz, opts: &AirfoilLsqOptions) -> Result<AirfoilLsqResult> {
    let gamma = kt.kutta_circulation(opts.alpha);
    let mut bcs = BcSet::new();
    for i in mesh.nodes_with_tag(Tag::Farfield) {
        let p = mesh.point(i);
        let (u, v) = airfoil_farfield_velocity(opts.alpha, gamma, p.x, p.y, opts.farfield_mode)?;
        bcs.pin(i, &[0, 1], |c| if c == 0 { u } else { v });
    }
    let surface = mesh.nodes_with_tag(Tag::Surface);
    for &i in &surface {
        bcs.add(BcTerm::Tangency {
            node: i,
            normal: surface_normal_at_node(mesh, i)?,
        });
    }
    let (ki, kj, kn) = match opts.kutta_edge {
        Some((a, b)) => kutta_pair_on_edge(mesh, a, b)?,
        None => kutta_pair(mesh)?,
    };
    bcs.add(BcTerm::KuttaPair { i: ki, j: kj, normal: kn });
    let field0 = NodalField::from_fn(mesh, 2, |_, _| vec![opts.alpha.cos(), opts.alpha.sin()]);
    let state = newton_solve(&CauchyRiemann::default(), mesh, field0, &bcs, &opts.newton)?;
    let f = &state.field;
    let kutta_residual =
        ((f.get(ki, 0) - f.get(kj, 0)) * kn.x + (f.get(ki, 1) - f.get(kj, 1)) * kn.y) / 3.0;
    let report = error_norms(mesh, f, &["u", "v"], |p| {
        let (u, v) = kt.exact_velocity(opts.alpha, p)?;
        Ok(vec![u, v])
    });
    let (te, _) = find_trailing_edge(mesh)?;
    let mut table = CsvTable::new(["x", "y", "u", "v", "u_exact", "v_exact"]);
    for i in surface_loop(mesh, te)? {
        let p = mesh.point(i);
        let (ue, ve) = kt.exact_velocity(opts.alpha, p).unwrap_or((f64::NAN, f64::NAN));
        table.push(vec![p.x, p.y, f.get(i, 0), f.get(i, 1), ue, ve]);
    }
    Ok(AirfoilLsqResult {
        state,
        report,
        surface: table,
        kutta_residual,
        kutta_nodes: (ki, kj),
    })
}
