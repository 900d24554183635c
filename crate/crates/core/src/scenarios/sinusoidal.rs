//! Flow over a sinusoidal wall on the unit square, all-Dirichlet.

use super::{error_norms, fan_out, ErrorReport};
use crate::analytic::sinusoidal_wall;
use crate::error::{Error, Result};
use crate::linsolve::LinearSolver;
use crate::lsq::{newton_solve, BcSet, CauchyRiemann, NewtonOptions, NewtonState, NodalField};
use crate::mesh::{gen_structured_square, refine_uniform, Mesh, StructuredStyle};

#[derive(Debug, Clone)]
pub struct SinusoidalOptions {
    /// Cells per side of the base grid.
    pub n0: usize,
    pub refinements: usize,
    pub k: f64,
    /// Boundary rows carry only the Dirichlet terms. When unset the Dirichlet
    /// terms are added to the element equations instead.
    pub replace_boundary_rows: bool,
    pub newton: NewtonOptions,
}

impl Default for SinusoidalOptions {
    fn default() -> Self {
        Self {
            n0: 12,
            refinements: 3,
            k: 6.0 * std::f64::consts::PI,
            replace_boundary_rows: true,
            newton: NewtonOptions {
                functional_tol: None,
                solver: LinearSolver::Pcg { tol: 1e-10, max_iter: 100_000 },
                ..NewtonOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SinusoidalLevel {
    pub mesh: Mesh,
    pub state: NewtonState,
    pub report: ErrorReport,
    /// Unknowns of the linear systems.
    pub unknowns: usize,
    /// PCG iterations of the first correction.
    pub first_linear_iterations: usize,
}

/// One level: exact boundary values on every boundary node, uniform flow
/// as the initial guess.
pub fn solve_sinusoidal_on(mesh: Mesh, k: f64, replace: bool, newton: &NewtonOptions) -> Result<SinusoidalLevel> {
    let mut bcs = BcSet::new();
    for i in 0..mesh.num_nodes() {
        if !mesh.node_tags(i).is_interior() {
            let p = mesh.point(i);
            let (u, v) = sinusoidal_wall(k, p.x, p.y);
            if replace {
                bcs.pin(i, &[0, 1], |c| if c == 0 { u } else { v });
            } else {
                bcs.dirichlet(i, &[0, 1], |c| if c == 0 { u } else { v });
            }
        }
    }
    let field0 = NodalField::from_fn(&mesh, 2, |_, _| vec![1.0, 0.0]);
    let state = newton_solve(&CauchyRiemann::default(), &mesh, field0, &bcs, newton)?;
    let report = error_norms(&mesh, &state.field, &["u", "v"], |p| {
        let (u, v) = sinusoidal_wall(k, p.x, p.y);
        Ok(vec![u, v])
    });
    let first = state.history.first().map_or(0, |r| r.linear_iterations);
    Ok(SinusoidalLevel {
        unknowns: 2 * mesh.num_nodes(),
        mesh,
        state,
        report,
        first_linear_iterations: first,
    })
}

/// Solve on the `(n0+1)^2`-node right triangulation and `refinements`
/// uniform subdivisions of it. Levels run concurrently.
pub fn solve_sinusoidal_square(opts: &SinusoidalOptions) -> Result<Vec<SinusoidalLevel>> {
    if !(opts.k > 0.0) {
        return Err(Error::InvalidParameter(format!("wavenumber must be positive (got {})", opts.k)));
    }
    let mut meshes = vec![gen_structured_square(opts.n0, StructuredStyle::Right)?];
    for _ in 0..opts.refinements {
        let next = refine_uniform(meshes.last().unwrap())?;
        meshes.push(next);
    }
    fan_out(meshes, |m| solve_sinusoidal_on(m, opts.k, opts.replace_boundary_rows, &opts.newton))
        .into_iter()
        .collect()
}
