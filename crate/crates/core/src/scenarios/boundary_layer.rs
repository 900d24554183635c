//! Laminar flat-plate boundary layer in `(u, v, omega)` compared with the
//! Blasius similarity solution.

use super::{error_norms, ErrorReport};
use crate::analytic::{blasius_eval, BlasiusProfile};
use crate::error::{Error, Result};
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::{element_gradient, newton_solve, BcSet, BcTerm, BoundaryLayer, NewtonOptions, NewtonState, NodalField, RowScope};
use crate::mesh::{gen_structured_rect, Grading, Mesh, Tag, TagSet};

const U: usize = 0;
const V: usize = 1;
const W: usize = 2;

#[derive(Debug, Clone)]
pub struct BoundaryLayerOptions {
    /// Nodes in `x` and `y`.
    pub nx: usize,
    pub ny: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Geometric growth of the vertical spacing away from the plate.
    pub grading: f64,
    /// Outer velocity.
    pub u_outer: f64,
    /// Restart length and cap of the linear solves; the loose setting
    /// reaches the same solution in more Newton steps.
    pub gmres: GmresSettings,
    pub newton: NewtonOptions,
}

impl Default for BoundaryLayerOptions {
    fn default() -> Self {
        Self {
            nx: 65,
            ny: 33,
            x_range: (0.0, 1.0),
            y_range: (0.0, 10.0),
            grading: 1.1,
            u_outer: 1.0,
            gmres: GmresSettings::STRICT,
            newton: NewtonOptions {
                tol: 1e-9,
                functional_tol: None,
                max_iter: 50,
                ..NewtonOptions::default()
            },
        }
    }
}

impl BoundaryLayerOptions {
    pub fn mesh(&self) -> Result<Mesh> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameter("boundary layer grid needs at least 2x2 nodes".into()));
        }
        gen_structured_rect(
            self.nx - 1,
            self.ny - 1,
            self.x_range,
            self.y_range,
            Grading::Geometric { ratio: self.grading },
        )
    }

    pub fn solver(&self) -> LinearSolver {
        LinearSolver::Gmres {
            settings: self.gmres,
            tol: 1e-10,
        }
    }
}

/// Deviations of the numerical solution from Blasius.
#[derive(Debug, Clone, PartialEq)]
pub struct BlComparison {
    /// Abscissa of the profile column.
    pub x_profile: f64,
    /// `max |u - u_B| / U` down the profile column.
    pub u_profile_dev: f64,
    /// `max |omega - f''(0)/sqrt x| / (f''(0)/sqrt x)` along the plate over
    /// `wall_range`.
    pub wall_omega_dev: f64,
    pub wall_range: (f64, f64),
    /// Rows `y, eta, u, u_blasius, v, v_blasius, omega, omega_blasius`.
    pub profile: crate::output::CsvTable,
    /// Rows `x, omega_wall, omega_blasius`.
    pub wall: crate::output::CsvTable,
}

#[derive(Debug, Clone)]
pub struct BoundaryLayerResult {
    pub mesh: Mesh,
    pub state: NewtonState,
    /// Errors against Blasius over nodes with `x > 0`.
    pub report: ErrorReport,
    pub comparison: BlComparison,
    /// Area-weighted L2 norm of the element continuity residual.
    pub continuity: f64,
}

/// Boundary treatment, each node in one class:
/// - plate (bottom, `x > x0`): `u = v = 0`, `omega` from the interior equations;
/// - inflow (left, including the leading edge corner): `u = U` except at the
///   plate corner where `u = 0`, and `v = omega = 0`;
/// - top: `u = U`, `omega = 0`, `v` from the interior equations;
/// - outflow (right): `u` from the interior equations, `v` and `omega` from
///   `((v_x)^2 + (omega_x)^2) Omega / 2` on the elements touching it.
///
/// Prescribed rows replace the element equations.
pub fn boundary_conditions(mesh: &Mesh, u_outer: f64) -> BcSet {
    let mut bcs = BcSet::new();
    let fix = |bcs: &mut BcSet, i: usize, c: usize, value: f64| {
        bcs.pin(i, &[c], |_| value);
    };
    let mut outflow_nodes = vec![false; mesh.num_nodes()];
    for i in 0..mesh.num_nodes() {
        let t: TagSet = mesh.node_tags(i);
        if t.contains(Tag::Left) {
            let u = if t.contains(Tag::Bottom) { 0.0 } else { u_outer };
            fix(&mut bcs, i, U, u);
            fix(&mut bcs, i, V, 0.0);
            fix(&mut bcs, i, W, 0.0);
        } else if t.contains(Tag::Bottom) {
            fix(&mut bcs, i, U, 0.0);
            fix(&mut bcs, i, V, 0.0);
        } else if t.contains(Tag::Top) {
            fix(&mut bcs, i, U, u_outer);
            fix(&mut bcs, i, W, 0.0);
        } else if t.contains(Tag::Right) {
            bcs.replace_rows(i, V).replace_rows(i, W);
            outflow_nodes[i] = true;
        }
    }
    for (t, tri) in mesh.triangles().iter().enumerate() {
        if tri.nodes.iter().any(|&n| outflow_nodes[n]) {
            bcs.add_scoped(BcTerm::OutflowX { element: t, comps: vec![V, W] }, RowScope::ReplacedOnly);
        }
    }
    bcs
}

/// `[sum_T (u_x + v_y)^2 Omega_T]^(1/2)`.
pub fn continuity_residual(mesh: &Mesh, field: &NodalField) -> Result<f64> {
    let mut s = 0.0;
    for (tri, g) in mesh.triangles().iter().zip(mesh.geometries()) {
        let (ux, _) = element_gradient(g, tri.nodes.map(|n| field.get(n, U)))?;
        let (_, vy) = element_gradient(g, tri.nodes.map(|n| field.get(n, V)))?;
        s += (ux + vy).powi(2) * g.area;
    }
    Ok(s.sqrt())
}

fn compare(mesh: &Mesh, field: &NodalField, blasius: &BlasiusProfile, x0: f64, u_outer: f64) -> Result<BlComparison> {
    use crate::output::CsvTable;
    // profile column closest to the middle of the plate
    let x_profile = mesh
        .points()
        .iter()
        .map(|p| p.x)
        .min_by(|a, b| (a - 0.5).abs().total_cmp(&(b - 0.5).abs()))
        .ok_or_else(|| Error::InvalidParameter("empty mesh".into()))?;
    let mut column: Vec<usize> = (0..mesh.num_nodes()).filter(|&i| mesh.point(i).x == x_profile).collect();
    column.sort_by(|&i, &j| mesh.point(i).y.total_cmp(&mesh.point(j).y));
    let xs = x_profile - x0;
    let mut profile = CsvTable::new(["y", "eta", "u", "u_blasius", "v", "v_blasius", "omega", "omega_blasius"]);
    let mut u_dev = 0.0f64;
    for i in column {
        let y = mesh.point(i).y - mesh.point(0).y;
        let (ub, vb, wb) = blasius_eval(blasius, xs, y)?;
        let u = field.get(i, U);
        u_dev = u_dev.max((u - u_outer * ub).abs() / u_outer);
        profile.push(vec![y, y / xs.sqrt(), u, ub, field.get(i, V), vb, field.get(i, W), wb]);
    }
    let wall_range = (0.2, 0.9);
    let mut plate: Vec<usize> = mesh.nodes_with_tag(Tag::Bottom);
    plate.sort_by(|&i, &j| mesh.point(i).x.total_cmp(&mesh.point(j).x));
    let mut wall = CsvTable::new(["x", "omega_wall", "omega_blasius"]);
    let mut w_dev = 0.0f64;
    for i in plate {
        let x = mesh.point(i).x - x0;
        if !(x > 0.0) {
            continue;
        }
        let exact = blasius.fpp0 / x.sqrt();
        let w = field.get(i, W);
        wall.push(vec![x, w, exact]);
        if x >= wall_range.0 - 1e-12 && x <= wall_range.1 + 1e-12 {
            w_dev = w_dev.max((w - exact).abs() / exact);
        }
    }
    Ok(BlComparison {
        x_profile,
        u_profile_dev: u_dev,
        wall_omega_dev: w_dev,
        wall_range,
        profile,
        wall,
    })
}

/// Newton solve of the boundary-layer system from `u = U` off the plate,
/// `v = omega = 0`.
pub fn solve_boundary_layer(opts: &BoundaryLayerOptions) -> Result<BoundaryLayerResult> {
    let mesh = opts.mesh()?;
    let bcs = boundary_conditions(&mesh, opts.u_outer);
    let field0 = NodalField::from_fn(&mesh, 3, |i, _| {
        let on_plate = mesh.node_tags(i).contains(Tag::Bottom);
        vec![if on_plate { 0.0 } else { opts.u_outer }, 0.0, 0.0]
    });
    let newton = NewtonOptions {
        solver: opts.solver(),
        ..opts.newton
    };
    let state = newton_solve(&BoundaryLayer::default(), &mesh, field0, &bcs, &newton)?;
    let blasius = BlasiusProfile::standard()?;
    let (x0, y0) = (opts.x_range.0, opts.y_range.0);
    let report = error_norms(&mesh, &state.field, &["u", "v", "omega"], |p| {
        let (u, v, w) = blasius_eval(&blasius, p.x - x0, p.y - y0)?;
        Ok(vec![u * opts.u_outer, v, w])
    });
    let comparison = compare(&mesh, &state.field, &blasius, x0, opts.u_outer)?;
    let continuity = continuity_residual(&mesh, &state.field)?;
    Ok(BoundaryLayerResult {
        mesh,
        state,
        report,
        comparison,
        continuity,
    })
}
