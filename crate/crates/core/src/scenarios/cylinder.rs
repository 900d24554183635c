//! Potential flow past a circular cylinder with circulation.

use std::f64::consts::PI;

use super::{error_norms, surface_loop, ErrorReport};
use crate::analytic::cylinder_flow;
use crate::error::{Error, Result};
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::{newton_solve, BcSet, BcTerm, CauchyRiemann, NewtonOptions, NewtonState, NodalField};
use crate::mesh::{gen_ogrid_cylinder, Mesh, Point2, Tag};

/// `(surface points, radial intervals)` of the two reference O-grids.
pub const CYLINDER_GRIDS: [(usize, usize); 2] = [(118, 15), (238, 22)];

#[derive(Debug, Clone)]
pub struct CylinderOptions {
    pub a: f64,
    pub u_inf: f64,
    pub r_far: f64,
    pub gamma: f64,
    pub newton: NewtonOptions,
}

impl Default for CylinderOptions {
    fn default() -> Self {
        Self {
            a: 0.5,
            u_inf: 1.0,
            r_far: 3.0,
            gamma: 0.0,
            newton: NewtonOptions {
                solver: LinearSolver::Gmres {
                    settings: GmresSettings::STRICT,
                    tol: 1e-10,
                },
                functional_tol: None,
                ..NewtonOptions::default()
            },
        }
    }
}

impl CylinderOptions {
    /// O-grid with `n_theta` surface points and `n_r` radial intervals.
    pub fn mesh(&self, n_theta: usize, n_r: usize) -> Result<Mesh> {
        gen_ogrid_cylinder(self.a, self.r_far, n_theta, n_r)
    }
}

/// Stagnation points extracted from a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StagnationFinding {
    /// Polar angles in degrees of the two surface speed minima, sorted, and
    /// the interpolated speeds there.
    Surface { angles_deg: [f64; 2], speeds: [f64; 2] },
    /// Minimum speed point on the vertical axis above the body.
    OffBody { point: Point2, speed: f64 },
}

#[derive(Debug, Clone)]
pub struct CylinderResult {
    pub state: NewtonState,
    pub report: ErrorReport,
    pub stagnation: StagnationFinding,
    /// `max |u . n|` over surface nodes.
    pub tangency_residual: f64,
}

/// Vertex of the parabola through `(-1, f0), (0, f1), (1, f2)`, clamped to
/// `[-1, 1]`, and the parabola's value there.
fn parabola_vertex(f0: f64, f1: f64, f2: f64) -> (f64, f64) {
    let curv = f0 - 2.0 * f1 + f2;
    if !(curv > 0.0) {
        return (0.0, f1);
    }
    let t = (0.5 * (f0 - f2) / curv).clamp(-1.0, 1.0);
    let val = f1 + 0.5 * (f2 - f0) * t + 0.5 * curv * t * t;
    (t, val)
}

fn polar_deg(p: Point2) -> f64 {
    p.y.atan2(p.x).to_degrees().rem_euclid(360.0)
}

/// Surface speed minima (two smallest local minima of speed squared along the
/// surface, refined by a quadratic fit in arc length), or the minimum speed
/// point on `x = 0` above the body when `off_body` is set.
pub fn find_stagnation(mesh: &Mesh, field: &NodalField, a: f64, off_body: bool) -> Result<StagnationFinding> {
    let start = mesh.nodes_with_tag(Tag::Surface).into_iter().next().ok_or(Error::ContourNotClosed)?;
    if off_body {
        return off_body_stagnation(mesh, field, a);
    }
    let ring = surface_loop(mesh, start)?;
    let n = ring.len();
    let s2: Vec<f64> = ring
        .iter()
        .map(|&i| field.get(i, 0).powi(2) + field.get(i, 1).powi(2))
        .collect();
    let mut minima: Vec<(f64, usize)> = (0..n)
        .filter(|&k| s2[k] <= s2[(k + n - 1) % n] && s2[k] < s2[(k + 1) % n])
        .map(|k| (s2[k], k))
        .collect();
    minima.sort_by(|x, y| x.0.total_cmp(&y.0));
    if minima.len() < 2 {
        return Err(Error::Solver("fewer than two surface speed minima".into()));
    }
    let mut found = [(0.0, 0.0); 2];
    for (slot, &(_, k)) in found.iter_mut().zip(&minima[..2]) {
        let (km, kp) = ((k + n - 1) % n, (k + 1) % n);
        let (t, val) = parabola_vertex(s2[km], s2[k], s2[kp]);
        // nodes are equally spaced in angle on an O-grid surface ring
        let th0 = polar_deg(mesh.point(ring[k]));
        let step = if t < 0.0 {
            angle_between(mesh.point(ring[km]), mesh.point(ring[k]))
        } else {
            angle_between(mesh.point(ring[k]), mesh.point(ring[kp]))
        };
        *slot = ((th0 + t * step).rem_euclid(360.0), val.max(0.0).sqrt());
    }
    found.sort_by(|x, y| x.0.total_cmp(&y.0));
    // report the pair in the order (right, left) of the body
    let [p, q] = found;
    let (first, second) = if q.0 - p.0 > 180.0 { (q, p) } else { (p, q) };
    Ok(StagnationFinding::Surface {
        angles_deg: [first.0, second.0],
        speeds: [first.1, second.1],
    })
}

/// Signed angle in degrees swept from `p` to `q` about the origin.
fn angle_between(p: Point2, q: Point2) -> f64 {
    p.cross(q).atan2(p.dot(q)).to_degrees()
}

fn off_body_stagnation(mesh: &Mesh, field: &NodalField, a: f64) -> Result<StagnationFinding> {
    let (u, v) = (field.component(0), field.component(1));
    let speed2 = |y: f64| -> Option<f64> {
        let p = Point2::new(0.0, y);
        Some(mesh.interpolate(&u, p)?.powi(2) + mesh.interpolate(&v, p)?.powi(2))
    };
    let y_max = mesh.points().iter().map(|p| p.y).fold(f64::MIN, f64::max);
    let samples = 2000;
    let dy = (y_max - a) / samples as f64;
    let mut best: Option<(f64, f64)> = None;
    for k in 1..samples {
        let y = a + k as f64 * dy;
        if let Some(s) = speed2(y) {
            if best.is_none_or(|b| s < b.1) {
                best = Some((y, s));
            }
        }
    }
    let (y0, _) = best.ok_or_else(|| Error::Solver("symmetry axis lies outside the mesh".into()))?;
    // golden section on the bracket around the sampled minimum
    let (mut lo, mut hi) = ((y0 - dy).max(a), (y0 + dy).min(y_max));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |y: f64| speed2(y).unwrap_or(f64::INFINITY);
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let y = 0.5 * (lo + hi);
    Ok(StagnationFinding::OffBody {
        point: Point2::new(0.0, y),
        speed: f(y).sqrt(),
    })
}

/// Cauchy-Riemann solve with exact farfield values and surface tangency.
pub fn solve_cylinder(mesh: &Mesh, opts: &CylinderOptions) -> Result<CylinderResult> {
    let exact = |p: Point2| cylinder_flow(opts.a, opts.gamma, opts.u_inf, p.x, p.y);
    let mut bcs = BcSet::new();
    let surface = mesh.nodes_with_tag(Tag::Surface);
    for i in mesh.nodes_with_tag(Tag::Farfield) {
        let (u, v) = exact(mesh.point(i))?;
        bcs.pin(i, &[0, 1], |c| if c == 0 { u } else { v });
    }
    for &i in &surface {
        let p = mesh.point(i);
        bcs.add(BcTerm::Tangency {
            node: i,
            normal: p * (1.0 / p.norm()),
        });
    }
    let field0 = NodalField::from_fn(mesh, 2, |_, _| vec![opts.u_inf, 0.0]);
    let state = newton_solve(&CauchyRiemann::default(), mesh, field0, &bcs, &opts.newton)?;
    let report = error_norms(mesh, &state.field, &["u", "v"], |p| {
        let (u, v) = exact(p)?;
        Ok(vec![u, v])
    });
    let tangency_residual = surface
        .iter()
        .map(|&i| {
            let p = mesh.point(i);
            let n = p * (1.0 / p.norm());
            (state.field.get(i, 0) * n.x + state.field.get(i, 1) * n.y).abs()
        })
        .fold(0.0, f64::max);
    let off_body = opts.gamma > 4.0 * PI * opts.a * opts.u_inf;
    let stagnation = find_stagnation(mesh, &state.field, opts.a, off_body)?;
    Ok(CylinderResult {
        state,
        report,
        stagnation,
        tangency_residual,
    })
}
