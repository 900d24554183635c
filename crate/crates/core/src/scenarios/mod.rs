//! End-to-end flow problems: meshes, boundary terms, solves and error
//! reporting against the closed-form solutions.

mod airfoil;
mod boundary_layer;
mod cylinder;
mod parabolic;
mod sinusoidal;

use crate::error::{Error, Result};
use crate::lsq::NodalField;
use crate::mesh::{Mesh, Point2, Tag};
use crate::output::CsvTable;

pub use airfoil::{
    airfoil_mesh, circulation_study, isotropic_layers, kutta_pair, kutta_pair_on_edge, solve_airfoil,
    AirfoilLsqOptions, AirfoilLsqResult, CirculationLevel, CirculationStudy, StreamFarfield,
};
pub use boundary_layer::{
    boundary_conditions, continuity_residual, solve_boundary_layer, BlComparison, BoundaryLayerOptions,
    BoundaryLayerResult,
};
pub use cylinder::{
    find_stagnation, solve_cylinder, CylinderOptions, CylinderResult, StagnationFinding, CYLINDER_GRIDS,
};
pub use parabolic::{solve_parabolic_profile, ParabolicOptions, ParabolicResult};
pub use sinusoidal::{solve_sinusoidal_on, solve_sinusoidal_square, SinusoidalLevel, SinusoidalOptions};

/// Error norms of one nodal component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentError {
    pub name: String,
    pub l2: f64,
    pub linf: f64,
}

/// Per-component error norms on one mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Characteristic spacing (longest edge) of the mesh.
    pub h: f64,
    pub num_nodes: usize,
    pub components: Vec<ComponentError>,
    /// Nodes left out because the exact solution is singular there.
    pub skipped: usize,
}

impl ErrorReport {
    pub fn component(&self, name: &str) -> Option<&ComponentError> {
        self.components.iter().find(|c| c.name == name)
    }
}

/// Observed order `log(e_c / e_f) / log(h_c / h_f)`.
pub fn observed_order(coarse: f64, fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (coarse / fine).ln() / (h_coarse / h_fine).ln()
}

/// Orders between consecutive reports, `(l2, linf)` per component.
pub fn study_orders(reports: &[ErrorReport]) -> Vec<Vec<(f64, f64)>> {
    reports
        .windows(2)
        .map(|w| {
            w[0].components
                .iter()
                .zip(&w[1].components)
                .map(|(c, f)| {
                    (
                        observed_order(c.l2, f.l2, w[0].h, w[1].h),
                        observed_order(c.linf, f.linf, w[0].h, w[1].h),
                    )
                })
                .collect()
        })
        .collect()
}

/// Table `h, <name>_l2, <name>_linf, ...` with one row per report.
pub fn error_table(reports: &[ErrorReport]) -> CsvTable {
    let mut header = vec!["h".to_string(), "nodes".to_string()];
    if let Some(r) = reports.first() {
        for c in &r.components {
            header.push(format!("{}_l2", c.name));
            header.push(format!("{}_linf", c.name));
        }
    }
    let mut t = CsvTable::new(header);
    for r in reports {
        let mut row = vec![r.h, r.num_nodes as f64];
        for c in &r.components {
            row.push(c.l2);
            row.push(c.linf);
        }
        t.push(row);
    }
    t
}

/// Sum of the areas of the elements abutting each node.
pub fn node_weights(mesh: &Mesh) -> Vec<f64> {
    let mut w = vec![0.0; mesh.num_nodes()];
    for (tri, g) in mesh.triangles().iter().zip(mesh.geometries()) {
        for &n in &tri.nodes {
            w[n] += g.area;
        }
    }
    w
}

/// Longest edge of the mesh.
pub fn mesh_spacing(mesh: &Mesh) -> f64 {
    mesh.geometries()
        .iter()
        .flat_map(|g| g.edge_lengths)
        .fold(0.0, f64::max)
}

/// `||e||_2 = [sum_i sum_{T ni i} Omega_T e_i^2]^(1/2)` and `max |e_i|` per
/// component. Nodes where `exact` fails are skipped and counted.
pub fn error_norms(
    mesh: &Mesh,
    numeric: &NodalField,
    names: &[&str],
    exact: impl Fn(Point2) -> Result<Vec<f64>>,
) -> ErrorReport {
    let n = numeric.n_vars;
    let w = node_weights(mesh);
    let mut sq = vec![0.0; n];
    let mut inf = vec![0.0f64; n];
    let mut skipped = 0;
    for (i, &p) in mesh.points().iter().enumerate() {
        let Ok(ex) = exact(p) else {
            skipped += 1;
            continue;
        };
        if ex.iter().any(|v| !v.is_finite()) {
            skipped += 1;
            continue;
        }
        for c in 0..n {
            let e = numeric.get(i, c) - ex[c];
            sq[c] += w[i] * e * e;
            inf[c] = inf[c].max(e.abs());
        }
    }
    ErrorReport {
        h: mesh_spacing(mesh),
        num_nodes: mesh.num_nodes(),
        components: (0..n)
            .map(|c| ComponentError {
                name: names.get(c).map_or_else(|| format!("c{c}"), |s| s.to_string()),
                l2: sq[c].sqrt(),
                linf: inf[c],
            })
            .collect(),
        skipped,
    }
}

/// The two boundary edges of `tag` meeting at node `i`, as `(prev, next)`
/// in counterclockwise boundary order.
fn adjacent_edges(mesh: &Mesh, i: usize, tag: Tag) -> Result<[Point2; 2]> {
    let mut prev = None;
    let mut next = None;
    for e in mesh.boundary_edges() {
        if e.tag != tag {
            continue;
        }
        let (a, b) = (mesh.point(e.nodes[0]), mesh.point(e.nodes[1]));
        if e.nodes[1] == i {
            prev = Some(b - a);
        } else if e.nodes[0] == i {
            next = Some(b - a);
        }
    }
    match (prev, next) {
        (Some(p), Some(n)) => Ok([p, n]),
        _ => Err(Error::NotOnSurface(i)),
    }
}

/// Unit outward normal at a surface node: the average of the unit normals of
/// its two surface edges, renormalized. Outward means out of the flow domain.
pub fn surface_normal_at_node(mesh: &Mesh, i: usize) -> Result<Point2> {
    let [p, n] = adjacent_edges(mesh, i, Tag::Surface)?;
    // boundary edges run counterclockwise around each element, so the
    // domain lies to their left and the outward normal is the right perp
    let np = p.perp_cw() * (1.0 / p.norm());
    let nn = n.perp_cw() * (1.0 / n.norm());
    let s = np + nn;
    let len = s.norm();
    if !(len > 1e-12) {
        return Err(Error::NotOnSurface(i));
    }
    Ok(s * (1.0 / len))
}

/// Surface nodes ordered along the boundary, starting from `start`.
pub fn surface_loop(mesh: &Mesh, start: usize) -> Result<Vec<usize>> {
    let mut next = std::collections::HashMap::new();
    for e in mesh.boundary_edges() {
        if e.tag == Tag::Surface {
            next.insert(e.nodes[0], e.nodes[1]);
        }
    }
    if !next.contains_key(&start) {
        return Err(Error::NotOnSurface(start));
    }
    let mut out = vec![start];
    let mut cur = next[&start];
    while cur != start {
        out.push(cur);
        cur = *next.get(&cur).ok_or(Error::ContourNotClosed)?;
        if out.len() > next.len() {
            return Err(Error::ContourNotClosed);
        }
    }
    Ok(out)
}

/// Worker thread cap from `FVFLOW_THREADS`, else the available parallelism.
pub fn worker_threads() -> usize {
    std::env::var("FVFLOW_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Run independent jobs on up to [`worker_threads`] threads; results come
/// back in job order.
pub fn fan_out<T, R>(jobs: Vec<T>, f: impl Fn(T) -> R + Sync) -> Vec<R>
where
    T: Send,
    R: Send,
{
    let threads = worker_threads().min(jobs.len()).max(1);
    if threads == 1 {
        return jobs.into_iter().map(f).collect();
    }
    let n = jobs.len();
    let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>());
    let results = std::sync::Mutex::new((0..n).map(|_| None).collect::<Vec<Option<R>>>());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                let Some((k, job)) = job else { break };
                let r = f(job);
                results.lock().unwrap()[k] = Some(r);
            });
        }
    });
    results.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{gen_ogrid_cylinder, gen_structured_rect, Grading, TagSet};

    #[test]
    fn exact_field_has_zero_error() {
        let m = gen_structured_rect(4, 4, (0.0, 1.0), (0.0, 1.0), Grading::Uniform).unwrap();
        let f = NodalField::from_fn(&m, 2, |_, p| vec![p.x, p.y * p.y]);
        let r = error_norms(&m, &f, &["u", "v"], |p| Ok(vec![p.x, p.y * p.y]));
        assert!(r.components.iter().all(|c| c.l2 == 0.0 && c.linf == 0.0));
    }

    #[test]
    fn constant_error_counts_each_element_three_times() {
        let m = gen_structured_rect(5, 3, (0.0, 2.0), (0.0, 1.5), Grading::Uniform).unwrap();
        let c = 0.25;
        let f = NodalField::from_fn(&m, 1, |_, _| vec![c]);
        let r = error_norms(&m, &f, &["u"], |_| Ok(vec![0.0]));
        let expect = c * (3.0 * m.total_area()).sqrt();
        assert!((r.components[0].l2 - expect).abs() < 1e-14, "{r:?}");
        assert_eq!(r.components[0].linf, c);
    }

    #[test]
    fn singular_nodes_skipped() {
        let m = gen_structured_rect(2, 2, (0.0, 1.0), (0.0, 1.0), Grading::Uniform).unwrap();
        let f = NodalField::zeros(m.num_nodes(), 1);
        let r = error_norms(&m, &f, &["u"], |p| {
            if p.x == 0.0 {
                Err(Error::Domain("x = 0".into()))
            } else {
                Ok(vec![1.0])
            }
        });
        assert_eq!(r.skipped, 3);
        assert_eq!(r.components[0].linf, 1.0);
    }

    #[test]
    fn observed_order_of_quadratic_decay() {
        assert!((observed_order(4e-2, 1e-2, 0.2, 0.1) - 2.0).abs() < 1e-12);
    }

    fn corner_mesh() -> Mesh {
        // unit square with a node in the middle of the bottom side, whole
        // boundary tagged as surface
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.0),
        ];
        let tags = vec![TagSet::single(Tag::Surface); 5];
        Mesh::new(pts, vec![[0, 4, 3], [4, 1, 2], [4, 2, 3]], tags).unwrap()
    }

    #[test]
    fn straight_segment_normal() {
        let m = corner_mesh();
        let n = surface_normal_at_node(&m, 4).unwrap();
        assert!(n.dist(Point2::new(0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn corner_normal_bisects() {
        let m = corner_mesh();
        // the corner at (1,1) has edge normals (1,0) and (0,1)
        let n = surface_normal_at_node(&m, 2).unwrap();
        let s = 0.5f64.sqrt();
        assert!(n.dist(Point2::new(s, s)) < 1e-15);
    }

    #[test]
    fn circle_normals_nearly_radial() {
        let n_theta = 64;
        let m = gen_ogrid_cylinder(0.5, 3.0, n_theta, 4).unwrap();
        let dth = 2.0 * std::f64::consts::PI / n_theta as f64;
        for i in m.nodes_with_tag(Tag::Surface) {
            let n = surface_normal_at_node(&m, i).unwrap();
            let p = m.point(i);
            // outward from the flow domain means into the cylinder
            let radial = p * (-1.0 / p.norm());
            assert!(n.dist(radial) < dth * dth, "{i}");
        }
        assert!(matches!(surface_normal_at_node(&m, n_theta + 1), Err(Error::NotOnSurface(_))));
    }

    #[test]
    fn fan_out_keeps_order() {
        let out = fan_out((0..17).collect(), |k: usize| k * k);
        assert_eq!(out, (0..17).map(|k| k * k).collect::<Vec<_>>());
    }

    #[test]
    fn surface_loop_closes() {
        let m = gen_ogrid_cylinder(0.5, 3.0, 16, 3).unwrap();
        let l = surface_loop(&m, 0).unwrap();
        assert_eq!(l.len(), 16);
    }
}
