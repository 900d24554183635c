//! Flow past a thin parabolic profile lying on the bottom of `[-2,2] x [0,2]`.

use super::{error_norms, ErrorReport};
use crate::analytic::parabolic_profile;
use crate::error::Result;
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::{newton_solve, BcSet, CauchyRiemann, NewtonOptions, NewtonState, NodalField};
use crate::mesh::{gen_structured_rect, refine_uniform, Grading, Mesh, Tag};
use crate::output::CsvTable;

#[derive(Debug, Clone)]
pub struct ParabolicOptions {
    /// Half-length of the profile.
    pub a: f64,
    pub k: f64,
    /// Base grid cells in `x` and `y`.
    pub nx: usize,
    pub ny: usize,
    pub refinements: usize,
    pub newton: NewtonOptions,
}

impl Default for ParabolicOptions {
    fn default() -> Self {
        Self {
            a: 0.5,
            k: -0.25,
            nx: 16,
            ny: 8,
            refinements: 3,
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

impl ParabolicOptions {
    /// Literal preconditioned conjugate gradients instead of GMRES.
    pub fn with_pcg(mut self) -> Self {
        self.newton.solver = LinearSolver::Pcg { tol: 1e-10, max_iter: 100_000 };
        self
    }

    pub fn meshes(&self) -> Result<Vec<Mesh>> {
        let mut out = vec![gen_structured_rect(self.nx, self.ny, (-2.0, 2.0), (0.0, 2.0), Grading::Uniform)?];
        for _ in 0..self.refinements {
            let next = refine_uniform(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ParabolicResult {
    pub state: NewtonState,
    pub report: ErrorReport,
    /// `x, u, u_exact, v, v_exact` along `y = 0`, sorted by `x`.
    pub profile: CsvTable,
}

/// Cauchy-Riemann solve: `v` prescribed on the whole boundary, `u` on all
/// sides but the bottom, where it is left to the element equations.
pub fn solve_parabolic_profile(mesh: &Mesh, opts: &ParabolicOptions) -> Result<ParabolicResult> {
    let exact = |x: f64, y: f64| parabolic_profile(opts.a, opts.k, x, y);
    let mut bcs = BcSet::new();
    for i in 0..mesh.num_nodes() {
        let tags = mesh.node_tags(i);
        if tags.is_interior() {
            continue;
        }
        let p = mesh.point(i);
        // at the profile ends v jumps; impose the mean of the two limits
        let (u, v) = exact(p.x, p.y).unwrap_or((f64::NAN, 0.5 * opts.k * std::f64::consts::PI * p.x / (opts.a * opts.a)));
        if tags.contains(Tag::Bottom) && !(tags.contains(Tag::Left) || tags.contains(Tag::Right)) {
            bcs.pin(i, &[1], |_| v);
        } else {
            bcs.pin(i, &[0, 1], |c| if c == 0 { u } else { v });
        }
    }
    let field0 = NodalField::from_fn(mesh, 2, |_, _| vec![0.0, 0.0]);
    let state = newton_solve(&CauchyRiemann::default(), mesh, field0, &bcs, &opts.newton)?;
    let report = error_norms(mesh, &state.field, &["u", "v"], |p| {
        let (u, v) = exact(p.x, p.y)?;
        Ok(vec![u, v])
    });
    let mut bottom: Vec<usize> = mesh.nodes_with_tag(Tag::Bottom);
    bottom.sort_by(|&i, &j| mesh.point(i).x.total_cmp(&mesh.point(j).x));
    let mut profile = CsvTable::new(["x", "u", "u_exact", "v", "v_exact"]);
    for i in bottom {
        let p = mesh.point(i);
        let (ue, ve) = exact(p.x, p.y).unwrap_or((f64::NAN, f64::NAN));
        profile.push(vec![p.x, state.field.get(i, 0), ue, state.field.get(i, 1), ve]);
    }
    Ok(ParabolicResult { state, report, profile })
}
