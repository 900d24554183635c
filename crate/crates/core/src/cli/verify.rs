//! Self-checks behind the `verify` verb.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::BlasiusProfile;
use crate::cc_laplace::{build_cc_stencil, Placement};
use crate::error::Result;
use crate::linsolve::{GmresSettings, LinearSolver};
use crate::lsq::{
    assemble, best_over_steps, cross_block_sums, fd_check_gradient, fd_check_hessian, BcSet, BoundaryLayer,
    CauchyRiemann, ElementContribution, Generic, KernelPath, LocalSystem, NodalField,
};
use crate::mesh::{gen_equilateral_grid, gen_jittered_square, gen_ogrid, gen_structured_square, ElementGeometry, Mesh, OgridStyle, Point2, StructuredStyle};

/// Deliberate defects for exercising the checks themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Add `1e-2` to one Hessian entry of the Cauchy-Riemann element.
    HessianEntry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: &'static str, value: f64, limit: f64) -> Self {
        Self { name, value, limit, passed: value < limit }
    }

    fn exact_zero(name: &'static str, value: f64) -> Self {
        Self { name, value, limit: 0.0, passed: value == 0.0 }
    }

    pub fn line(&self) -> String {
        format!(
            "check={} status={} value={:e} limit={:e}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.value,
            self.limit
        )
    }
}

struct Faulty<S>(S);

impl<S: LocalSystem> LocalSystem for Faulty<S> {
    fn num_vars(&self) -> usize {
        self.0.num_vars()
    }

    fn element(&self, g: &ElementGeometry, local: &[f64], hessian: bool, out: &mut ElementContribution) {
        self.0.element(g, local, hessian, out);
        if hessian {
            out.hess[1] += 1e-2;
        }
    }
}

/// Field with independent uniform entries in `[-1, 1)`.
pub fn random_field(mesh: &Mesh, n_vars: usize, seed: u64) -> NodalField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    NodalField::from_fn(mesh, n_vars, |_, _| (0..n_vars).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// Central-difference steps swept by the derivative checks.
pub const FD_STEPS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Worst normwise FD mismatch of gradient and Hessian of `sys`.
pub fn fd_errors(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField) -> Result<(f64, f64)> {
    let b = BcSet::new();
    let g = best_over_steps(&FD_STEPS, |h| fd_check_gradient(sys, mesh, field, &b, h))?;
    let j = best_over_steps(&FD_STEPS, |h| fd_check_hessian(sys, mesh, field, &b, h))?;
    Ok((g, j))
}

/// Largest `|sum_T d2I/dv_j du_i|` over interior nodes.
pub fn max_cross_block(mesh: &Mesh) -> Result<f64> {
    Ok(cross_block_sums(&CauchyRiemann::default(), mesh)?
        .into_iter()
        .fold(0.0, |m, (_, _, v)| m.max(v.abs())))
}

fn mesh_invariants(mesh: &Mesh) -> (f64, f64) {
    let mut normal_sum = 0.0f64;
    let mut min_area = f64::INFINITY;
    for g in mesh.geometries() {
        let s = g.normals[0] + g.normals[1] + g.normals[2];
        normal_sum = normal_sum.max(s.norm() / g.perimeter());
        min_area = min_area.min(g.area);
    }
    (normal_sum, min_area)
}

fn stencil_defects(mesh: &Mesh) -> Result<(f64, f64)> {
    let s = build_cc_stencil(mesh, Placement::CircumcenterOrCentroid)?;
    let mut row = 0.0f64;
    let mut asym = 0.0f64;
    for t in 0..s.num_cells() {
        let sum: f64 = s.neighbors[t].iter().map(|x| x.1).sum();
        row = row.max((s.diag[t] - sum).abs());
        for &(n, c) in &s.neighbors[t] {
            let back = s.neighbors[n].iter().find(|x| x.0 == t).map_or(f64::INFINITY, |x| x.1);
            asym = asym.max((c - back).abs());
        }
    }
    Ok((row, asym))
}

fn kernel_mismatch(mesh: &Mesh) -> Result<f64> {
    let b = BcSet::new();
    let mut worst = 0.0f64;
    for (k, fast, generic) in [
        (
            2usize,
            Box::new(CauchyRiemann { path: KernelPath::Fast }) as Box<dyn LocalSystem>,
            Box::new(Generic(CauchyRiemann::default())) as Box<dyn LocalSystem>,
        ),
        (
            3,
            Box::new(BoundaryLayer { path: KernelPath::Fast }),
            Box::new(Generic(BoundaryLayer::default())),
        ),
    ] {
        let f = random_field(mesh, k, 40 + k as u64);
        let a = assemble(fast.as_ref(), mesh, &f, &b)?;
        let g = assemble(generic.as_ref(), mesh, &f, &b)?;
        let scale = g.j.max_abs().max(1.0);
        for i in 0..a.j.dim() {
            for (j, v) in a.j.row(i) {
                worst = worst.max((v - g.j.get(i, j)).abs() / scale);
            }
        }
    }
    Ok(worst)
}

fn solver_agreement() -> Result<f64> {
    let m = gen_structured_square(8, StructuredStyle::Right)?;
    let mut b = BcSet::new();
    for i in 0..m.num_nodes() {
        if !m.node_tags(i).is_interior() {
            let p = m.point(i);
            b.pin(i, &[0, 1], |c| if c == 0 { 1.0 + p.x * p.y } else { 0.5 * (p.y * p.y - p.x * p.x) });
        }
    }
    let f = NodalField::zeros(m.num_nodes(), 2);
    let s = assemble(&CauchyRiemann::default(), &m, &f, &b)?;
    let mut j = s.j;
    let mut rhs: Vec<f64> = s.f.iter().map(|v| -v).collect();
    j.eliminate_pinned(&mut rhs);
    let (x1, _) = LinearSolver::Pcg { tol: 1e-12, max_iter: 10_000 }.solve(&j, &rhs)?;
    let (x2, _) = LinearSolver::Gmres { settings: GmresSettings::STRICT, tol: 1e-12 }.solve(&j, &rhs)?;
    Ok(x1.iter().zip(&x2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Run every check. `fault` injects a defect the checks must catch.
pub fn run_checks(fault: Option<Fault>) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let jitter = gen_jittered_square(6, 0.25, 11)?;
    let (nsum, amin) = mesh_invariants(&jitter);
    out.push(CheckResult::below("mesh_normals_close", nsum, 1e-14));
    out.push(CheckResult { name: "mesh_areas_positive", value: amin, limit: 0.0, passed: amin > 0.0 });

    let ring = gen_ogrid(Point2::default(), 0.5, 3.0, 48, 12, OgridStyle::Staggered)?;
    let (row, asym) = stencil_defects(&ring)?;
    out.push(CheckResult::below("stencil_row_sum", row, 1e-12));
    out.push(CheckResult::exact_zero("stencil_symmetry", asym));

    let cr_field = random_field(&jitter, 2, 12);
    let (g, h) = match fault {
        Some(Fault::HessianEntry) => fd_errors(&Faulty(CauchyRiemann::default()), &jitter, &cr_field)?,
        None => fd_errors(&CauchyRiemann::default(), &jitter, &cr_field)?,
    };
    out.push(CheckResult::below("fd_gradient_cauchy_riemann", g, 1e-5));
    out.push(CheckResult::below("fd_hessian_cauchy_riemann", h, 1e-5));
    let bl_field = random_field(&jitter, 3, 13);
    let (g, h) = fd_errors(&BoundaryLayer::default(), &jitter, &bl_field)?;
    out.push(CheckResult::below("fd_gradient_boundary_layer", g, 1e-5));
    out.push(CheckResult::below("fd_hessian_boundary_layer", h, 1e-5));
    out.push(CheckResult::below("kernel_paths_agree", kernel_mismatch(&jitter)?, 1e-12));

    out.push(CheckResult::exact_zero(
        "decoupling_right_8x8",
        max_cross_block(&gen_structured_square(8, StructuredStyle::Right)?)?,
    ));
    out.push(CheckResult::exact_zero(
        "decoupling_equilateral_8x8",
        max_cross_block(&gen_equilateral_grid(8, 8, 0.125)?)?,
    ));
    out.push(CheckResult::below("pcg_gmres_agree", solver_agreement()?, 1e-8));

    let fpp = BlasiusProfile::standard()?.fpp0;
    out.push(CheckResult::below("blasius_fpp0", (fpp - 0.33206).abs(), 1e-4));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        let r = run_checks(None).unwrap();
        for c in &r {
            assert!(c.passed, "{}", c.line());
        }
    }

    #[test]
    fn hessian_fault_detected() {
        let r = run_checks(Some(Fault::HessianEntry)).unwrap();
        let failed: Vec<_> = r.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert_eq!(failed, vec!["fd_hessian_cauchy_riemann"]);
    }
}
