use super::equations::{ElementContribution, LocalSystem};
use super::terms::{BcSet, RowScope};
use crate::error::{Error, Result};
use crate::linsolve::CsrMatrix;
use crate::mesh::{Mesh, Point2};

/// Per-node unknown vector, node-major: `values[i * n_vars + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    pub n_vars: usize,
    pub values: Vec<f64>,
}

impl NodalField {
    pub fn zeros(num_nodes: usize, n_vars: usize) -> Self {
        Self {
            n_vars,
            values: vec![0.0; num_nodes * n_vars],
        }
    }

    /// Sample `f(point)` at every node of `mesh`.
    pub fn from_fn(mesh: &Mesh, n_vars: usize, mut f: impl FnMut(usize, Point2) -> Vec<f64>) -> Self {
        let mut values = Vec::with_capacity(mesh.num_nodes() * n_vars);
        for (i, &p) in mesh.points().iter().enumerate() {
            let v = f(i, p);
            assert_eq!(v.len(), n_vars, "sample length must equal n_vars");
            values.extend(v);
        }
        Self { n_vars, values }
    }

    pub fn num_nodes(&self) -> usize {
        self.values.len() / self.n_vars
    }

    pub fn get(&self, node: usize, comp: usize) -> f64 {
        self.values[node * self.n_vars + comp]
    }

    pub fn set(&mut self, node: usize, comp: usize, v: f64) {
        self.values[node * self.n_vars + comp] = v;
    }

    pub fn component(&self, comp: usize) -> Vec<f64> {
        self.values.iter().skip(comp).step_by(self.n_vars).copied().collect()
    }
}

/// Newton system `J q = -F` at one state.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub j: CsrMatrix,
    pub f: Vec<f64>,
    /// Functional value at the state.
    pub functional: f64,
    /// True when `J` is the Hessian of the functional, hence symmetric.
    pub symmetric: bool,
}

fn check_inputs(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField) -> Result<()> {
    if field.n_vars != sys.num_vars() || field.values.len() != mesh.num_nodes() * field.n_vars {
        return Err(Error::InvalidParameter(format!(
            "field has {} values for {} nodes x {} vars",
            field.values.len(),
            mesh.num_nodes(),
            sys.num_vars()
        )));
    }
    let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in mesh.points() {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let d = hi - lo;
    let min_area = 1e-14 * d.dot(d);
    if let Some(t) = mesh.geometries().iter().position(|g| !(g.area >= min_area)) {
        return Err(Error::DegenerateTriangle(t));
    }
    Ok(())
}

fn local_values(mesh: &Mesh, field: &NodalField, t: usize, buf: &mut Vec<f64>) {
    let n = field.n_vars;
    buf.clear();
    for &k in &mesh.triangle(t).nodes {
        buf.extend_from_slice(&field.values[k * n..(k + 1) * n]);
    }
}

/// `1/2 sum_T R_T^t R_T Omega_T` plus every boundary term.
pub fn functional_value(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField, bcs: &BcSet) -> Result<f64> {
    check_inputs(sys, mesh, field)?;
    Ok(element_functional(sys, mesh, field) + bc_functional(mesh, field, bcs))
}

fn element_functional(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField) -> f64 {
    let mut out = ElementContribution::default();
    let mut buf = Vec::new();
    let mut total = 0.0;
    for t in 0..mesh.num_triangles() {
        local_values(mesh, field, t, &mut buf);
        sys.element(mesh.geometry(t), &buf, false, &mut out);
        total += out.value;
    }
    total
}

fn bc_functional(mesh: &Mesh, field: &NodalField, bcs: &BcSet) -> f64 {
    bcs.terms
        .iter()
        .map(|(t, _)| t.evaluate(mesh, field.n_vars, &field.values).value)
        .sum()
}

/// Node-based functional `1/2 sum_i sum_{T ni i} R_T^t R_T Omega_T`.
pub fn node_based_functional(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField) -> Result<f64> {
    check_inputs(sys, mesh, field)?;
    let mut out = ElementContribution::default();
    let mut buf = Vec::new();
    let mut per_elem = vec![0.0; mesh.num_triangles()];
    for (t, v) in per_elem.iter_mut().enumerate() {
        local_values(mesh, field, t, &mut buf);
        sys.element(mesh.geometry(t), &buf, false, &mut out);
        *v = out.value;
    }
    Ok(mesh
        .node_to_triangles()
        .iter()
        .map(|ts| ts.iter().map(|&t| per_elem[t]).sum::<f64>())
        .sum())
}

/// Gradient `F` and Jacobian `J` of the functional at `field`.
///
/// Element contributions go to every row except those listed in
/// `bcs.replaced`; boundary terms go to the rows their [`RowScope`] allows.
/// Entries are summed in element order, then term order.
pub fn assemble(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField, bcs: &BcSet) -> Result<SparseSystem> {
    check_inputs(sys, mesh, field)?;
    let n = field.n_vars;
    let ndof = field.values.len();
    let mut replaced = vec![false; ndof];
    for &(node, c) in &bcs.replaced {
        if node >= mesh.num_nodes() || c >= n {
            return Err(Error::InvalidParameter(format!("replaced row ({node},{c}) out of range")));
        }
        replaced[node * n + c] = true;
    }
    let mut touched = vec![false; ndof];
    let mut f = vec![0.0; ndof];
    let mut trip = Vec::with_capacity(mesh.num_triangles() * 9 * n * n);
    let mut out = ElementContribution::default();
    let mut buf = Vec::new();
    let mut functional = 0.0;
    let nl = 3 * n;
    let mut dofs = vec![0; nl];
    for t in 0..mesh.num_triangles() {
        local_values(mesh, field, t, &mut buf);
        sys.element(mesh.geometry(t), &buf, true, &mut out);
        functional += out.value;
        for (k, &node) in mesh.triangle(t).nodes.iter().enumerate() {
            for c in 0..n {
                dofs[k * n + c] = node * n + c;
            }
        }
        for a in 0..nl {
            let ra = dofs[a];
            if replaced[ra] {
                continue;
            }
            touched[ra] = true;
            f[ra] += out.grad[a];
            for b in 0..nl {
                trip.push((ra, dofs[b], out.hess[a * nl + b]));
            }
        }
    }
    for (term, scope) in &bcs.terms {
        let c = term.evaluate(mesh, n, &field.values);
        if c.dofs.iter().any(|&d| d >= ndof) {
            return Err(Error::InvalidParameter(format!("boundary term {term:?} outside the field")));
        }
        functional += c.value;
        let m = c.dofs.len();
        for a in 0..m {
            let ra = c.dofs[a];
            if *scope == RowScope::ReplacedOnly && !replaced[ra] {
                continue;
            }
            touched[ra] = true;
            f[ra] += c.grad[a];
            for b in 0..m {
                trip.push((ra, c.dofs[b], c.hess[a * m + b]));
            }
        }
    }
    if let Some(d) = touched.iter().position(|&x| !x) {
        return Err(Error::EmptyRow(d / n));
    }
    Ok(SparseSystem {
        j: CsrMatrix::from_triplets(ndof, &trip)?,
        f,
        functional,
        symmetric: bcs.is_variational(),
    })
}

/// For each interior node `i` (one on no boundary edge) and each node `j` sharing an element with it,
/// the element-summed cross-block second derivative
/// `sum_T d^2 I_T / (d v_j d u_i)` of the two-variable system `sys`,
/// accumulated in element order. Returned as `(i, j, value)`.
pub fn cross_block_sums(sys: &dyn LocalSystem, mesh: &Mesh) -> Result<Vec<(usize, usize, f64)>> {
    if sys.num_vars() != 2 {
        return Err(Error::InvalidParameter("cross-block sums need a two-variable system".into()));
    }
    let zero = NodalField::zeros(mesh.num_nodes(), 2);
    check_inputs(sys, mesh, &zero)?;
    let mut interior = vec![true; mesh.num_nodes()];
    for e in mesh.boundary_edges() {
        interior[e.nodes[0]] = false;
        interior[e.nodes[1]] = false;
    }
    let mut sums: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    let mut out = ElementContribution::default();
    let mut buf = Vec::new();
    for t in 0..mesh.num_triangles() {
        local_values(mesh, &zero, t, &mut buf);
        sys.element(mesh.geometry(t), &buf, true, &mut out);
        let nodes = mesh.triangle(t).nodes;
        for (k, &i) in nodes.iter().enumerate() {
            if !interior[i] {
                continue;
            }
            for (l, &j) in nodes.iter().enumerate() {
                *sums.entry((i, j)).or_insert(0.0) += out.hess[(2 * k) * 6 + 2 * l + 1];
            }
        }
    }
    Ok(sums.into_iter().map(|((i, j), v)| (i, j, v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsq::{BcTerm, CauchyRiemann};
    use crate::mesh::{gen_structured_square, StructuredStyle, Tag};

    fn dirichlet_square(n: usize) -> (Mesh, BcSet) {
        let m = gen_structured_square(n, StructuredStyle::Right).unwrap();
        let mut b = BcSet::new();
        for i in 0..m.num_nodes() {
            if !m.node_tags(i).is_interior() {
                let p = m.point(i);
                b.dirichlet(i, &[0, 1], |c| if c == 0 { p.x } else { -p.y });
            }
        }
        (m, b)
    }

    #[test]
    fn exact_linear_field_has_zero_gradient() {
        let (m, b) = dirichlet_square(4);
        let f = NodalField::from_fn(&m, 2, |_, p| vec![p.x, -p.y]);
        let s = assemble(&CauchyRiemann::default(), &m, &f, &b).unwrap();
        assert!(s.f.iter().all(|v| v.abs() < 1e-12));
        assert!(s.functional < 1e-24);
        assert!(s.symmetric);
        assert!(s.j.asymmetry() <= 1e-12 * s.j.max_abs());
    }

    #[test]
    fn empty_row_reported() {
        let (m, mut b) = dirichlet_square(2);
        let corner = m.nodes_with_tag(Tag::Left)[0];
        b.replace_rows(corner, 0);
        b.terms.retain(|(t, _)| !matches!(t, BcTerm::Dirichlet { node, comp: 0, .. } if *node == corner));
        let f = NodalField::zeros(m.num_nodes(), 2);
        assert!(matches!(assemble(&CauchyRiemann::default(), &m, &f, &b), Err(Error::EmptyRow(k)) if k == corner));
    }

    #[test]
    fn node_functional_is_three_times() {
        let (m, _) = dirichlet_square(3);
        let f = NodalField::from_fn(&m, 2, |_, p| vec![(3.0 * p.x).sin(), p.x * p.y]);
        let cr = CauchyRiemann::default();
        let i = functional_value(&cr, &m, &f, &BcSet::new()).unwrap();
        let istar = node_based_functional(&cr, &m, &f).unwrap();
        assert!((istar - 3.0 * i).abs() < 1e-12 * istar);
    }

    #[test]
    fn cross_blocks_vanish_on_structured_grids() {
        let cr = CauchyRiemann::default();
        let right = gen_structured_square(8, StructuredStyle::Right).unwrap();
        let eq = crate::mesh::gen_equilateral_grid(6, 6, 0.125).unwrap();
        for m in [&right, &eq] {
            let sums = cross_block_sums(&cr, m).unwrap();
            assert!(!sums.is_empty());
            assert!(sums.iter().all(|s| s.2 == 0.0), "{:?}", sums.iter().find(|s| s.2 != 0.0));
        }
        let jit = crate::mesh::gen_jittered_square(8, 0.3, 11).unwrap();
        let worst = cross_block_sums(&cr, &jit).unwrap().iter().fold(0.0_f64, |m, s| m.max(s.2.abs()));
        println!("jittered cross-block max {worst:e}");
        assert!(worst < 1e-13);
    }
}
