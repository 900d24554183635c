//! Boundary and closure terms added to the element functional.

use super::element::gradient_unchecked;
use crate::mesh::{Mesh, Point2};

/// One quadratic functional term acting on a few nodal unknowns.
#[derive(Debug, Clone, PartialEq)]
pub enum BcTerm {
    /// `(phi_c - value)^2 / 2` at `node`.
    Dirichlet { node: usize, comp: usize, value: f64 },
    /// `(u n_x + v n_y)^2 / 2` at `node`; `normal` has unit length.
    Tangency { node: usize, normal: Point2 },
    /// `((u_1 - u_2) . n)^2 / 2` with `u_1`, `u_2` the averages over two
    /// elements sharing an edge. Only the vertices off the shared edge, `i`
    /// and `j`, survive the difference.
    KuttaPair { i: usize, j: usize, normal: Point2 },
    /// `sum_c (d phi_c / dx)^2 Omega / 2` over one element.
    OutflowX { element: usize, comps: Vec<usize> },
}

/// Which rows of the system a term writes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowScope {
    /// Every unknown the term touches (the term is part of the functional).
    #[default]
    All,
    /// Only rows handed over with [`BcSet::replace_rows`].
    ReplacedOnly,
}

/// Local unknowns, value, gradient and Hessian of one term.
#[derive(Debug, Clone, Default)]
pub struct TermContribution {
    pub dofs: Vec<usize>,
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major, `dofs.len()` square.
    pub hess: Vec<f64>,
}

impl BcTerm {
    pub fn evaluate(&self, mesh: &Mesh, n_vars: usize, x: &[f64]) -> TermContribution {
        match self {
            BcTerm::Dirichlet { node, comp, value } => {
                let d = node * n_vars + comp;
                let e = x[d] - value;
                TermContribution {
                    dofs: vec![d],
                    value: 0.5 * e * e,
                    grad: vec![e],
                    hess: vec![1.0],
                }
            }
            BcTerm::Tangency { node, normal } => {
                let (du, dv) = (node * n_vars, node * n_vars + 1);
                let r = x[du] * normal.x + x[dv] * normal.y;
                let (nx, ny) = (normal.x, normal.y);
                TermContribution {
                    dofs: vec![du, dv],
                    value: 0.5 * r * r,
                    grad: vec![r * nx, r * ny],
                    hess: vec![nx * nx, nx * ny, nx * ny, ny * ny],
                }
            }
            BcTerm::KuttaPair { i, j, normal } => {
                let (nx, ny) = (normal.x, normal.y);
                let dofs = vec![i * n_vars, i * n_vars + 1, j * n_vars, j * n_vars + 1];
                let r = ((x[dofs[0]] - x[dofs[2]]) * nx + (x[dofs[1]] - x[dofs[3]]) * ny) / 3.0;
                let a = [nx / 3.0, ny / 3.0, -nx / 3.0, -ny / 3.0];
                let mut hess = vec![0.0; 16];
                for p in 0..4 {
                    for q in 0..4 {
                        hess[p * 4 + q] = a[p] * a[q];
                    }
                }
                TermContribution {
                    dofs,
                    value: 0.5 * r * r,
                    grad: a.iter().map(|ai| r * ai).collect(),
                    hess,
                }
            }
            BcTerm::OutflowX { element, comps } => {
                let tri = mesh.triangle(*element);
                let geom = mesh.geometry(*element);
                let nc = comps.len();
                let mut dofs = Vec::with_capacity(3 * nc);
                for k in 0..3 {
                    for &c in comps {
                        dofs.push(tri.nodes[k] * n_vars + c);
                    }
                }
                let gx: [f64; 3] = [0, 1, 2].map(|k| -0.5 * geom.normals[k].x / geom.area);
                let mut value = 0.0;
                let mut grad = vec![0.0; 3 * nc];
                let mut hess = vec![0.0; 9 * nc * nc];
                for (ci, &c) in comps.iter().enumerate() {
                    let vals = tri.nodes.map(|k| x[k * n_vars + c]);
                    let (dx, _) = gradient_unchecked(geom, vals);
                    value += 0.5 * dx * dx * geom.area;
                    for k in 0..3 {
                        grad[k * nc + ci] = dx * gx[k] * geom.area;
                        for l in 0..3 {
                            hess[(k * nc + ci) * 3 * nc + l * nc + ci] = gx[k] * gx[l] * geom.area;
                        }
                    }
                }
                TermContribution { dofs, value, grad, hess }
            }
        }
    }
}

/// Boundary terms plus the set of rows they take over from the element
/// equations.
#[derive(Debug, Clone, Default)]
pub struct BcSet {
    pub terms: Vec<(BcTerm, RowScope)>,
    /// `(node, comp)` rows that receive no element contributions.
    pub replaced: Vec<(usize, usize)>,
}

impl BcSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: BcTerm) -> &mut Self {
        self.terms.push((term, RowScope::All));
        self
    }

    pub fn add_scoped(&mut self, term: BcTerm, scope: RowScope) -> &mut Self {
        self.terms.push((term, scope));
        self
    }

    pub fn replace_rows(&mut self, node: usize, comp: usize) -> &mut Self {
        self.replaced.push((node, comp));
        self
    }

    /// Dirichlet terms on `comps` of `node` with `values[c]`.
    pub fn dirichlet(&mut self, node: usize, comps: &[usize], value: impl Fn(usize) -> f64) -> &mut Self {
        for &c in comps {
            self.add(BcTerm::Dirichlet { node, comp: c, value: value(c) });
        }
        self
    }

    /// Dirichlet terms that replace the element rows of `comps` at `node`.
    pub fn pin(&mut self, node: usize, comps: &[usize], value: impl Fn(usize) -> f64) -> &mut Self {
        for &c in comps {
            self.replace_rows(node, c);
            self.add(BcTerm::Dirichlet { node, comp: c, value: value(c) });
        }
        self
    }

    /// True when the assembled matrix is the Hessian of a single functional.
    pub fn is_variational(&self) -> bool {
        self.replaced.is_empty() && self.terms.iter().all(|t| t.1 == RowScope::All)
    }
}
