//! Sparse linear algebra for the Newton step.

mod csr;
mod gmres;
mod pcg;
mod precond;

pub use csr::{residual_norm, CsrMatrix};
pub use gmres::{gmres, GmresSettings};
pub use pcg::pcg;
pub use precond::{jacobi_precondition, Jacobi};

use crate::output::CsvTable;

/// Outcome of one linear solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// True residual `||J x - b||_2` of the returned iterate.
    pub residual_norm: f64,
    pub converged: bool,
    pub restarts: usize,
    /// Per-iteration residual estimate: `sqrt(r . P r)` for PCG, the
    /// preconditioned residual norm for GMRES.
    pub history: Vec<f64>,
}

impl SolveReport {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["iterations", "residual_norm", "converged", "restarts"]);
        t.push(vec![
            self.iterations as f64,
            self.residual_norm,
            if self.converged { 1.0 } else { 0.0 },
            self.restarts as f64,
        ]);
        t
    }
}

/// Krylov method used for `J q = -F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearSolver {
    Pcg { tol: f64, max_iter: usize },
    Gmres { settings: GmresSettings, tol: f64 },
}

impl LinearSolver {
    pub fn pcg() -> Self {
        LinearSolver::Pcg { tol: 1e-8, max_iter: 100_000 }
    }

    pub fn gmres(settings: GmresSettings) -> Self {
        LinearSolver::Gmres { settings, tol: 1e-8 }
    }

    /// Solve with a Jacobi preconditioner built from `j`.
    pub fn solve(&self, j: &CsrMatrix, b: &[f64]) -> crate::Result<(Vec<f64>, SolveReport)> {
        let p = jacobi_precondition(j)?;
        match *self {
            LinearSolver::Pcg { tol, max_iter } => pcg(j, b, &p, tol, max_iter),
            LinearSolver::Gmres { settings, tol } => gmres(j, b, &p, settings.restart, tol, settings.max_iter),
        }
    }
}
