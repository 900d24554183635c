use super::assemble::{assemble, functional_value, NodalField};
use super::equations::LocalSystem;
use super::terms::BcSet;
use crate::error::{Error, Result};
use crate::linsolve::LinearSolver;
use crate::mesh::Mesh;
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Under-relaxation `0 < sigma <= 1`.
    pub sigma: f64,
    /// Stop when `||q||_2 < tol`.
    pub tol: f64,
    /// Stop when `|I_new - I_old| / max(I_old, 1)` drops below this; `None`
    /// disables the test.
    pub functional_tol: Option<f64>,
    pub max_iter: usize,
    pub solver: LinearSolver,
    /// Abort after this many consecutive functional increases.
    pub divergence_window: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            tol: 1e-8,
            functional_tol: Some(1e-8),
            max_iter: 50,
            solver: LinearSolver::pcg(),
            divergence_window: 5,
        }
    }
}

/// One Newton correction.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonRecord {
    pub iter: usize,
    pub q_norm: f64,
    /// Functional after the update.
    pub functional: f64,
    pub linear_iterations: usize,
    pub linear_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewtonStatus {
    Converged,
    MaxIterations,
    Diverged,
}

#[derive(Debug, Clone)]
pub struct NewtonState {
    /// Final iterate, or the lowest-functional iterate when not converged.
    pub field: NodalField,
    /// Last correction.
    pub q: Vec<f64>,
    pub sigma: f64,
    pub functional: f64,
    pub initial_functional: f64,
    pub iterations: usize,
    pub history: Vec<NewtonRecord>,
    pub status: NewtonStatus,
    /// First Newton matrix symmetric once pinned rows are eliminated.
    pub symmetric: bool,
}

impl NewtonState {
    pub fn converged(&self) -> bool {
        self.status == NewtonStatus::Converged
    }

    /// Rows `iter, q_norm, functional` with the initial functional at iteration 0.
    pub fn history_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["iter", "q_norm", "functional", "linear_iterations"]);
        t.push(vec![0.0, f64::NAN, self.initial_functional, 0.0]);
        for r in &self.history {
            t.push(vec![r.iter as f64, r.q_norm, r.functional, r.linear_iterations as f64]);
        }
        t
    }
}

/// Minimize the functional by Newton's method, `phi <- phi + sigma q` with
/// `J q = -F`.
pub fn newton_solve(
    sys: &dyn LocalSystem,
    mesh: &Mesh,
    field0: NodalField,
    bcs: &BcSet,
    opts: &NewtonOptions,
) -> Result<NewtonState> {
    if !(opts.sigma > 0.0 && opts.sigma <= 1.0) {
        return Err(Error::InvalidParameter(format!("relaxation {} not in (0,1]", opts.sigma)));
    }
    let mut field = field0;
    let mut current = functional_value(sys, mesh, &field, bcs)?;
    let mut state = NewtonState {
        field: field.clone(),
        q: Vec::new(),
        sigma: opts.sigma,
        functional: current,
        initial_functional: current,
        iterations: 0,
        history: Vec::new(),
        status: NewtonStatus::MaxIterations,
        symmetric: true,
    };
    let mut best = (current, field.clone());
    let mut rising = 0;
    for it in 1..=opts.max_iter {
        let s = assemble(sys, mesh, &field, bcs)?;
        let mut j = s.j;
        let mut rhs: Vec<f64> = s.f.iter().map(|v| -v).collect();
        j.eliminate_pinned(&mut rhs);
        if it == 1 {
            state.symmetric = j.asymmetry() <= 1e-12 * j.max_abs();
        }
        let (q, rep) = opts.solver.solve(&j, &rhs)?;
        for (x, dq) in field.values.iter_mut().zip(&q) {
            *x += opts.sigma * dq;
        }
        let next = functional_value(sys, mesh, &field, bcs)?;
        let q_norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        state.history.push(NewtonRecord {
            iter: it,
            q_norm,
            functional: next,
            linear_iterations: rep.iterations,
            linear_converged: rep.converged,
        });
        state.iterations = it;
        state.q = q;
        if next < best.0 {
            best = (next, field.clone());
        }
        let steady = opts
            .functional_tol
            .is_some_and(|ft| (next - current).abs() / current.max(1.0) < ft);
        rising = if next > current { rising + 1 } else { 0 };
        current = next;
        if q_norm < opts.tol || steady {
            state.status = NewtonStatus::Converged;
            break;
        }
        if rising >= opts.divergence_window {
            state.status = NewtonStatus::Diverged;
            break;
        }
    }
    if state.status == NewtonStatus::Converged {
        state.field = field;
        state.functional = current;
    } else {
        state.functional = best.0;
        state.field = best.1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsq::CauchyRiemann;
    use crate::mesh::{gen_structured_square, StructuredStyle};

    fn problem(n: usize) -> (Mesh, BcSet) {
        let m = gen_structured_square(n, StructuredStyle::Right).unwrap();
        let exact = |x: f64, y: f64| [(-3.0 * y).exp() * (3.0 * x).cos(), -(-3.0 * y).exp() * (3.0 * x).sin()];
        let mut b = BcSet::new();
        for i in 0..m.num_nodes() {
            if !m.node_tags(i).is_interior() {
                let p = m.point(i);
                let e = exact(p.x, p.y);
                b.dirichlet(i, &[0, 1], |c| e[c]);
            }
        }
        (m, b)
    }

    fn uniform(m: &Mesh) -> NodalField {
        NodalField::from_fn(m, 2, |_, _| vec![1.0, 0.0])
    }

    #[test]
    fn linear_problem_converges_quickly() {
        let (m, b) = problem(6);
        let s = newton_solve(&CauchyRiemann::default(), &m, uniform(&m), &b, &NewtonOptions::default()).unwrap();
        assert!(s.converged());
        assert!(s.iterations <= 3, "{}", s.iterations);
        assert!(s.symmetric);
        assert!(s.functional < s.initial_functional);
    }

    #[test]
    fn relaxation_reaches_same_point() {
        let (m, b) = problem(5);
        let cr = CauchyRiemann::default();
        let full = NewtonOptions { functional_tol: None, tol: 1e-13, ..Default::default() };
        let half = NewtonOptions { sigma: 0.5, max_iter: 200, ..full };
        let a = newton_solve(&cr, &m, uniform(&m), &b, &full).unwrap();
        let h = newton_solve(&cr, &m, uniform(&m), &b, &half).unwrap();
        assert!(a.converged() && h.converged());
        let d = a.field.values.iter().zip(&h.field.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn bad_relaxation_rejected() {
        let (m, b) = problem(2);
        let o = NewtonOptions { sigma: 1.5, ..Default::default() };
        assert!(newton_solve(&CauchyRiemann::default(), &m, uniform(&m), &b, &o).is_err());
    }
}
