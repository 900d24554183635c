//! PCG and restarted GMRES on a 2-D Poisson matrix.

use fvflow::linsolve::{CsrMatrix, GmresSettings, LinearSolver};

fn main() -> fvflow::Result<()> {
    let n = 30;
    let id = |i: usize, j: usize| i * n + j;
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            t.push((id(i, j), id(i, j), 4.0));
            if i > 0 {
                t.push((id(i, j), id(i - 1, j), -1.0));
            }
            if i + 1 < n {
                t.push((id(i, j), id(i + 1, j), -1.0));
            }
            if j > 0 {
                t.push((id(i, j), id(i, j - 1), -1.0));
            }
            if j + 1 < n {
                t.push((id(i, j), id(i, j + 1), -1.0));
            }
        }
    }
    let a = CsrMatrix::from_triplets(n * n, &t)?;
    let b = vec![1.0; n * n];
    for solver in [LinearSolver::pcg(), LinearSolver::gmres(GmresSettings::STRICT), LinearSolver::gmres(GmresSettings::LOOSE)] {
        let (_, r) = solver.solve(&a, &b)?;
        println!("{solver:?}: {} iterations, residual {:.2e}, converged {}", r.iterations, r.residual_norm, r.converged);
    }
    Ok(())
}
