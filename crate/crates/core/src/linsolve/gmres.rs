use super::csr::{dot, norm2, residual_norm, CsrMatrix};
use super::precond::Jacobi;
use super::SolveReport;
use crate::error::{Error, Result};

/// Restart length and iteration cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GmresSettings {
    pub restart: usize,
    pub max_iter: usize,
}

impl GmresSettings {
    /// Restart every 500 iterations, give up after 10^4.
    pub const STRICT: GmresSettings = GmresSettings { restart: 500, max_iter: 10_000 };
    /// Restart every 100 iterations and stop at 400 whatever the residual.
    pub const LOOSE: GmresSettings = GmresSettings { restart: 100, max_iter: 400 };
}

impl Default for GmresSettings {
    fn default() -> Self {
        Self::STRICT
    }
}

/// Left-preconditioned restarted GMRES from a zero initial guess.
///
/// Converged means `||J x - b|| / ||b|| < tol` for the true residual. The
/// iteration cap is hard: an unconverged iterate is returned, not an error.
/// `history` holds the preconditioned residual estimate after each step.
pub fn gmres(
    j: &CsrMatrix,
    b: &[f64],
    p: &Jacobi,
    restart: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveReport)> {
    if restart == 0 {
        return Err(Error::InvalidParameter("gmres restart must be at least 1".into()));
    }
    let n = j.dim();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    let mut report = SolveReport::default();
    if bnorm == 0.0 {
        report.converged = true;
        return Ok((x, report));
    }
    let mut pb = vec![0.0; n];
    p.apply(b, &mut pb);
    let target = tol * norm2(&pb);
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut cycles: usize = 0;
    loop {
        j.mul_vec_into(&x, &mut tmp);
        for i in 0..n {
            r[i] = b[i] - tmp[i];
        }
        if norm2(&r) < tol * bnorm || report.iterations >= max_iter {
            break;
        }
        cycles += 1;
        p.apply(&r, &mut w);
        let beta = norm2(&w);
        if beta == 0.0 {
            break;
        }
        let m = restart.min(max_iter - report.iterations);
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        v.push(w.iter().map(|e| e / beta).collect());
        // columns of the Hessenberg matrix after rotation
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut cs: Vec<(f64, f64)> = Vec::with_capacity(m);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k = 0;
        while k < m {
            j.mul_vec_into(&v[k], &mut tmp);
            p.apply(&tmp, &mut w);
            let mut col = vec![0.0; k + 2];
            for (i, vi) in v.iter().enumerate() {
                let hij = dot(&w, vi);
                col[i] = hij;
                for (we, ve) in w.iter_mut().zip(vi) {
                    *we -= hij * ve;
                }
            }
            let hnext = norm2(&w);
            col[k + 1] = hnext;
            for (i, &(c, s)) in cs.iter().enumerate() {
                let (a, bb) = (col[i], col[i + 1]);
                col[i] = c * a + s * bb;
                col[i + 1] = -s * a + c * bb;
            }
            let rho = col[k].hypot(col[k + 1]);
            let (c, s) = if rho == 0.0 { (1.0, 0.0) } else { (col[k] / rho, col[k + 1] / rho) };
            col[k] = rho;
            col[k + 1] = 0.0;
            cs.push((c, s));
            g[k + 1] = -s * g[k];
            g[k] *= c;
            h.push(col);
            k += 1;
            report.iterations += 1;
            report.history.push(g[k].abs());
            if hnext == 0.0 || g[k].abs() < target {
                break;
            }
            v.push(w.iter().map(|e| e / hnext).collect());
        }
        // back substitution on the k x k triangle
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for jj in i + 1..k {
                s -= h[jj][i] * y[jj];
            }
            y[i] = if h[i][i] == 0.0 { 0.0 } else { s / h[i][i] };
        }
        for (yi, vi) in y.iter().zip(&v) {
            for (xe, ve) in x.iter_mut().zip(vi) {
                *xe += yi * ve;
            }
        }
    }
    report.restarts = cycles.saturating_sub(1);
    report.residual_norm = residual_norm(j, &x, b);
    report.converged = report.residual_norm < tol * bnorm;
    Ok((x, report))
}
