use super::csr::{dot, norm2, residual_norm, CsrMatrix};
use super::precond::Jacobi;
use super::SolveReport;
use crate::error::{Error, Result};

/// Preconditioned conjugate gradients from a zero initial guess. Stops when
/// `||J x - b|| / ||b|| < tol` or after `max_iter` iterations.
pub fn pcg(j: &CsrMatrix, b: &[f64], p: &Jacobi, tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveReport)> {
    let n = j.dim();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    let mut report = SolveReport::default();
    if bnorm == 0.0 {
        report.converged = true;
        return Ok((x, report));
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut ap = vec![0.0; n];
    p.apply(&r, &mut z);
    let mut dir = z.clone();
    let mut rz = dot(&r, &z);
    report.history.push(rz.abs().sqrt());
    while report.iterations < max_iter {
        j.mul_vec_into(&dir, &mut ap);
        let curv = dot(&dir, &ap);
        if !(curv > 0.0) {
            return Err(Error::NotPositiveDefinite(report.iterations));
        }
        let alpha = rz / curv;
        for i in 0..n {
            x[i] += alpha * dir[i];
            r[i] -= alpha * ap[i];
        }
        report.iterations += 1;
        let mut restart = false;
        if norm2(&r) < tol * bnorm {
            // confirm against the true residual before stopping
            let ax = j.mul_vec(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
            if norm2(&r) < tol * bnorm {
                break;
            }
            restart = true;
        }
        p.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        report.history.push(rz_new.abs().sqrt());
        let beta = if restart { 0.0 } else { rz_new / rz };
        for i in 0..n {
            dir[i] = z[i] + beta * dir[i];
        }
        rz = rz_new;
    }
    report.residual_norm = residual_norm(j, &x, b);
    report.converged = report.residual_norm < tol * bnorm;
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsolve::jacobi_precondition;

    #[test]
    fn identity_one_iteration() {
        let a = CsrMatrix::identity(4);
        let (x, rep) = pcg(&a, &[1.0, 2.0, 3.0, 4.0], &jacobi_precondition(&a).unwrap(), 1e-10, 10).unwrap();
        assert_eq!(rep.iterations, 1);
        assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn two_by_two() {
        let a = CsrMatrix::from_dense(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let (x, rep) = pcg(&a, &[1.0, 2.0], &jacobi_precondition(&a).unwrap(), 1e-12, 10).unwrap();
        assert!(rep.converged);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-12 && (x[1] - 7.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_detected() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let r = pcg(&a, &[1.0, 1.0], &Jacobi::identity(2), 1e-12, 10);
        assert!(matches!(r, Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn zero_rhs() {
        let a = CsrMatrix::identity(2);
        let (x, rep) = pcg(&a, &[0.0, 0.0], &Jacobi::identity(2), 1e-12, 10).unwrap();
        assert!(rep.converged && rep.iterations == 0 && x == vec![0.0, 0.0]);
    }
}
