//! Central-difference checks of the assembled gradient and Jacobian.

use super::assemble::{assemble, functional_value, NodalField};
use super::equations::LocalSystem;
use super::terms::BcSet;
use crate::error::{Error, Result};
use crate::mesh::Mesh;

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("finite-difference step must be positive".into()))
    }
}

fn normwise(err: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// `max_k |F_k - FD_k| / max_k |F_k|`, FD being the central difference of
/// the functional. Meaningful only when every term writes all of its rows
/// (see [`BcSet::is_variational`]).
pub fn fd_check_gradient(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField, bcs: &BcSet, step: f64) -> Result<f64> {
    check_step(step)?;
    let s = assemble(sys, mesh, field, bcs)?;
    let mut x = field.clone();
    let mut err: f64 = 0.0;
    for k in 0..x.values.len() {
        let v = x.values[k];
        x.values[k] = v + step;
        let fp = functional_value(sys, mesh, &x, bcs)?;
        x.values[k] = v - step;
        let fm = functional_value(sys, mesh, &x, bcs)?;
        x.values[k] = v;
        err = err.max((s.f[k] - (fp - fm) / (2.0 * step)).abs());
    }
    let scale = s.f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(normwise(err, scale))
}

/// `max |J_ij - FD_ij| / max |J_ij|`, FD being the central difference of
/// the assembled `F`.
pub fn fd_check_hessian(sys: &dyn LocalSystem, mesh: &Mesh, field: &NodalField, bcs: &BcSet, step: f64) -> Result<f64> {
    check_step(step)?;
    let s = assemble(sys, mesh, field, bcs)?;
    let n = field.values.len();
    let mut x = field.clone();
    let mut err: f64 = 0.0;
    for k in 0..n {
        let v = x.values[k];
        x.values[k] = v + step;
        let fp = assemble(sys, mesh, &x, bcs)?.f;
        x.values[k] = v - step;
        let fm = assemble(sys, mesh, &x, bcs)?.f;
        x.values[k] = v;
        for i in 0..n {
            let fd = (fp[i] - fm[i]) / (2.0 * step);
            err = err.max((s.j.get(i, k) - fd).abs());
        }
    }
    Ok(normwise(err, s.j.max_abs()))
}

/// Smallest error over a sweep of step sizes.
pub fn best_over_steps(steps: &[f64], mut check: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut best = f64::INFINITY;
    for &h in steps {
        best = best.min(check(h)?);
    }
    Ok(best)
}
