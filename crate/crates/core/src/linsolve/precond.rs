use super::csr::CsrMatrix;
use crate::error::{Error, Result};

/// Diagonal preconditioner `P = diag(1 / J_ll)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobi {
    pub inv_diag: Vec<f64>,
}

impl Jacobi {
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        for ((zi, ri), d) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * d;
        }
    }

    pub fn identity(n: usize) -> Self {
        Self { inv_diag: vec![1.0; n] }
    }
}

pub fn jacobi_precondition(j: &CsrMatrix) -> Result<Jacobi> {
    let inv_diag = j
        .diagonal()
        .into_iter()
        .enumerate()
        .map(|(i, d)| if d == 0.0 { Err(Error::ZeroDiagonal(i)) } else { Ok(1.0 / d) })
        .collect::<Result<_>>()?;
    Ok(Jacobi { inv_diag })
}
