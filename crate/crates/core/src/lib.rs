#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cc_laplace;
pub mod cli;
pub mod error;
pub mod linsolve;
pub mod lsq;
pub mod mesh;
pub mod output;
pub mod scenarios;

pub use error::{Error, Result};
