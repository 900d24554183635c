//! Built-in checks: derivatives, decoupling, stencils and solvers.

use fvflow::cli::{run_checks, Fault};

fn main() -> fvflow::Result<()> {
    for c in run_checks(None)? {
        println!("{}", c.line());
    }
    println!("with a perturbed Hessian entry:");
    for c in run_checks(Some(Fault::HessianEntry))?.iter().filter(|c| !c.passed) {
        println!("{}", c.line());
    }
    Ok(())
}
