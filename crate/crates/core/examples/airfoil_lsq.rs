//! Least-squares velocity around a Karman-Trefftz airfoil with the Kutta
//! pair term.

use fvflow::analytic::KarmanTrefftz;
use fvflow::mesh::OgridStyle;
use fvflow::scenarios::{airfoil_mesh, isotropic_layers, solve_airfoil, AirfoilLsqOptions};

fn main() -> fvflow::Result<()> {
    let kt = KarmanTrefftz::reference();
    let opts = AirfoilLsqOptions::default();
    let n = 64;
    let mesh = airfoil_mesh(&kt, n, isotropic_layers(n, kt.a, opts.r_far), opts.r_far, OgridStyle::Radial)?;
    let r = solve_airfoil(&mesh, &kt, &opts)?;
    let u = &r.report.components[0];
    println!(
        "{} nodes: newton {} |e_u|2 {:.3e} kutta residual {:.2e}",
        mesh.num_nodes(),
        r.state.iterations,
        u.l2,
        r.kutta_residual
    );
    Ok(())
}
