//! Flat-plate boundary layer compared with the Blasius profile.

use fvflow::linsolve::GmresSettings;
use fvflow::scenarios::{solve_boundary_layer, BoundaryLayerOptions};

fn main() -> fvflow::Result<()> {
    let opts = BoundaryLayerOptions { gmres: GmresSettings::LOOSE, ..BoundaryLayerOptions::default() };
    let r = solve_boundary_layer(&opts)?;
    let c = &r.comparison;
    println!("newton {} status {:?}", r.state.iterations, r.state.status);
    println!("u at x = {}: max deviation {:.4}", c.x_profile, c.u_profile_dev);
    println!("wall vorticity on [{}, {}]: max relative deviation {:.4}", c.wall_range.0, c.wall_range.1, c.wall_omega_dev);
    Ok(())
}
