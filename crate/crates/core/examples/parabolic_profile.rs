//! Thin parabolic profile: mixed boundary conditions and a singular solution.

use fvflow::scenarios::{solve_parabolic_profile, ParabolicOptions};

fn main() -> fvflow::Result<()> {
    let opts = ParabolicOptions { refinements: 2, ..ParabolicOptions::default() };
    for mesh in opts.meshes()? {
        let r = solve_parabolic_profile(&mesh, &opts)?;
        let u = &r.report.components[0];
        println!("{:5} nodes: |e_u|2 {:.3e} |e_u|inf {:.3e}", r.report.num_nodes, u.l2, u.linf);
    }
    Ok(())
}
