//! Cylinder with circulation: stagnation points for increasing circulation.

use std::f64::consts::PI;

use fvflow::scenarios::{solve_cylinder, CylinderOptions, StagnationFinding};

fn main() -> fvflow::Result<()> {
    let base = CylinderOptions::default();
    let a = base.a;
    for (label, gamma) in [("0", 0.0), ("2pia", 2.0 * PI * a), ("2pia*sqrt3", 2.0 * PI * a * 3f64.sqrt()), ("6pia", 6.0 * PI * a)] {
        let opts = CylinderOptions { gamma, ..base.clone() };
        let r = solve_cylinder(&opts.mesh(238, 22)?, &opts)?;
        match r.stagnation {
            StagnationFinding::Surface { angles_deg, .. } => {
                println!("gamma {label}: surface stagnation at {:.2} and {:.2} deg", angles_deg[0], angles_deg[1])
            }
            StagnationFinding::OffBody { point, .. } => println!("gamma {label}: off-body stagnation at y = {:.3}", point.y),
        }
    }
    Ok(())
}
