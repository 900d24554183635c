//! Cauchy-Riemann least squares on the unit square with a sinusoidal wall
//! solution, refined three times.

use fvflow::scenarios::{solve_sinusoidal_square, study_orders, SinusoidalOptions};

fn main() -> fvflow::Result<()> {
    let levels = solve_sinusoidal_square(&SinusoidalOptions::default())?;
    for l in &levels {
        let (u, v) = (&l.report.components[0], &l.report.components[1]);
        println!(
            "{:5} nodes: newton {} |e_u|2 {:.3e} |e_v|2 {:.3e}",
            l.report.num_nodes, l.state.iterations, u.l2, v.l2
        );
    }
    let reports: Vec<_> = levels.iter().map(|l| l.report.clone()).collect();
    for (i, o) in study_orders(&reports).iter().enumerate() {
        println!("order {i}->{}: u {:.2} v {:.2}", i + 1, o[0].0, o[1].0);
    }
    Ok(())
}
