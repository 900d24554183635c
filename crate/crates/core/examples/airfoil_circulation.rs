//! Circulation from the cell-centered stream function on three O-grids.

use fvflow::analytic::KarmanTrefftz;
use fvflow::cc_laplace::CcOptions;
use fvflow::scenarios::{circulation_study, StreamFarfield};

fn main() -> fvflow::Result<()> {
    let kt = KarmanTrefftz::reference();
    let cc = CcOptions { omega: 1.8, ..CcOptions::default() };
    let study = circulation_study(&kt, 15f64.to_radians(), &[52, 98, 173], 5.0, StreamFarfield::Exact, &cc)?;
    for l in &study.levels {
        println!("{:4} surface points: gamma {:.6} error {:.2e}", l.surface_points, l.circulation, l.error);
    }
    println!("exact {:.6}, monotone: {}", study.exact, study.monotone());
    Ok(())
}
