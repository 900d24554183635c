//! Truncation and solution error of the cell-centered Laplacian under patch
//! rescaling.

use fvflow::cc_laplace::{order_study, HarmonicCase, PatchKind};

fn main() -> fvflow::Result<()> {
    for (kind, case) in [(PatchKind::Equilateral, 1), (PatchKind::Equilateral, 2), (PatchKind::Right, 3)] {
        let case = HarmonicCase::from_number(case).unwrap();
        let study = order_study(&kind.build()?, |p| case.eval(p), 8)?;
        println!("{kind:?} patch, case {}:", case.number());
        for l in &study.levels {
            println!("  dx={:.4e} e_delta={:.4e} e_phi={:.4e}", l.dx, l.e_delta.abs(), l.e_phi);
        }
        println!("  slopes: e_delta {:.3} e_phi {:.3}", study.e_delta_order(), study.e_phi_order());
    }
    Ok(())
}
