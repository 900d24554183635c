//! Local truncation error of the cell-centered Laplacian on one-unknown
//! patches, measured by repeated rescaling about the unknown.

use std::f64::consts::PI;

use super::stencil::{build_cc_stencil, Placement};
use crate::error::{Error, Result};
use crate::mesh::{rescale_patch, Patch, Point2};
use crate::output::CsvTable;

/// Harmonic test functions of the patch studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicCase {
    /// `(x-1)^3 - 3(x-1)y^2`
    Cubic,
    /// `x^4 + y^4 - 6x^2y^2`
    Quartic,
    /// `(sinh(pi x) sin(pi y) + sinh(pi y) sin(pi x)) / sinh(pi)`
    SinhSin,
}

impl HarmonicCase {
    pub const ALL: [HarmonicCase; 3] = [HarmonicCase::Cubic, HarmonicCase::Quartic, HarmonicCase::SinhSin];

    /// 1-based case number used in tables.
    pub fn number(self) -> usize {
        match self {
            HarmonicCase::Cubic => 1,
            HarmonicCase::Quartic => 2,
            HarmonicCase::SinhSin => 3,
        }
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.number() == n)
    }

    pub fn eval(self, p: Point2) -> f64 {
        let (x, y) = (p.x, p.y);
        match self {
            HarmonicCase::Cubic => {
                let s = x - 1.0;
                s * s * s - 3.0 * s * y * y
            }
            HarmonicCase::Quartic => {
                let (x2, y2) = (x * x, y * y);
                x2 * x2 + y2 * y2 - 6.0 * x2 * y2
            }
            HarmonicCase::SinhSin => {
                ((PI * x).sinh() * (PI * y).sin() + (PI * y).sinh() * (PI * x).sin()) / PI.sinh()
            }
        }
    }

    /// `(Psi_xxy, Psi_yyy)` at `p`.
    pub fn third_derivatives(self, p: Point2) -> (f64, f64) {
        let (x, y) = (p.x, p.y);
        match self {
            HarmonicCase::Cubic => (0.0, 0.0),
            HarmonicCase::Quartic => (-24.0 * y, 24.0 * y),
            HarmonicCase::SinhSin => {
                let (a, b) = (PI * x, PI * y);
                let p3 = PI.powi(3) / PI.sinh();
                // Psi = (sinh a sin b + sinh b sin a) / sinh pi
                let xxy = p3 * (a.sinh() * b.cos() - b.cosh() * a.sin());
                let yyy = p3 * (-a.sinh() * b.cos() + b.cosh() * a.sin());
                (xxy, yyy)
            }
        }
    }

    /// Leading truncation coefficient on an equilateral stencil:
    /// `e / h -> (Psi_xxy - Psi_yyy / 3) / sqrt(3)`.
    pub fn equilateral_leading_coefficient(self, p: Point2) -> f64 {
        let (xxy, yyy) = self.third_derivatives(p);
        (xxy - yyy / 3.0) / 3f64.sqrt()
    }
}

/// Errors on one patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchErrors {
    /// Distance from the focus centroid to the nearest neighbor centroid.
    pub dx: f64,
    /// Half the focus cell's shortest edge.
    pub h: f64,
    pub e_delta: f64,
    pub e_phi: f64,
}

/// `e_Delta`: the stencil applied to exact center values, divided by the
/// focus cell area. Signed.
pub fn truncation_error(patch: &Patch, phi: impl Fn(Point2) -> f64) -> Result<f64> {
    Ok(patch_errors(patch, &phi)?.e_delta)
}

fn patch_errors(patch: &Patch, phi: &dyn Fn(Point2) -> f64) -> Result<PatchErrors> {
    let s = build_cc_stencil(&patch.mesh, Placement::Centroid)?;
    let f = patch.focus;
    if s.neighbors[f].len() != 3 {
        return Err(Error::InvalidParameter("patch focus must have three neighbors".into()));
    }
    let c1 = s.centers[f];
    let phi1 = phi(c1);
    let flux: f64 = s.neighbors[f].iter().map(|&(n, c)| c * (phi(s.centers[n]) - phi1)).sum();
    let e_delta = flux / s.areas[f];
    // The one-unknown Dirichlet solve is psi_1 = sum c phi_n / sum c, so
    // psi_1 - phi_1 = flux / sum c; evaluated in this form to avoid cancellation.
    let e_phi = (flux / s.diag[f]).abs();
    let dx = s.neighbors[f]
        .iter()
        .map(|&(n, _)| c1.dist(s.centers[n]))
        .fold(f64::INFINITY, f64::min);
    let h = 0.5 * patch.mesh.geometry(f).edge_lengths.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PatchErrors { dx, h, e_delta, e_phi })
}

/// Errors at each rescale level.
#[derive(Debug, Clone)]
pub struct OrderStudy {
    pub levels: Vec<PatchErrors>,
}

impl OrderStudy {
    fn slope(&self, get: impl Fn(&PatchErrors) -> f64) -> f64 {
        let n = self.levels.len();
        let (a, b) = (&self.levels[n - 2], &self.levels[n - 1]);
        (get(a).abs() / get(b).abs()).ln() / (a.dx / b.dx).ln()
    }

    /// Observed order of `|e_Delta|` between the two finest levels.
    pub fn e_delta_order(&self) -> f64 {
        self.slope(|l| l.e_delta)
    }

    pub fn e_phi_order(&self) -> f64 {
        self.slope(|l| l.e_phi)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["dx", "e_delta", "e_phi"]);
        for l in &self.levels {
            t.push(vec![l.dx, l.e_delta.abs(), l.e_phi]);
        }
        t
    }
}

/// Errors on the patch and on `n_rescales` successive halvings.
pub fn order_study(patch: &Patch, phi: impl Fn(Point2) -> f64, n_rescales: usize) -> Result<OrderStudy> {
    if n_rescales < 2 {
        return Err(Error::InvalidParameter("order study needs at least 2 rescalings".into()));
    }
    let mut levels = Vec::with_capacity(n_rescales + 1);
    let mut current = patch.clone();
    levels.push(patch_errors(&current, &phi)?);
    for _ in 0..n_rescales {
        current = rescale_patch(&current, 0.5)?;
        levels.push(patch_errors(&current, &phi)?);
    }
    Ok(OrderStudy { levels })
}

/// Patch shapes used by the studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchKind {
    /// Unit-side equilateral cells, focus centroid at `(1, 1/2)`.
    Equilateral,
    /// Unit-leg right isosceles cells, focus centroid at the origin.
    Right,
}

impl PatchKind {
    pub fn build(self) -> Result<Patch> {
        match self {
            PatchKind::Equilateral => Patch::equilateral(1.0, Point2::new(1.0, 0.5)),
            PatchKind::Right => Patch::right(1.0, Point2::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_are_harmonic() {
        let h = 1e-3;
        for case in HarmonicCase::ALL {
            let p = Point2::new(0.3, 0.7);
            let f = |dx: f64, dy: f64| case.eval(Point2::new(p.x + dx, p.y + dy));
            let lap = (f(h, 0.0) + f(-h, 0.0) + f(0.0, h) + f(0.0, -h) - 4.0 * f(0.0, 0.0)) / (h * h);
            assert!(lap.abs() < 1e-4, "{case:?}: {lap}");
        }
    }

    #[test]
    fn third_derivatives_match_fd() {
        let h = 1e-3;
        for case in HarmonicCase::ALL {
            let p = Point2::new(0.4, 0.6);
            let f = |dx: f64, dy: f64| case.eval(Point2::new(p.x + dx, p.y + dy));
            let fxx = |dy: f64| (f(h, dy) - 2.0 * f(0.0, dy) + f(-h, dy)) / (h * h);
            let xxy = (fxx(h) - fxx(-h)) / (2.0 * h);
            let yyy = (f(0.0, 2.0 * h) - 2.0 * f(0.0, h) + 2.0 * f(0.0, -h) - f(0.0, -2.0 * h)) / (2.0 * h * h * h);
            let (a, b) = case.third_derivatives(p);
            assert!((a - xxy).abs() < 1e-3 * (1.0 + a.abs()), "{case:?} xxy {a} {xxy}");
            assert!((b - yyy).abs() < 1e-3 * (1.0 + b.abs()), "{case:?} yyy {b} {yyy}");
        }
    }

    #[test]
    fn cubic_is_exact_on_equilateral_patch() {
        let p = PatchKind::Equilateral.build().unwrap();
        let st = order_study(&p, |q| HarmonicCase::Cubic.eval(q), 8).unwrap();
        for l in &st.levels {
            assert!(l.e_delta.abs() < 1e-12, "{l:?}");
        }
    }

    #[test]
    fn quartic_equilateral_first_order() {
        let p = PatchKind::Equilateral.build().unwrap();
        let st = order_study(&p, |q| HarmonicCase::Quartic.eval(q), 8).unwrap();
        assert!((st.e_delta_order() - 1.0).abs() < 0.05);
        let last = st.levels.last().unwrap();
        let lead = HarmonicCase::Quartic.equilateral_leading_coefficient(p.scale_center);
        assert!((last.e_delta / last.h / lead - 1.0).abs() < 0.05);
    }

    #[test]
    fn right_patch_orders() {
        let p = PatchKind::Right.build().unwrap();
        let run = |c: HarmonicCase| order_study(&p, move |q| c.eval(q), 8).unwrap();
        let s1 = run(HarmonicCase::Cubic);
        let s2 = run(HarmonicCase::Quartic);
        let s3 = run(HarmonicCase::SinhSin);
        assert!((s1.e_delta_order() - 1.0).abs() < 0.1, "{}", s1.e_delta_order());
        assert!((s2.e_delta_order() - 2.0).abs() < 0.1, "{}", s2.e_delta_order());
        assert!(s3.e_delta_order().abs() < 0.1, "{}", s3.e_delta_order());
        assert!((s3.e_phi_order() - 2.0).abs() < 0.2, "{}", s3.e_phi_order());
    }

    #[test]
    fn rejects_short_study() {
        let p = PatchKind::Right.build().unwrap();
        assert!(order_study(&p, |q| q.x, 1).is_err());
    }
}
