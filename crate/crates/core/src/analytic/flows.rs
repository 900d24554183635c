//! Closed-form potential flows used as boundary data and error references.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::Point2;

/// Parameters shared by the reference flows. Which fields matter depends on
/// the flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// Wavenumber (sinusoidal wall) or source strength (parabolic profile).
    pub k: f64,
    /// Cylinder radius or profile half-length.
    pub a: f64,
    pub gamma: f64,
    /// Angle of attack in radians.
    pub alpha: f64,
    pub u_inf: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            k: 6.0 * PI,
            a: 0.5,
            gamma: 0.0,
            alpha: 0.0,
            u_inf: 1.0,
        }
    }
}

/// Flow over an infinite sinusoidal wall: `u = e^{-ky} cos kx`,
/// `v = -e^{-ky} sin kx`.
pub fn sinusoidal_wall(k: f64, x: f64, y: f64) -> (f64, f64) {
    let e = (-k * y).exp();
    (e * (k * x).cos(), -e * (k * x).sin())
}

/// Flow past a thin parabolic-arc profile between the foci `(-a,0)` and
/// `(a,0)`. The angles use the principal `atan2` branch, so `y = +0` and
/// `y = -0` give the two sides of the cut between the foci.
pub fn parabolic_profile(a: f64, k: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    if y == 0.0 && (x.abs() - a).abs() == 0.0 {
        return Err(Error::Domain(format!("parabolic profile singular at ({x}, {y})")));
    }
    let r2 = (x + a).hypot(y);
    let r1 = (x - a).hypot(y);
    let th2 = y.atan2(x + a);
    let th1 = y.atan2(x - a);
    let l = (r2 / r1).ln();
    let dth = th2 - th1;
    let c = k / (a * a);
    let u = c * (x * l - y * dth) - 2.0 * k / a;
    let v = -c * (y * l + x * dth);
    Ok((u, v))
}

/// Uniform flow past a cylinder of radius `a` at the origin with
/// counterclockwise circulation `gamma`.
pub fn cylinder_flow(a: f64, gamma: f64, u_inf: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return Err(Error::Domain("cylinder flow evaluated at the origin".into()));
    }
    let r4 = r2 * r2;
    let a2 = a * a;
    let vort = gamma / (2.0 * PI * r2);
    let u = u_inf - y * vort - a2 * (1.0 / r2 - 2.0 * y * y / r4) * u_inf;
    let v = x * vort - 2.0 * a2 * x * y / r4 * u_inf;
    Ok((u, v))
}

/// Location of the stagnation points of [`cylinder_flow`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stagnation {
    /// Two surface points at polar angles `theta` and `pi - theta` (radians).
    Surface([f64; 2]),
    /// A single point in the flow above the cylinder.
    OffBody(Point2),
}

pub fn stagnation_points(a: f64, gamma: f64, u_inf: f64) -> Stagnation {
    let s = gamma / (4.0 * PI * a * u_inf);
    if s <= 1.0 {
        let th = s.asin();
        Stagnation::Surface([th, PI - th])
    } else {
        let beta = gamma / (2.0 * PI * a * u_inf);
        let y = 0.5 * a * (beta + (beta * beta - 4.0).sqrt());
        Stagnation::OffBody(Point2::new(0.0, y))
    }
}

/// Farfield stream function of uniform flow at incidence `alpha` plus a
/// clockwise vortex of strength `gamma`.
pub fn farfield_stream(alpha: f64, gamma: f64, x: f64, y: f64) -> Result<f64> {
    let r = x.hypot(y);
    if r == 0.0 {
        return Err(Error::Domain("farfield stream function at the origin".into()));
    }
    Ok(y * alpha.cos() - x * alpha.sin() + gamma * r.ln() / (2.0 * PI))
}

/// Which farfield velocity to impose around an airfoil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FarfieldMode {
    /// Velocity of [`farfield_stream`]: `(cos a + G y / 2pi r^2, sin a - G x / 2pi r^2)`.
    #[default]
    Corrected,
    /// The printed form `(cos a + G / 2pi r^2, sin a - G / 2pi r^2)`, kept
    /// for comparison. It is not divergence free.
    Paper,
}

pub fn airfoil_farfield_velocity(alpha: f64, gamma: f64, x: f64, y: f64, mode: FarfieldMode) -> Result<(f64, f64)> {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return Err(Error::Domain("farfield velocity at the origin".into()));
    }
    let g = gamma / (2.0 * PI * r2);
    Ok(match mode {
        FarfieldMode::Corrected => (alpha.cos() + g * y, alpha.sin() - g * x),
        FarfieldMode::Paper => (alpha.cos() + g, alpha.sin() - g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = 1e-6;

    fn cr_residual(f: impl Fn(f64, f64) -> (f64, f64), x: f64, y: f64) -> (f64, f64) {
        let (ue, ve) = f(x + H, y);
        let (uw, vw) = f(x - H, y);
        let (un, vn) = f(x, y + H);
        let (us, vs) = f(x, y - H);
        let ux = (ue - uw) / (2.0 * H);
        let vx = (ve - vw) / (2.0 * H);
        let uy = (un - us) / (2.0 * H);
        let vy = (vn - vs) / (2.0 * H);
        (ux + vy, vx - uy)
    }

    #[test]
    fn sinusoidal_values() {
        let k = 6.0 * PI;
        assert_eq!(sinusoidal_wall(k, 0.0, 0.0), (1.0, 0.0));
        let (u, v) = sinusoidal_wall(k, 0.3, 1.0);
        assert!((u.hypot(v) - (-6.0 * PI).exp()).abs() < 1e-20);
        assert!(((-6.0 * PI).exp() - 6.5e-9).abs() < 1e-10);
        for &(x, y) in &[(0.1, 0.2), (0.7, 0.05), (0.33, 0.9)] {
            let (d, c) = cr_residual(|x, y| sinusoidal_wall(k, x, y), x, y);
            assert!(d.abs() < 1e-6 * k && c.abs() < 1e-6 * k, "{d} {c}");
        }
    }

    #[test]
    fn parabolic_limits_and_cut() {
        let (a, k) = (0.5, -0.25);
        // the constant cancels the far-field limit of the log term
        let (u, v) = parabolic_profile(a, k, -100.0, 0.0).unwrap();
        assert!(u.abs() < 1e-4 && v.abs() < 1e-12, "{u}");
        let (_, vp) = parabolic_profile(a, k, 0.1, 1e-6).unwrap();
        let (_, vm) = parabolic_profile(a, k, 0.1, -1e-6).unwrap();
        assert!(vp * vm < 0.0, "{vp} {vm}");
        assert!(parabolic_profile(a, k, 0.5, 0.0).is_err());
        assert!(parabolic_profile(a, k, -0.5, 0.0).is_err());
        for &(x, y) in &[(0.1, 0.3), (-0.9, -0.2), (2.0, 0.01)] {
            let (d, c) = cr_residual(|x, y| parabolic_profile(a, k, x, y).unwrap(), x, y);
            assert!(d.abs() < 1e-5 && c.abs() < 1e-5);
        }
    }

    #[test]
    fn cylinder_values() {
        let a = 0.5;
        let (u, v) = cylinder_flow(a, 0.0, 1.0, a, 0.0).unwrap();
        assert!(u.abs() < 1e-15 && v.abs() < 1e-15);
        let (u, v) = cylinder_flow(a, 0.0, 1.0, 0.0, a).unwrap();
        assert!((u - 2.0).abs() < 1e-15 && v.abs() < 1e-15);
        let (u, v) = cylinder_flow(a, 0.0, 1.0, 1e4 * a, 0.0).unwrap();
        assert!((u - 1.0).abs() < 1e-6 && v.abs() < 1e-6);
        assert!(cylinder_flow(a, 0.0, 1.0, 0.0, 0.0).is_err());
        for g in [0.0, PI, 2.0 * PI * a * 3f64.sqrt(), 6.0 * PI * a] {
            for i in 0..64 {
                let t = i as f64 * 2.0 * PI / 64.0;
                let (x, y) = (a * t.cos(), a * t.sin());
                let (u, v) = cylinder_flow(a, g, 1.0, x, y).unwrap();
                assert!((u * x + v * y).abs() / a < 1e-10);
            }
            let (d, c) = cr_residual(|x, y| cylinder_flow(a, g, 1.0, x, y).unwrap(), 0.8, -0.6);
            assert!(d.abs() < 1e-5 && c.abs() < 1e-5);
        }
    }

    #[test]
    fn stagnation_table() {
        let a = 0.5;
        let deg = 180.0 / PI;
        match stagnation_points(a, 2.0 * PI * a, 1.0) {
            Stagnation::Surface([t1, t2]) => {
                assert!((t1 * deg - 30.0).abs() < 1e-12 && (t2 * deg - 150.0).abs() < 1e-12)
            }
            s => panic!("{s:?}"),
        }
        match stagnation_points(a, 2.0 * PI * a * 3f64.sqrt(), 1.0) {
            Stagnation::Surface([t1, t2]) => {
                assert!((t1 * deg - 60.0).abs() < 1e-9 && (t2 * deg - 120.0).abs() < 1e-9)
            }
            s => panic!("{s:?}"),
        }
        match stagnation_points(a, 6.0 * PI * a, 1.0) {
            Stagnation::OffBody(p) => {
                assert!((p.y - 0.25 * (3.0 + 5f64.sqrt())).abs() < 1e-15);
                let (u, v) = cylinder_flow(a, 6.0 * PI * a, 1.0, p.x, p.y).unwrap();
                assert!(u.abs() < 1e-12 && v.abs() < 1e-12);
            }
            s => panic!("{s:?}"),
        }
        // the two angles merge at the critical circulation
        match stagnation_points(a, 4.0 * PI * a * (1.0 - 1e-12), 1.0) {
            Stagnation::Surface([t1, t2]) => assert!((t1 - t2).abs() < 1e-5),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn farfield_stream_and_velocity() {
        assert_eq!(farfield_stream(0.0, 0.0, 0.3, 0.7).unwrap(), 0.7);
        let al = 15f64.to_radians();
        let d = farfield_stream(al, 0.0, 0.4, 0.9).unwrap() - farfield_stream(al, 0.0, 0.4, -0.9).unwrap();
        assert!((d - 1.8 * al.cos()).abs() < 1e-15);
        assert!(farfield_stream(al, 1.0, 0.0, 0.0).is_err());

        let (u, v) = airfoil_farfield_velocity(al, 0.0, 3.0, -2.0, FarfieldMode::Corrected).unwrap();
        assert_eq!((u, v), (al.cos(), al.sin()));
        let g = 0.888215341;
        let f = |x, y| airfoil_farfield_velocity(al, g, x, y, FarfieldMode::Corrected).unwrap();
        let (div, curl) = cr_residual(f, 1.3, 0.4);
        assert!(div.abs() < 1e-6 && curl.abs() < 1e-6);
        // velocity of the stream function
        let psi = |x, y| farfield_stream(al, g, x, y).unwrap();
        let (x, y) = (1.3, 0.4);
        let (u, v) = f(x, y);
        assert!((u - (psi(x, y + H) - psi(x, y - H)) / (2.0 * H)).abs() < 1e-8);
        assert!((v + (psi(x + H, y) - psi(x - H, y)) / (2.0 * H)).abs() < 1e-8);
        // clockwise line integral on r = R recovers the circulation
        let (r, n) = (4.0, 10_000);
        let mut circ = 0.0;
        for i in 0..n {
            let t = -(i as f64 + 0.5) * 2.0 * PI / n as f64;
            let (u, v) = f(r * t.cos(), r * t.sin());
            // clockwise tangent times arc element
            circ += (u * t.sin() - v * t.cos()) * r * 2.0 * PI / n as f64;
        }
        assert!((circ - g).abs() < 1e-6, "{circ}");
    }
}
