//! Kármán-Trefftz airfoils and the exact potential flow around them.
//!
//! The map `(z - n c)/(z + n c) = ((zeta - c)/(zeta + c))^n`, `n = 2 - tau/pi`,
//! sends the circle of radius `a = c + m` centered at `(-m, 0)` to a
//! symmetric airfoil with trailing edge `z = n c` (the image of `zeta = c`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mesh::Point2;

/// Circle radius used for the reference airfoil.
pub const REFERENCE_RADIUS: f64 = 0.273094;
/// Trailing edge angle of the reference airfoil.
pub const REFERENCE_TAIL_DEG: f64 = 10.0;
/// Center offset giving a thickness ratio of 0.12 at [`REFERENCE_RADIUS`]
/// and [`REFERENCE_TAIL_DEG`]; reproduced by [`KarmanTrefftz::solve_offset`].
pub const REFERENCE_OFFSET: f64 = 0.017_962_547_042_343_2;

/// Parameters of a symmetric Kármán-Trefftz airfoil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarmanTrefftz {
    /// Circle radius in the `zeta` plane.
    pub a: f64,
    /// Circle center is `(-m, 0)`.
    pub m: f64,
    /// Exponent `2 - tau/pi`.
    pub n: f64,
    /// Output scaling `z -> scale (z - shift) + shift_to`.
    pub scale: f64,
    pub shift: f64,
    pub shift_to: f64,
}

impl KarmanTrefftz {
    pub fn new(a: f64, m: f64, tail_angle: f64) -> Result<Self> {
        if !(a > 0.0 && m >= 0.0 && m < a) || !(0.0..PI).contains(&tail_angle) {
            return Err(Error::InvalidParameter(format!(
                "Karman-Trefftz needs 0 <= m < a and 0 <= tau < pi (a={a}, m={m}, tau={tail_angle})"
            )));
        }
        Ok(Self {
            a,
            m,
            n: 2.0 - tail_angle / PI,
            scale: 1.0,
            shift: 0.0,
            shift_to: 0.0,
        })
    }

    /// The 12% thick, 10 degree airfoil on a circle of radius 0.273094.
    pub fn reference() -> Self {
        Self::new(REFERENCE_RADIUS, REFERENCE_OFFSET, REFERENCE_TAIL_DEG.to_radians()).unwrap()
    }

    /// Same airfoil rescaled so its chord is exactly 1 with the leading edge
    /// at `x = -1/2`. Lengths and circulations scale by `1/chord`.
    pub fn normalized(&self) -> Self {
        let base = Self {
            scale: 1.0,
            shift: 0.0,
            shift_to: 0.0,
            ..*self
        };
        let (le, te) = base.chord_ends();
        Self {
            scale: 1.0 / (te - le),
            shift: le,
            shift_to: -0.5,
            ..base
        }
    }

    /// Singular point `c = a - m`; its image is the trailing edge.
    pub fn c(&self) -> f64 {
        self.a - self.m
    }

    pub fn circle_center(&self) -> Complex64 {
        Complex64::new(-self.m, 0.0)
    }

    /// Circulation giving smooth flow off the trailing edge at incidence
    /// `alpha`, in output units.
    pub fn kutta_circulation(&self, alpha: f64) -> f64 {
        4.0 * PI * self.a * alpha.sin() * self.scale
    }

    fn ratio_pow(&self, zeta: Complex64) -> Complex64 {
        let c = self.c();
        ((zeta - c) / (zeta + c)).powf(self.n)
    }

    /// Unscaled map.
    fn raw_map(&self, zeta: Complex64) -> Complex64 {
        let nc = self.n * self.c();
        let w = self.ratio_pow(zeta);
        nc * (1.0 + w) / (1.0 - w)
    }

    fn to_output(&self, z: Complex64) -> Complex64 {
        (z - self.shift) * self.scale + self.shift_to
    }

    fn from_output(&self, z: Complex64) -> Complex64 {
        (z - self.shift_to) / self.scale + self.shift
    }

    /// Map a point of the circle plane to the airfoil plane.
    pub fn map(&self, zeta: Complex64) -> Result<Complex64> {
        let c = self.c();
        if (zeta + c).norm() == 0.0 {
            return Err(Error::Domain("Karman-Trefftz map at zeta = -c".into()));
        }
        let w = self.ratio_pow(zeta);
        if (1.0 - w).norm() < 1e-300 {
            return Err(Error::Domain("Karman-Trefftz map at a pole".into()));
        }
        Ok(self.to_output(self.raw_map(zeta)))
    }

    /// `dz/dzeta` in output units.
    pub fn derivative(&self, zeta: Complex64) -> Complex64 {
        let c = self.c();
        let n = self.n;
        let w = self.ratio_pow(zeta);
        let d = 4.0 * n * n * c * c * w / ((1.0 - w) * (1.0 - w) * (zeta - c) * (zeta + c));
        d * self.scale
    }

    /// Preimage outside the circle of a point `z` outside the airfoil.
    pub fn inverse(&self, z: Complex64) -> Result<Complex64> {
        let zr = self.from_output(z);
        let c = self.c();
        let nc = self.n * c;
        let w = (zr - nc) / (zr + nc);
        let root = w.powf(1.0 / self.n);
        let center = self.circle_center();
        let mut best: Option<(f64, Complex64)> = None;
        for k in -1..=1 {
            let t = root * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.n);
            if (1.0 - t).norm() < 1e-300 {
                continue;
            }
            let zeta = c * (1.0 + t) / (1.0 - t);
            if (zeta - center).norm() < self.a * (1.0 - 1e-9) {
                continue;
            }
            let err = (self.raw_map(zeta) - zr).norm();
            if best.map_or(true, |(e, _)| err < e) {
                best = Some((err, zeta));
            }
        }
        let (_, mut zeta) = best.ok_or_else(|| Error::Domain(format!("no exterior preimage of {z}")))?;
        for _ in 0..20 {
            let f = self.raw_map(zeta) - zr;
            let d = self.derivative(zeta) / self.scale;
            if d.norm() == 0.0 {
                break;
            }
            let step = f / d;
            zeta -= step;
            if step.norm() < 1e-15 * (1.0 + zeta.norm()) {
                break;
            }
        }
        Ok(zeta)
    }

    /// Point on the airfoil surface for circle angle `theta` (0 is the
    /// trailing edge).
    pub fn surface_point(&self, theta: f64) -> Point2 {
        let zeta = self.circle_center() + Complex64::from_polar(self.a, theta);
        let z = self.map(zeta).expect("circle points are regular");
        Point2::new(z.re, z.im)
    }

    pub fn trailing_edge(&self) -> Point2 {
        let z = self.to_output(Complex64::new(self.n * self.c(), 0.0));
        Point2::new(z.re, z.im)
    }

    /// Abscissae of the leading and trailing edges.
    pub fn chord_ends(&self) -> (f64, f64) {
        let le = self.surface_point(PI).x;
        (le, self.trailing_edge().x)
    }

    pub fn chord(&self) -> f64 {
        let (le, te) = self.chord_ends();
        te - le
    }

    /// Maximum thickness (twice the largest ordinate, the airfoil being
    /// symmetric).
    pub fn thickness(&self) -> f64 {
        let f = |t: f64| self.surface_point(t).y;
        let samples = 2000;
        let (mut best_t, mut best) = (0.0, f64::MIN);
        for i in 1..samples {
            let t = PI * i as f64 / samples as f64;
            let y = f(t);
            if y > best {
                best = y;
                best_t = t;
            }
        }
        // golden section refinement around the sampled maximum
        let dt = PI / samples as f64;
        let (mut lo, mut hi) = (best_t - dt, best_t + dt);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if f(x1) < f(x2) {
                lo = x1;
            } else {
                hi = x2;
            }
        }
        2.0 * f(0.5 * (lo + hi))
    }

    /// Center offset `m` for which the airfoil on a circle of radius `a` with
    /// trailing edge angle `tail_angle` has the requested thickness ratio.
    pub fn solve_offset(a: f64, tail_angle: f64, thickness_ratio: f64) -> Result<f64> {
        let ratio = |m: f64| -> Result<f64> {
            let kt = Self::new(a, m, tail_angle)?;
            Ok(kt.thickness() / kt.chord())
        };
        let (mut lo, mut hi) = (0.0, 0.5 * a);
        if ratio(hi)? < thickness_ratio {
            return Err(Error::InvalidParameter(format!("thickness ratio {thickness_ratio} unreachable")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ratio(mid)? < thickness_ratio {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Exact velocity of uniform flow at incidence `alpha` (unit speed far
    /// away) with the Kutta circulation. Zero at the trailing edge.
    pub fn exact_velocity(&self, alpha: f64, p: Point2) -> Result<(f64, f64)> {
        let te = self.trailing_edge();
        if p.dist(te) < 1e-12 * self.scale.max(1.0) {
            return Ok((0.0, 0.0));
        }
        let z = Complex64::new(p.x, p.y);
        let zeta = self.inverse(z)?;
        let s = zeta - self.circle_center();
        if s.norm() < self.a * (1.0 - 1e-9) {
            return Err(Error::Domain(format!("({}, {}) lies inside the airfoil", p.x, p.y)));
        }
        let gamma = 4.0 * PI * self.a * alpha.sin();
        let e = Complex64::from_polar(1.0, -alpha);
        let w_cyl = e - self.a * self.a * e.conj() / (s * s) + Complex64::i() * gamma / (2.0 * PI * s);
        // the far stream has unit speed in output units too
        let w = w_cyl / (self.derivative(zeta) / self.scale);
        Ok((w.re, -w.im))
    }
    /// Exact stream function of the same flow, `Im W` with the lift
    /// convention of [`crate::analytic::farfield_stream`] (so far away it
    /// tends to `y cos a - x sin a + G ln r / 2pi` up to a constant).
    pub fn exact_stream(&self, alpha: f64, p: Point2) -> Result<f64> {
        let zeta = self.inverse(Complex64::new(p.x, p.y))?;
        let s = zeta - self.circle_center();
        if s.norm() < self.a * (1.0 - 1e-9) {
            return Err(Error::Domain(format!("({}, {}) lies inside the airfoil", p.x, p.y)));
        }
        let gamma = 4.0 * PI * self.a * alpha.sin();
        let e = Complex64::from_polar(1.0, -alpha);
        let w = e * s + self.a * self.a * e.conj() / s + Complex64::i() * gamma / (2.0 * PI) * s.ln();
        Ok(self.scale * w.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{airfoil_farfield_velocity, FarfieldMode};

    #[test]
    fn joukowski_limit() {
        let kt = KarmanTrefftz::new(1.0, 0.0, 0.0).unwrap();
        let zeta = Complex64::new(1.3, 0.7);
        let z = kt.map(zeta).unwrap();
        let jouk = zeta + 1.0 / zeta;
        assert!((z - jouk).norm() < 1e-13);
    }

    #[test]
    fn reference_geometry() {
        let kt = KarmanTrefftz::reference();
        assert!((kt.chord() - 0.997196).abs() < 1e-6, "{}", kt.chord());
        assert!((kt.thickness() / kt.chord() - 0.12).abs() < 1e-10);
        let m = KarmanTrefftz::solve_offset(REFERENCE_RADIUS, REFERENCE_TAIL_DEG.to_radians(), 0.12).unwrap();
        assert!((m - REFERENCE_OFFSET).abs() < 1e-14, "{m}");
        // the quoted exact circulation carries more digits of the radius
        assert!((kt.kutta_circulation(15f64.to_radians()) - 0.888215341).abs() < 5e-6);
    }

    #[test]
    fn trailing_edge_angle() {
        let kt = KarmanTrefftz::reference();
        let te = kt.trailing_edge();
        let up = kt.surface_point(1e-5) - te;
        let lo = kt.surface_point(-1e-5) - te;
        let ang = (up.cross(lo) / (up.norm() * lo.norm())).abs().asin();
        assert!((ang.to_degrees() - 10.0).abs() < 0.05, "{}", ang.to_degrees());
    }

    #[test]
    fn normalized_chord() {
        let kt = KarmanTrefftz::reference().normalized();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..10_000 {
            let x = kt.surface_point(2.0 * PI * i as f64 / 10_000.0).x;
            lo = lo.min(x);
            hi = hi.max(x);
        }
        assert!((hi - lo - 1.0).abs() < 1e-6);
        assert!((lo + 0.5).abs() < 1e-6);
        let (u, v) = kt.exact_velocity(0.2, Point2::new(0.1, 2.0)).unwrap();
        let (u0, v0) = KarmanTrefftz::reference()
            .exact_velocity(0.2, Point2::new((0.1 + 0.5) / kt.scale + kt.shift, 2.0 / kt.scale))
            .unwrap();
        assert!((u - u0).abs() < 1e-12 && (v - v0).abs() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let kt = KarmanTrefftz::reference();
        for &(r, t) in &[(1.01, 0.3), (2.0, 3.0), (5.0, -1.2), (1.0001, 0.01), (1.5, PI)] {
            let zeta = kt.circle_center() + Complex64::from_polar(kt.a * r, t);
            let z = kt.map(zeta).unwrap();
            let back = kt.inverse(z).unwrap();
            assert!((back - zeta).norm() < 1e-11, "{back} vs {zeta}");
        }
    }

    #[test]
    fn derivative_matches_fd() {
        let kt = KarmanTrefftz::reference();
        let zeta = Complex64::new(0.2, 0.5);
        let h = 1e-6;
        let fd = (kt.map(zeta + h).unwrap() - kt.map(zeta - h).unwrap()) / (2.0 * h);
        assert!((fd - kt.derivative(zeta)).norm() < 1e-8);
    }

    #[test]
    fn velocity_properties() {
        let kt = KarmanTrefftz::reference();
        assert_eq!(kt.exact_velocity(0.3, kt.trailing_edge()).unwrap(), (0.0, 0.0));
        let (u, v) = kt.exact_velocity(0.0, Point2::new(1.5, 0.0)).unwrap();
        assert!(v.abs() < 1e-12 && u > 0.0);
        let (u1, v1) = kt.exact_velocity(0.0, Point2::new(0.2, 0.3)).unwrap();
        let (u2, v2) = kt.exact_velocity(0.0, Point2::new(0.2, -0.3)).unwrap();
        assert!((u1 - u2).abs() < 1e-12 && (v1 + v2).abs() < 1e-12);
        let al = 15f64.to_radians();
        // a thousand chords out only the free stream and the bound vortex remain
        let far = Point2::new(1000.0, 0.0);
        let (u, v) = kt.exact_velocity(al, far).unwrap();
        let g = kt.kutta_circulation(al);
        let (uf, vf) = airfoil_farfield_velocity(al, g, far.x, far.y, FarfieldMode::Corrected).unwrap();
        assert!((u - uf).abs() < 1e-6 && (v - vf).abs() < 1e-6);
        assert!((u - al.cos()).hypot(v - al.sin()) < 1.01 * g / (2.0 * PI * 1000.0));
        // tangency on the surface
        for i in 1..40 {
            let t = 2.0 * PI * i as f64 / 40.0;
            let p = kt.surface_point(t);
            let d = kt.surface_point(t + 1e-7) - kt.surface_point(t - 1e-7);
            let (u, v) = kt.exact_velocity(al, p).unwrap();
            let normal = (u * d.y - v * d.x) / d.norm();
            assert!(normal.abs() < 1e-6, "{t}: {normal}");
        }
        // speed decays (slowly, like r^(2-n)/n) into the trailing edge
        let speed = |t: f64| {
            let (u, v) = kt.exact_velocity(al, kt.surface_point(t)).unwrap();
            u.hypot(v)
        };
        assert!(speed(1e-8) < speed(1e-4) && speed(1e-4) < speed(1e-2));
    }

    #[test]
    fn stream_constant_on_surface_and_matches_velocity() {
        let kt = KarmanTrefftz::reference();
        let alpha = 15f64.to_radians();
        let te = kt.exact_stream(alpha, kt.surface_point(0.3)).unwrap();
        for t in [1.0, 2.0, 3.0, 4.5, 6.0] {
            let v = kt.exact_stream(alpha, kt.surface_point(t)).unwrap();
            assert!((v - te).abs() < 1e-9, "{v} {te}");
        }
        let p = Point2::new(0.3, 0.4);
        let h = 1e-6;
        let psi = |x: f64, y: f64| kt.exact_stream(alpha, Point2::new(x, y)).unwrap();
        let u = (psi(p.x, p.y + h) - psi(p.x, p.y - h)) / (2.0 * h);
        let v = -(psi(p.x + h, p.y) - psi(p.x - h, p.y)) / (2.0 * h);
        let (ue, ve) = kt.exact_velocity(alpha, p).unwrap();
        assert!((u - ue).abs() < 1e-7 && (v - ve).abs() < 1e-7, "{u} {ue} {v} {ve}");
    }
}
