//! Blasius flat-plate boundary layer: `2 f''' + f f'' = 0`, `f(0) = f'(0) = 0`,
//! `f'(inf) = 1`, solved by RK4 shooting on `f''(0)`.

use crate::error::{Error, Result};
use crate::output::CsvTable;

/// Sampled similarity solution on a uniform `eta` grid.
#[derive(Debug, Clone)]
pub struct BlasiusProfile {
    pub h: f64,
    pub eta: Vec<f64>,
    pub f: Vec<f64>,
    pub fp: Vec<f64>,
    pub fpp: Vec<f64>,
    /// Wall value `f''(0)`.
    pub fpp0: f64,
}

type State = [f64; 3];

fn rhs(s: State) -> State {
    [s[1], s[2], -0.5 * s[0] * s[2]]
}

fn rk4_step(s: State, h: f64) -> State {
    let add = |a: State, b: State, k: f64| [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]];
    let k1 = rhs(s);
    let k2 = rhs(add(s, k1, 0.5 * h));
    let k3 = rhs(add(s, k2, 0.5 * h));
    let k4 = rhs(add(s, k3, h));
    [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

fn integrate(fpp0: f64, steps: usize, h: f64) -> Vec<State> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = [0.0, 0.0, fpp0];
    out.push(s);
    for _ in 0..steps {
        s = rk4_step(s, h);
        out.push(s);
    }
    out
}

/// Shoot on `f''(0)` until `|f'(eta_max) - 1| < 1e-8`.
pub fn blasius_solve(eta_max: f64, h: f64) -> Result<BlasiusProfile> {
    if !(eta_max >= 8.0) || !(h > 0.0 && h <= 0.1) {
        return Err(Error::InvalidParameter(format!("need eta_max >= 8 and 0 < h <= 0.1 (got {eta_max}, {h})")));
    }
    let steps = (eta_max / h).round() as usize;
    let end = |s: f64| integrate(s, steps, h)[steps][1] - 1.0;
    let (mut lo, mut hi) = (0.01, 2.0);
    let (flo, fhi) = (end(lo), end(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::ShootingBracket(format!("f'(eta_max)-1 = {flo} at {lo}, {fhi} at {hi}")));
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        s = 0.5 * (lo + hi);
        let r = end(s);
        if r.abs() < 1e-8 && hi - lo < 1e-12 {
            break;
        }
        if r < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    if end(s).abs() >= 1e-8 {
        return Err(Error::ShootingBracket(format!("no convergence, residual {}", end(s))));
    }
    let states = integrate(s, steps, h);
    Ok(BlasiusProfile {
        h,
        eta: (0..=steps).map(|i| i as f64 * h).collect(),
        f: states.iter().map(|s| s[0]).collect(),
        fp: states.iter().map(|s| s[1]).collect(),
        fpp: states.iter().map(|s| s[2]).collect(),
        fpp0: s,
    })
}

impl BlasiusProfile {
    /// Profile with `eta_max = 10`, `h = 0.01`.
    pub fn standard() -> Result<Self> {
        blasius_solve(10.0, 0.01)
    }

    pub fn eta_max(&self) -> f64 {
        *self.eta.last().unwrap()
    }

    /// `(f, f', f'')` at `eta`: linear interpolation inside the table, the
    /// asymptote `f' = 1` beyond it.
    pub fn sample(&self, eta: f64) -> (f64, f64, f64) {
        let last = self.eta.len() - 1;
        if eta >= self.eta[last] {
            return (self.f[last] + (eta - self.eta[last]), 1.0, 0.0);
        }
        let t = (eta.max(0.0) / self.h).min(last as f64);
        let i = (t.floor() as usize).min(last - 1);
        let w = t - i as f64;
        let lerp = |v: &[f64]| v[i] + w * (v[i + 1] - v[i]);
        (lerp(&self.f), lerp(&self.fp), lerp(&self.fpp))
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["eta", "f", "fp", "fpp"]);
        for i in 0..self.eta.len() {
            t.push(vec![self.eta[i], self.f[i], self.fp[i], self.fpp[i]]);
        }
        t
    }
}

/// Velocity and vorticity `(u, v, omega)` of the Blasius layer at `(x, y)`,
/// with `eta = y / sqrt(x)`. Vorticity is `du/dy = f''/sqrt(x)`.
pub fn blasius_eval(p: &BlasiusProfile, x: f64, y: f64) -> Result<(f64, f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Blasius profile needs x > 0 (got {x})")));
    }
    let sx = x.sqrt();
    let eta = y / sx;
    let (f, fp, fpp) = p.sample(eta);
    Ok((fp, (eta * fp - f) / (2.0 * sx), fpp / sx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_shear() {
        let p = BlasiusProfile::standard().unwrap();
        assert!((p.fpp0 - 0.33206).abs() < 1e-4, "{}", p.fpp0);
        assert_eq!((p.f[0], p.fp[0]), (0.0, 0.0));
        assert!((p.fp.last().unwrap() - 1.0).abs() < 1e-6);
        assert!(p.fp.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        let half = p.eta.len() / 2;
        assert!(p.fpp[..half].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn step_halving() {
        let a = blasius_solve(10.0, 0.02).unwrap();
        let b = blasius_solve(10.0, 0.01).unwrap();
        assert!((a.fpp0 - b.fpp0).abs() < 1e-7);
    }

    #[test]
    fn evaluation() {
        let p = BlasiusProfile::standard().unwrap();
        let (u, v, w) = blasius_eval(&p, 0.25, 0.0).unwrap();
        assert_eq!((u, v), (0.0, 0.0));
        assert!((w - p.fpp0 / 0.5).abs() < 1e-15);
        let (u, _, w) = blasius_eval(&p, 0.5, 50.0).unwrap();
        assert_eq!((u, w), (1.0, 0.0));
        let (u1, _, _) = blasius_eval(&p, 0.25, 0.5).unwrap();
        let (u2, _, _) = blasius_eval(&p, 1.0, 1.0).unwrap();
        assert!((u1 - u2).abs() < 1e-14);
        assert!(blasius_eval(&p, 0.0, 1.0).is_err());
        assert!(blasius_solve(5.0, 0.01).is_err());
    }
}
