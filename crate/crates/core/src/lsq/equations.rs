//! Equation sets `A(u) u_x + B(u) u_y + S(u) = 0` and their per-element
//! least-squares contributions.

use super::element::basis_gradients;
use crate::mesh::{ElementGeometry, Point2};

/// Coefficients of a first-order system evaluated at the element average.
///
/// Matrices are `n x n`, row-major: entry `(m, c)` multiplies the derivative
/// of variable `c` in equation `m`.
pub trait EquationSet: Sync {
    fn num_vars(&self) -> usize;

    fn coefficients(&self, ubar: &[f64], a: &mut [f64], b: &mut [f64], s: &mut [f64]);

    /// Derivatives of `A`, `B`, `S` with respect to `ubar[c]`.
    fn coefficient_derivatives(&self, ubar: &[f64], c: usize, da: &mut [f64], db: &mut [f64], ds: &mut [f64]);

    /// Second derivatives with respect to `ubar[c]`, `ubar[d]`. Zero unless
    /// overridden.
    fn coefficient_second_derivatives(
        &self,
        _ubar: &[f64],
        _c: usize,
        _d: usize,
        da: &mut [f64],
        db: &mut [f64],
        ds: &mut [f64],
    ) {
        da.fill(0.0);
        db.fill(0.0);
        ds.fill(0.0);
    }

    /// False when every second coefficient derivative vanishes.
    fn has_second_derivatives(&self) -> bool {
        false
    }
}

/// Residual, functional value and derivatives of one element.
///
/// Local unknowns are node-major: index `k * n + c` is variable `c` at the
/// element's `k`-th vertex.
#[derive(Debug, Clone, Default)]
pub struct ElementContribution {
    pub residual: Vec<f64>,
    /// `1/2 R^t R Omega`
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major `3n x 3n`; empty when not requested.
    pub hess: Vec<f64>,
}

impl ElementContribution {
    fn reset(&mut self, n: usize, hessian: bool) {
        self.residual.clear();
        self.residual.resize(n, 0.0);
        self.grad.clear();
        self.grad.resize(3 * n, 0.0);
        self.hess.clear();
        if hessian {
            self.hess.resize(9 * n * n, 0.0);
        }
    }
}

/// Anything that can produce per-element contributions.
pub trait LocalSystem: Sync {
    fn num_vars(&self) -> usize;
    fn element(&self, geom: &ElementGeometry, local: &[f64], hessian: bool, out: &mut ElementContribution);
}

/// Which implementation of an equation set's derivatives to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelPath {
    /// Hand-expanded formulas.
    #[default]
    Fast,
    /// The general second-variation formula driven by [`EquationSet`].
    Generic,
}

/// [`LocalSystem`] from any [`EquationSet`] via the general formula.
#[derive(Debug, Clone, Copy)]
pub struct Generic<E>(pub E);

impl<E: EquationSet> LocalSystem for Generic<E> {
    fn num_vars(&self) -> usize {
        self.0.num_vars()
    }

    fn element(&self, geom: &ElementGeometry, local: &[f64], hessian: bool, out: &mut ElementContribution) {
        generic_element(&self.0, geom, local, hessian, out)
    }
}

fn generic_element<E: EquationSet + ?Sized>(
    eq: &E,
    geom: &ElementGeometry,
    local: &[f64],
    hessian: bool,
    out: &mut ElementContribution,
) {
    let n = eq.num_vars();
    let nl = 3 * n;
    out.reset(n, hessian);
    let g = basis_gradients(geom);
    let mut ubar = vec![0.0; n];
    let mut ux = vec![0.0; n];
    let mut uy = vec![0.0; n];
    for k in 0..3 {
        for c in 0..n {
            let val = local[k * n + c];
            ubar[c] += val;
            ux[c] += val * g[k].x;
            uy[c] += val * g[k].y;
        }
    }
    ubar.iter_mut().for_each(|v| *v /= 3.0);
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n * n];
    let mut s = vec![0.0; n];
    eq.coefficients(&ubar, &mut a, &mut b, &mut s);
    let r = &mut out.residual;
    for m in 0..n {
        let mut v = s[m];
        for c in 0..n {
            v += a[m * n + c] * ux[c] + b[m * n + c] * uy[c];
        }
        r[m] = v;
    }
    let mut da = vec![vec![0.0; n * n]; n];
    let mut db = vec![vec![0.0; n * n]; n];
    let mut ds = vec![vec![0.0; n]; n];
    for c in 0..n {
        eq.coefficient_derivatives(&ubar, c, &mut da[c], &mut db[c], &mut ds[c]);
    }
    // dR_m / d(local j), j = k n + c
    let mut dr = vec![0.0; n * nl];
    for k in 0..3 {
        for c in 0..n {
            let j = k * n + c;
            for m in 0..n {
                let mut avg = ds[c][m];
                for e in 0..n {
                    avg += da[c][m * n + e] * ux[e] + db[c][m * n + e] * uy[e];
                }
                dr[m * nl + j] = avg / 3.0 + g[k].x * a[m * n + c] + g[k].y * b[m * n + c];
            }
        }
    }
    let area = geom.area;
    out.value = 0.5 * area * r.iter().map(|v| v * v).sum::<f64>();
    for j in 0..nl {
        out.grad[j] = area * (0..n).map(|m| r[m] * dr[m * nl + j]).sum::<f64>();
    }
    if !hessian {
        return;
    }
    let second = eq.has_second_derivatives();
    let mut d2a = vec![0.0; n * n];
    let mut d2b = vec![0.0; n * n];
    let mut d2s = vec![0.0; n];
    for k in 0..3 {
        for c in 0..n {
            let i = k * n + c;
            for l in 0..3 {
                for d in 0..n {
                    let j = l * n + d;
                    let mut h = 0.0;
                    for m in 0..n {
                        h += dr[m * nl + i] * dr[m * nl + j];
                    }
                    let mut rs = 0.0;
                    if second {
                        eq.coefficient_second_derivatives(&ubar, c, d, &mut d2a, &mut d2b, &mut d2s);
                    }
                    for m in 0..n {
                        let mut t = (da[c][m * n + d] * g[l].x + db[c][m * n + d] * g[l].y
                            + da[d][m * n + c] * g[k].x
                            + db[d][m * n + c] * g[k].y)
                            / 3.0;
                        if second {
                            let mut q = d2s[m];
                            for e in 0..n {
                                q += d2a[m * n + e] * ux[e] + d2b[m * n + e] * uy[e];
                            }
                            t += q / 9.0;
                        }
                        rs += r[m] * t;
                    }
                    out.hess[i * nl + j] = area * (h + rs);
                }
            }
        }
    }
}

/// `u_x + v_y = 0`, `v_x - u_y = 0` in the unknowns `(u, v)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CauchyRiemann {
    pub path: KernelPath,
}

impl EquationSet for CauchyRiemann {
    fn num_vars(&self) -> usize {
        2
    }

    fn coefficients(&self, _ubar: &[f64], a: &mut [f64], b: &mut [f64], s: &mut [f64]) {
        a.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        b.copy_from_slice(&[0.0, 1.0, -1.0, 0.0]);
        s.fill(0.0);
    }

    fn coefficient_derivatives(&self, _ubar: &[f64], _c: usize, da: &mut [f64], db: &mut [f64], ds: &mut [f64]) {
        da.fill(0.0);
        db.fill(0.0);
        ds.fill(0.0);
    }
}

impl LocalSystem for CauchyRiemann {
    fn num_vars(&self) -> usize {
        2
    }

    fn element(&self, geom: &ElementGeometry, local: &[f64], hessian: bool, out: &mut ElementContribution) {
        if self.path == KernelPath::Generic {
            return generic_element(self, geom, local, hessian, out);
        }
        out.reset(2, hessian);
        let n = &geom.normals;
        let w = 0.5 / geom.area;
        let (mut ux, mut uy, mut vx, mut vy) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..3 {
            let (u, v) = (local[2 * k], local[2 * k + 1]);
            ux -= u * n[k].x;
            uy -= u * n[k].y;
            vx -= v * n[k].x;
            vy -= v * n[k].y;
        }
        let (ux, uy, vx, vy) = (ux * w, uy * w, vx * w, vy * w);
        let div = ux + vy;
        let curl = vx - uy;
        out.residual[0] = div;
        out.residual[1] = curl;
        out.value = 0.5 * (div * div + curl * curl) * geom.area;
        for k in 0..3 {
            out.grad[2 * k] = -0.5 * (div * n[k].x - curl * n[k].y);
            out.grad[2 * k + 1] = -0.5 * (div * n[k].y + curl * n[k].x);
        }
        if hessian {
            let q = 0.25 / geom.area;
            for i in 0..3 {
                for j in 0..3 {
                    let dot = n[i].x * n[j].x + n[i].y * n[j].y;
                    let cross = n[i].x * n[j].y - n[i].y * n[j].x;
                    out.hess[(2 * i) * 6 + 2 * j] = q * dot;
                    out.hess[(2 * i) * 6 + 2 * j + 1] = q * cross;
                    out.hess[(2 * i + 1) * 6 + 2 * j] = -q * cross;
                    out.hess[(2 * i + 1) * 6 + 2 * j + 1] = q * dot;
                }
            }
        }
    }
}

/// Prandtl boundary-layer equations in `(u, v, omega)`:
/// `u_x + v_y = 0`, `u u_x + v u_y - omega_y - U U_x = 0`, `u_y - omega = 0`.
///
/// The outer velocity `U` is uniform, so `U U_x = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryLayer {
    pub path: KernelPath,
}

impl EquationSet for BoundaryLayer {
    fn num_vars(&self) -> usize {
        3
    }

    fn coefficients(&self, ubar: &[f64], a: &mut [f64], b: &mut [f64], s: &mut [f64]) {
        a.fill(0.0);
        b.fill(0.0);
        s.fill(0.0);
        a[0] = 1.0;
        b[1] = 1.0;
        a[3] = ubar[0];
        b[3] = ubar[1];
        b[5] = -1.0;
        b[6] = 1.0;
        s[2] = -ubar[2];
    }

    fn coefficient_derivatives(&self, _ubar: &[f64], c: usize, da: &mut [f64], db: &mut [f64], ds: &mut [f64]) {
        da.fill(0.0);
        db.fill(0.0);
        ds.fill(0.0);
        match c {
            0 => da[3] = 1.0,
            1 => db[3] = 1.0,
            _ => ds[2] = -1.0,
        }
    }
}

impl LocalSystem for BoundaryLayer {
    fn num_vars(&self) -> usize {
        3
    }

    fn element(&self, geom: &ElementGeometry, local: &[f64], hessian: bool, out: &mut ElementContribution) {
        if self.path == KernelPath::Generic {
            return generic_element(self, geom, local, hessian, out);
        }
        out.reset(3, hessian);
        let g: [Point2; 3] = basis_gradients(geom);
        let (mut ub, mut vb, mut wb) = (0.0, 0.0, 0.0);
        let (mut ux, mut uy, mut vy, mut wy) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..3 {
            let (u, v, w) = (local[3 * k], local[3 * k + 1], local[3 * k + 2]);
            ub += u;
            vb += v;
            wb += w;
            ux += u * g[k].x;
            uy += u * g[k].y;
            vy += v * g[k].y;
            wy += w * g[k].y;
        }
        let (ub, vb, wb) = (ub / 3.0, vb / 3.0, wb / 3.0);
        let r1 = ux + vy;
        let r2 = ub * ux + vb * uy - wy;
        let r3 = uy - wb;
        out.residual.copy_from_slice(&[r1, r2, r3]);
        let area = geom.area;
        out.value = 0.5 * area * (r1 * r1 + r2 * r2 + r3 * r3);
        // partials of (R1, R2, R3) with respect to u_k, v_k, w_k
        let mut d = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            let adv = ux / 3.0 + ub * g[k].x + vb * g[k].y;
            d[k][0] = [g[k].x, adv, g[k].y];
            d[k][1] = [g[k].y, uy / 3.0, 0.0];
            d[k][2] = [0.0, -g[k].y, -1.0 / 3.0];
        }
        for k in 0..3 {
            for c in 0..3 {
                out.grad[3 * k + c] = area * (r1 * d[k][c][0] + r2 * d[k][c][1] + r3 * d[k][c][2]);
            }
        }
        if !hessian {
            return;
        }
        for k in 0..3 {
            for c in 0..3 {
                for l in 0..3 {
                    for e in 0..3 {
                        let p = &d[k][c];
                        let q = &d[l][e];
                        let mut h = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
                        // second derivative of R2, the only nonlinear residual
                        h += r2
                            * match (c, e) {
                                (0, 0) => (g[k].x + g[l].x) / 3.0,
                                (0, 1) => g[k].y / 3.0,
                                (1, 0) => g[l].y / 3.0,
                                _ => 0.0,
                            };
                        out.hess[(3 * k + c) * 9 + 3 * l + e] = area * h;
                    }
                }
            }
        }
    }
}

/// Scalar `a phi_x + b phi_y = 0` with constant `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantAdvection {
    pub a: f64,
    pub b: f64,
}

impl EquationSet for ConstantAdvection {
    fn num_vars(&self) -> usize {
        1
    }

    fn coefficients(&self, _ubar: &[f64], a: &mut [f64], b: &mut [f64], s: &mut [f64]) {
        a[0] = self.a;
        b[0] = self.b;
        s[0] = 0.0;
    }

    fn coefficient_derivatives(&self, _ubar: &[f64], _c: usize, da: &mut [f64], db: &mut [f64], ds: &mut [f64]) {
        da[0] = 0.0;
        db[0] = 0.0;
        ds[0] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> ElementGeometry {
        ElementGeometry::from_vertices([Point2::new(0.1, -0.2), Point2::new(1.3, 0.1), Point2::new(0.4, 0.9)])
    }

    fn compare(fast: &dyn LocalSystem, generic: &dyn LocalSystem, local: &[f64]) {
        let g = tri();
        let mut a = ElementContribution::default();
        let mut b = ElementContribution::default();
        fast.element(&g, local, true, &mut a);
        generic.element(&g, local, true, &mut b);
        let close = |x: &[f64], y: &[f64]| {
            let s = y.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-12 * s)
        };
        assert!(close(&a.residual, &b.residual));
        assert!((a.value - b.value).abs() < 1e-12 * b.value.max(1.0));
        assert!(close(&a.grad, &b.grad), "{:?} {:?}", a.grad, b.grad);
        assert!(close(&a.hess, &b.hess), "{:?}\n{:?}", a.hess, b.hess);
    }

    #[test]
    fn cauchy_riemann_fast_matches_generic() {
        let local = [0.3, -1.2, 0.8, 0.4, -0.5, 2.0];
        compare(&CauchyRiemann::default(), &Generic(CauchyRiemann::default()), &local);
    }

    #[test]
    fn boundary_layer_fast_matches_generic() {
        let local = [0.9, 0.1, 0.4, 0.3, -0.2, 1.1, 1.2, 0.05, -0.3];
        compare(&BoundaryLayer::default(), &Generic(BoundaryLayer::default()), &local);
    }

    #[test]
    fn cauchy_riemann_linear_field_zero() {
        // u = x, v = -y
        let g = tri();
        let p = [Point2::new(0.1, -0.2), Point2::new(1.3, 0.1), Point2::new(0.4, 0.9)];
        let local: Vec<f64> = p.iter().flat_map(|q| [q.x, -q.y]).collect();
        let mut out = ElementContribution::default();
        CauchyRiemann::default().element(&g, &local, false, &mut out);
        assert!(out.value < 1e-28);
    }
}
