use crate::error::{Error, Result};
use crate::mesh::{ElementGeometry, Point2};

/// Constant gradient of the linear interpolant: `-(1/2 Omega) sum phi_i n_i`.
pub fn element_gradient(geom: &ElementGeometry, values: [f64; 3]) -> Result<(f64, f64)> {
    if !(geom.area > 0.0) {
        return Err(Error::InvalidParameter("element area must be positive".into()));
    }
    Ok(gradient_unchecked(geom, values))
}

pub(crate) fn gradient_unchecked(geom: &ElementGeometry, values: [f64; 3]) -> (f64, f64) {
    let s = -0.5 / geom.area;
    let mut gx = 0.0;
    let mut gy = 0.0;
    for (v, n) in values.iter().zip(&geom.normals) {
        gx += v * n.x;
        gy += v * n.y;
    }
    (s * gx, s * gy)
}

/// Gradients of the three nodal hat functions, `-n_i / (2 Omega)`.
pub(crate) fn basis_gradients(geom: &ElementGeometry) -> [Point2; 3] {
    let s = -0.5 / geom.area;
    geom.normals.map(|n| n * s)
}

/// Arithmetic mean of the three vertex values, componentwise.
pub fn element_average(values: [&[f64]; 3]) -> Vec<f64> {
    (0..values[0].len())
        .map(|c| (values[0][c] + values[1][c] + values[2][c]) / 3.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(p: [(f64, f64); 3]) -> ElementGeometry {
        ElementGeometry::from_vertices(p.map(|(x, y)| Point2::new(x, y)))
    }

    #[test]
    fn constant_has_zero_gradient() {
        let g = geom([(0.0, 0.0), (1.0, 0.2), (0.3, 0.9)]);
        assert_eq!(element_gradient(&g, [2.5; 3]).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn unit_triangle() {
        let g = geom([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let (gx, gy) = element_gradient(&g, [0.0, 1.0, 2.0]).unwrap();
        assert!((gx - 1.0).abs() < 1e-15 && (gy - 2.0).abs() < 1e-15);
    }

    #[test]
    fn average_matches_quadrature() {
        // 7-point degree-5 rule on the reference triangle
        let a1 = 0.797_426_985_353_087_3;
        let b1 = 0.101_286_507_323_456_3;
        let a2 = 0.059_715_871_789_769_8;
        let b2 = 0.470_142_064_105_115_1;
        let w0 = 0.225;
        let w1 = 0.125_939_180_544_827_2;
        let w2 = 0.132_394_152_788_506_2;
        let mut pts = vec![([1.0 / 3.0; 3], w0)];
        for (a, b, w) in [(a1, b1, w1), (a2, b2, w2)] {
            pts.push(([a, b, b], w));
            pts.push(([b, a, b], w));
            pts.push(([b, b, a], w));
        }
        let vals = [0.3, -1.7, 4.2];
        let quad: f64 = pts.iter().map(|(l, w)| w * (l[0] * vals[0] + l[1] * vals[1] + l[2] * vals[2])).sum();
        let avg = element_average([&vals[0..1], &vals[1..2], &vals[2..3]]);
        assert!((avg[0] - quad).abs() < 1e-14);
        assert_eq!(element_average([&[1.0], &[1.0], &[1.0]]), vec![1.0]);
        assert_eq!(element_average([&[0.0], &[3.0], &[6.0]]), vec![3.0]);
    }
}
