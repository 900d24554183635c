//! Single-unknown patches for truncation error studies.

use super::{Mesh, Point2, TagSet};
use crate::error::{Error, Result};

/// A focus triangle surrounded by its three edge neighbors. The focus cell is
/// the only unknown; neighbor cells carry prescribed values.
#[derive(Debug, Clone)]
pub struct Patch {
    pub mesh: Mesh,
    /// Triangle index of the unknown cell.
    pub focus: usize,
    /// Fixed point of [`rescale_patch`]; the focus cell centroid.
    pub scale_center: Point2,
}

impl Patch {
    /// Equilateral focus cell of side `side`, pointing up, with centroid at
    /// `center`, plus its three mirror images across its edges.
    pub fn equilateral(side: f64, center: Point2) -> Result<Self> {
        if !(side > 0.0) {
            return Err(Error::InvalidParameter("patch side must be positive".into()));
        }
        let h = side * 3f64.sqrt() / 2.0;
        let p0 = center + Point2::new(-0.5 * side, -h / 3.0);
        let p1 = center + Point2::new(0.5 * side, -h / 3.0);
        let p2 = center + Point2::new(0.0, 2.0 * h / 3.0);
        let q0 = p1 + p2 - p0;
        let q1 = p2 + p0 - p1;
        let q2 = p0 + p1 - p2;
        Self::build(
            vec![p0, p1, p2, q0, q1, q2],
            vec![[0, 1, 2], [1, 3, 2], [2, 4, 0], [0, 5, 1]],
            center,
        )
    }

    /// Right isosceles focus cell with legs of length `leg` along the axes,
    /// translated so its centroid is at `center`, plus its mirror images
    /// across its three edges. The patch is symmetric about the focus cell's
    /// diagonal and the face coefficients weight the neighbor offsets so
    /// that their first moment vanishes.
    pub fn right(leg: f64, center: Point2) -> Result<Self> {
        if !(leg > 0.0) {
            return Err(Error::InvalidParameter("patch leg must be positive".into()));
        }
        let raw = [
            (0.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (1.0, 1.0),
            (-1.0, 0.0),
            (0.0, -1.0),
        ];
        let shift = Point2::new(1.0 / 3.0, 1.0 / 3.0);
        let pts = raw
            .iter()
            .map(|&(x, y)| center + (Point2::new(x, y) - shift) * leg)
            .collect();
        Self::build(pts, vec![[0, 1, 2], [1, 3, 2], [0, 2, 4], [0, 5, 1]], center)
    }

    fn build(points: Vec<Point2>, cells: Vec<[usize; 3]>, center: Point2) -> Result<Self> {
        let tags = vec![TagSet::EMPTY; points.len()];
        let mesh = Mesh::new(points, cells, tags)?;
        Ok(Self {
            mesh,
            focus: 0,
            scale_center: center,
        })
    }

    /// Cells adjacent to the focus, in local edge order.
    pub fn neighbors(&self) -> [usize; 3] {
        self.mesh
            .triangle(self.focus)
            .neighbors
            .map(|n| n.expect("patch focus has three neighbors"))
    }
}

/// Shrink a patch about its scale center: `p <- c + factor (p - c)`.
pub fn rescale_patch(patch: &Patch, factor: f64) -> Result<Patch> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(Error::InvalidParameter(format!("rescale factor {factor} not in (0,1)")));
    }
    let c = patch.scale_center;
    let mesh = patch.mesh.map_points(|p| c + (p - c) * factor)?;
    Ok(Patch {
        mesh,
        focus: patch.focus,
        scale_center: c,
    })
}
