//! Cell-centered finite volume solver for Laplace's equation: two-point
//! flux stencil, Gauss-Seidel iteration with ghost-cell boundaries, the
//! iterated Kutta surface value, and patch truncation error studies.

mod solve;
mod stencil;
mod truncation;

pub use solve::{
    estimate_circulation, find_trailing_edge, gauss_seidel_sweep, kutta_surface_update, solve_airfoil_stream,
    solve_airfoil_stream_with, surface_circulation, trailing_edge_cells, AirfoilSolution, CcOptions, CellField,
};
pub use stencil::{build_cc_stencil, CcStencil, Face, GhostFace, Placement};
pub use truncation::{order_study, truncation_error, HarmonicCase, OrderStudy, PatchErrors, PatchKind};
