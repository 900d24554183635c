//! Reference solutions: potential flows, Kármán-Trefftz airfoils and the
//! Blasius boundary layer.

mod blasius;
mod flows;
mod karman_trefftz;

pub use blasius::{blasius_eval, blasius_solve, BlasiusProfile};
pub use flows::{
    airfoil_farfield_velocity, cylinder_flow, farfield_stream, parabolic_profile, sinusoidal_wall,
    stagnation_points, FarfieldMode, FlowParams, Stagnation,
};
pub use karman_trefftz::{KarmanTrefftz, REFERENCE_OFFSET, REFERENCE_RADIUS, REFERENCE_TAIL_DEG};
