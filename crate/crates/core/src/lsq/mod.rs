//! Vertex-centered least-squares finite volumes: element residuals, the
//! discrete functional, its analytic derivatives and Newton minimization.

mod assemble;
mod element;
mod equations;
mod fdcheck;
mod newton;
mod terms;

pub use assemble::{assemble, cross_block_sums, functional_value, node_based_functional, NodalField, SparseSystem};
pub use element::{element_average, element_gradient};
pub use equations::{
    BoundaryLayer, CauchyRiemann, ConstantAdvection, ElementContribution, EquationSet, Generic, KernelPath,
    LocalSystem,
};
pub use fdcheck::{fd_check_gradient, fd_check_hessian, best_over_steps};
pub use newton::{newton_solve, NewtonOptions, NewtonRecord, NewtonState, NewtonStatus};
pub use terms::{BcSet, BcTerm, RowScope, TermContribution};
