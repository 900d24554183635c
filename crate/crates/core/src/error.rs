use thiserror::Error;

/// Errors produced by mesh handling, discretization and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed mesh file ({file}, line {line}): {msg}")]
    MeshFormat {
        file: &'static str,
        line: usize,
        msg: String,
    },
    #[error("node index {index} out of range in triangle {triangle}")]
    NodeOutOfRange { triangle: usize, index: i64 },
    #[error("degenerate (zero-area) triangle {0}")]
    DegenerateTriangle(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation at a singular point: {0}")]
    Domain(String),
    #[error("coincident cell centers across face between cells {0} and {1}")]
    CoincidentCenters(usize, usize),
    #[error("zero diagonal entry in row {0}")]
    ZeroDiagonal(usize),
    #[error("matrix is not positive definite (breakdown at iteration {0})")]
    NotPositiveDefinite(usize),
    #[error("trailing edge cells could not be identified")]
    TrailingEdgeNotFound,
    #[error("circulation contour is not closed")]
    ContourNotClosed,
    #[error("no equation touches node {0}")]
    EmptyRow(usize),
    #[error("node {0} is not on a tagged surface")]
    NotOnSurface(usize),
    #[error("shooting bracket failure: {0}")]
    ShootingBracket(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
