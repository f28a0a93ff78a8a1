use thiserror::Error;

use crate::geometry::Point2;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({}, {}) lies outside the domain", .0.x, .0.y)]
    PointOutsideDomain(Point2),
    #[error("angular coefficient field evaluated at its singular center")]
    AngularCenterSingularity,
    #[error("determinant {det} deviates from 1 by more than {tol:e}")]
    DeterminantViolation { det: f64, tol: f64 },
    #[error("coefficient matrix is not positive definite")]
    NonPositiveDefinite,
    #[error("invalid angular profile: {0}")]
    InvalidProfile(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("weighted mean constraint violated: |∫ a w| = {residual:e}")]
    ConstraintViolated { residual: f64 },
    #[error("amplitude of the minimizer must be nonzero")]
    ZeroAmplitude,
    #[error("inverse iteration did not stagnate within {iterations} iterations")]
    EigenIterationDiverged { iterations: usize },
    #[error("circle of radius {radius} about ({}, {}) leaves the domain", .center.x, .center.y)]
    CircleOutsideDomain { center: Point2, radius: f64 },
    #[error("center ({}, {}) lies outside the domain", .0.x, .0.y)]
    CenterOutsideDomain(Point2),
    #[error("non-finite value encountered during quadrature")]
    QuadratureBreakdown,
    #[error("invalid mesh size {h} for radius {radius}")]
    InvalidMeshSize { h: f64, radius: f64 },
    #[error("conjugate gradients stagnated after {iterations} iterations (relative residual {residual:e})")]
    SolverStagnation { iterations: usize, residual: f64 },
    #[error("singular linear system")]
    SingularSystem,
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
