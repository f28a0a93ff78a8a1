//! Sharp Hölder exponents for two-dimensional divergence-form elliptic
//! equations `(a_ij u_{x_i})_{x_j} = 0` whose coefficient matrix is
//! symmetric with unit determinant.
//!
//! The crate is organized by task:
//!
//! * [`coeff`]: coefficient fields, validation, polar-frame conjugation;
//! * [`wirtinger`]: the sharp weighted Wirtinger inequality and a discrete eigen-oracle;
//! * [`alpha`]: exponent estimators built from circle averages of `⟨Aξ, ξ⟩`;
//! * [`sharp`]: the extremal angular field and its exact solution;
//! * [`fem`]: a piecewise-linear Dirichlet solver on graded disk meshes;
//! * [`holder`]: energy profiles, exponent fits and Hölder quotients.

pub mod alpha;
pub mod coeff;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod holder;
pub mod quadrature;
pub mod sharp;
pub mod solution;
pub mod wirtinger;

pub use coeff::{AngularProfile, CoefficientField, EllipticityBounds, FieldSpec, SymMatrix2};
pub use error::{Error, Result};
pub use geometry::{DiskDomain, Point2};
pub use solution::ScalarField;
