//! Symmetric unit-determinant coefficient fields `A(x)` on a disk.

mod field;
mod matrix;
mod profile;
mod spec;

pub use field::{
    CoefficientField, EllipticityBounds, FieldKind, GridField, DET_TOL_EXACT, DET_TOL_GRID,
};
pub use matrix::SymMatrix2;
pub use profile::{AngularProfile, ProfileRepr};
pub use spec::{AngularSpec, DomainSpec, FieldSpec, Variant};
