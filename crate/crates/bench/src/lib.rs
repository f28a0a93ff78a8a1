//! Shared fixtures for the criterion benchmarks.

use holder2d::{AngularProfile, CoefficientField, DiskDomain, Point2};

/// A smooth profile with mean 2.5, giving a sharp exponent of 0.4.
pub fn smooth_profile() -> AngularProfile {
    AngularProfile::fourier(2.5, vec![0.4, 0.0], vec![0.0, 0.3]).expect("positive profile")
}

pub fn angular_field() -> CoefficientField {
    CoefficientField::angular(smooth_profile(), Point2::ORIGIN, DiskDomain::unit())
}
