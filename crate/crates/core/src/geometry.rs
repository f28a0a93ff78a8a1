//! Points, disk domains and the rotation `J(θ)` relating Cartesian and polar frames.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when testing membership in a closed disk.
pub const DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// The point `center + rho·(cos θ, sin θ)`.
    pub fn polar(center: Point2, rho: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(center.x + rho * c, center.y + rho * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Argument in `[0, 2π)`.
    pub fn arg(self) -> f64 {
        let t = self.y.atan2(self.x);
        if t < 0.0 {
            let w = t + TAU;
            // atan2 can return -0.0 + TAU rounding to TAU
            if w >= TAU {
                0.0
            } else {
                w
            }
        } else {
            t
        }
    }

    pub fn scale(self, t: f64) -> Self {
        Self::new(self.x * t, self.y * t)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(p: [f64; 2]) -> Self {
        Point2::new(p[0], p[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Open disk `{ |x - center| < radius }`; membership tests use the closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskDomain {
    pub center: Point2,
    pub radius: f64,
}

impl DiskDomain {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: Point2::ORIGIN,
            radius: 1.0,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.dist(self.center) <= self.radius * (1.0 + DOMAIN_TOL)
    }

    /// Distance from `p` to the boundary circle (negative outside).
    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        self.radius - p.dist(self.center)
    }

    /// Whether the closed disk of radius `r` about `c` fits inside this domain.
    pub fn contains_disk(&self, c: Point2, r: f64) -> bool {
        c.dist(self.center) + r <= self.radius * (1.0 + DOMAIN_TOL)
    }
}

/// The rotation `J(θ) = [[cos θ, -sin θ], [sin θ, cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub cos: f64,
    pub sin: f64,
}

impl Rotation {
    pub fn new(theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self { cos, sin }
    }

    /// `J v`
    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(
            self.cos * v.x - self.sin * v.y,
            self.sin * v.x + self.cos * v.y,
        )
    }

    /// `J* v`
    pub fn apply_transpose(&self, v: Point2) -> Point2 {
        Point2::new(
            self.cos * v.x + self.sin * v.y,
            -self.sin * v.x + self.cos * v.y,
        )
    }
}

/// Cartesian gradient from the polar frame gradient `(u_ρ, u_θ/ρ)`: `∇u = J(θ) ∇̄u`.
pub fn polar_to_cartesian_gradient(theta: f64, u_rho: f64, u_theta_over_rho: f64) -> Point2 {
    Rotation::new(theta).apply(Point2::new(u_rho, u_theta_over_rho))
}

/// Inverse of [`polar_to_cartesian_gradient`].
pub fn cartesian_to_polar_gradient(theta: f64, grad: Point2) -> Point2 {
    Rotation::new(theta).apply_transpose(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn arg_is_in_zero_two_pi() {
        assert_eq!(Point2::new(1.0, 0.0).arg(), 0.0);
        assert_abs_diff_eq!(
            Point2::new(0.0, -1.0).arg(),
            1.5 * std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert!(Point2::new(1.0, -1e-300).arg() < TAU);
    }

    #[test]
    fn gradient_frames_roundtrip() {
        // u = x1 has ∇̄u = (cos θ, -sin θ)
        for &t in &[0.0, 0.3, 2.0, 5.5] {
            let g = polar_to_cartesian_gradient(t, t.cos(), -t.sin());
            assert_abs_diff_eq!(g.x, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(g.y, 0.0, epsilon = 1e-15);
            let back = cartesian_to_polar_gradient(t, g);
            assert_abs_diff_eq!(back.x, t.cos(), epsilon = 1e-15);
        }
    }

    #[test]
    fn disk_rejects_nonpositive_radius() {
        assert!(DiskDomain::new(Point2::ORIGIN, 0.0).is_err());
        let d = DiskDomain::unit();
        assert!(d.contains(Point2::new(1.0, 0.0)));
        assert!(!d.contains(Point2::new(1.0, 0.1)));
        assert!(d.contains_disk(Point2::new(0.5, 0.0), 0.5));
    }
}
