use serde::{Deserialize, Serialize};

use crate::geometry::{Point2, Rotation};

/// Symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymMatrix2 {
    pub const IDENTITY: SymMatrix2 = SymMatrix2 {
        a11: 1.0,
        a12: 0.0,
        a22: 1.0,
    };

    pub const fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub const fn diag(d1: f64, d2: f64) -> Self {
        Self {
            a11: d1,
            a12: 0.0,
            a22: d2,
        }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a11 > 0.0 && self.det() > 0.0
    }

    /// Eigenvalues `(smaller, larger)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * self.trace();
        let disc = (0.5 * (self.a11 - self.a22)).hypot(self.a12);
        let hi = half_tr + disc;
        // the small eigenvalue via det/hi avoids cancellation when hi ≫ lo
        let lo = if hi != 0.0 {
            self.det() / hi
        } else {
            half_tr - disc
        };
        (lo, hi)
    }

    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a12 * v.x + self.a22 * v.y,
        )
    }

    /// `⟨A ξ, η⟩`
    pub fn bilinear(&self, xi: Point2, eta: Point2) -> f64 {
        self.apply(xi).dot(eta)
    }

    /// `⟨A ξ, ξ⟩`
    pub fn quad_form(&self, xi: Point2) -> f64 {
        self.a11 * xi.x * xi.x + 2.0 * self.a12 * xi.x * xi.y + self.a22 * xi.y * xi.y
    }

    /// `J A J*`: the matrix expressed in the rotated frame's Cartesian coordinates.
    pub fn rotate(&self, j: Rotation) -> Self {
        let (c, s) = (j.cos, j.sin);
        Self {
            a11: c * c * self.a11 - 2.0 * c * s * self.a12 + s * s * self.a22,
            a12: c * s * (self.a11 - self.a22) + (c * c - s * s) * self.a12,
            a22: s * s * self.a11 + 2.0 * c * s * self.a12 + c * c * self.a22,
        }
    }

    /// `J* A J`: conjugation into the polar frame.
    pub fn conjugate(&self, j: Rotation) -> Self {
        self.rotate(Rotation {
            cos: j.cos,
            sin: -j.sin,
        })
    }

    pub fn max_abs_diff(&self, other: &SymMatrix2) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a12 - other.a12).abs())
            .max((self.a22 - other.a22).abs())
    }
}

impl From<[f64; 3]> for SymMatrix2 {
    fn from(v: [f64; 3]) -> Self {
        SymMatrix2::new(v[0], v[1], v[2])
    }
}

impl From<SymMatrix2> for [f64; 3] {
    fn from(m: SymMatrix2) -> Self {
        [m.a11, m.a12, m.a22]
    }
}
