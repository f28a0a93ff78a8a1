//! Scalar functions on the plane with gradients ("solution handles").

use crate::geometry::Point2;

/// Step used by the central-difference gradient fallback.
pub const FD_STEP: f64 = 1e-5;

pub trait ScalarField: Sync {
    fn value(&self, p: Point2) -> f64;

    /// Gradient at `p`. Defaults to central differences with step [`FD_STEP`].
    fn gradient(&self, p: Point2) -> Point2 {
        central_gradient(|q| self.value(q), p, FD_STEP)
    }
}

pub fn central_gradient(f: impl Fn(Point2) -> f64, p: Point2, h: f64) -> Point2 {
    let dx = f(Point2::new(p.x + h, p.y)) - f(Point2::new(p.x - h, p.y));
    let dy = f(Point2::new(p.x, p.y + h)) - f(Point2::new(p.x, p.y - h));
    Point2::new(dx / (2.0 * h), dy / (2.0 * h))
}

/// `u(x) = c0 + c1 x1 + c2 x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Affine {
    /// The coordinate function `x1`.
    pub const X1: Affine = Affine {
        c0: 0.0,
        c1: 1.0,
        c2: 0.0,
    };
}

impl ScalarField for Affine {
    fn value(&self, p: Point2) -> f64 {
        self.c0 + self.c1 * p.x + self.c2 * p.y
    }

    fn gradient(&self, _p: Point2) -> Point2 {
        Point2::new(self.c1, self.c2)
    }
}

/// The harmonic polynomial `x1² - x2² = ρ² cos 2θ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HarmonicTwoTheta;

impl ScalarField for HarmonicTwoTheta {
    fn value(&self, p: Point2) -> f64 {
        p.x * p.x - p.y * p.y
    }

    fn gradient(&self, p: Point2) -> Point2 {
        Point2::new(2.0 * p.x, -2.0 * p.y)
    }
}

/// Wraps a closure; gradients by central differences.
pub struct FnField<F>(pub F);

impl<F: Fn(Point2) -> f64 + Sync> ScalarField for FnField<F> {
    fn value(&self, p: Point2) -> f64 {
        (self.0)(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fd_gradient_matches_analytic() {
        let p = Point2::new(0.3, -0.4);
        let fd = FnField(|q: Point2| q.x * q.x - q.y * q.y).gradient(p);
        let ex = HarmonicTwoTheta.gradient(p);
        assert_abs_diff_eq!(fd.x, ex.x, epsilon = 1e-9);
        assert_abs_diff_eq!(fd.y, ex.y, epsilon = 1e-9);
    }
}
