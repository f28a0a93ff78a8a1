//! The extremal field `A = (1/k) I + (k - 1/k) x⊗x/|x|²` on the unit disk
//! and its exact solution `u = |x|^ᾱ cos(ᾱ ∫_0^{arg x} k)`, `ᾱ = 2π / ∫k`.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::coeff::{AngularProfile, CoefficientField, SymMatrix2};
use crate::error::{Error, Result};
use crate::geometry::{polar_to_cartesian_gradient, DiskDomain, Point2};
use crate::quadrature::{periodic_rule, Rule};
use crate::solution::ScalarField;

/// Inner radial cutoff of the weak-residual quadrature.
pub const RESIDUAL_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SharpExample {
    pub profile: AngularProfile,
    /// Angular field centered at the origin of the unit disk.
    pub field: CoefficientField,
    pub alpha_bar: f64,
}

impl SharpExample {
    pub fn build(profile: AngularProfile) -> Self {
        let alpha_bar = TAU / profile.integral();
        let field = CoefficientField::angular(profile.clone(), Point2::ORIGIN, DiskDomain::unit());
        Self {
            profile,
            field,
            alpha_bar,
        }
    }

    /// `u(x) = |x|^ᾱ cos(ᾱ Θ(arg x))`, with `u(0) = 0`.
    pub fn eval_solution(&self, x: Point2) -> f64 {
        let rho = x.norm();
        if rho == 0.0 {
            return 0.0;
        }
        rho.powf(self.alpha_bar) * (self.alpha_bar * self.profile.cumulative(x.arg())).cos()
    }

    /// `(u_ρ, u_θ/ρ)` at `x ≠ 0`.
    pub fn polar_gradient(&self, x: Point2) -> (f64, f64) {
        let rho = x.norm();
        let theta = x.arg();
        let ab = self.alpha_bar;
        let phase = ab * self.profile.cumulative(theta);
        let scale = ab * rho.powf(ab - 1.0);
        (
            scale * phase.cos(),
            -scale * self.profile.eval(theta) * phase.sin(),
        )
    }
}

impl ScalarField for SharpExample {
    fn value(&self, p: Point2) -> f64 {
        self.eval_solution(p)
    }

    /// Analytic; not finite at the origin when `ᾱ < 1`.
    fn gradient(&self, p: Point2) -> Point2 {
        let (ur, ut) = self.polar_gradient(p);
        polar_to_cartesian_gradient(p.arg(), ur, ut)
    }
}

/// `(1/k) I + (k - 1/k) x⊗x / |x|²` with `k = k(arg x)`.
pub fn outer_product_matrix(profile: &AngularProfile, x: Point2) -> Result<SymMatrix2> {
    let r2 = x.dot(x);
    if r2 == 0.0 {
        return Err(Error::AngularCenterSingularity);
    }
    let k = profile.eval(x.arg());
    let inv = 1.0 / k;
    let c = (k - inv) / r2;
    Ok(SymMatrix2::new(
        inv + c * x.x * x.x,
        c * x.x * x.y,
        inv + c * x.y * x.y,
    ))
}

/// Smooth tensor bump `φ((x-c₁)/w) φ((y-c₂)/w)`, `φ(s) = exp(1/(s²-1))` on `|s| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: Point2,
    pub half_width: f64,
}

fn bump_1d(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = s * s - 1.0;
    let v = (1.0 / q).exp();
    (v, -2.0 * s / (q * q) * v)
}

impl Bump {
    pub fn value_and_gradient(&self, p: Point2) -> (f64, Point2) {
        let w = self.half_width;
        let (fx, dx) = bump_1d((p.x - self.center.x) / w);
        if fx == 0.0 {
            return (0.0, Point2::ORIGIN);
        }
        let (fy, dy) = bump_1d((p.y - self.center.y) / w);
        (fx * fy, Point2::new(dx * fy / w, fx * dy / w))
    }

    fn contains(&self, p: Point2) -> bool {
        (p.x - self.center.x).abs() < self.half_width
            && (p.y - self.center.y).abs() < self.half_width
    }

    fn corners(&self) -> [Point2; 4] {
        let (c, w) = (self.center, self.half_width);
        [
            Point2::new(c.x - w, c.y - w),
            Point2::new(c.x + w, c.y - w),
            Point2::new(c.x + w, c.y + w),
            Point2::new(c.x - w, c.y + w),
        ]
    }

    /// Distance range from `p` to the closed support square.
    fn distance_range(&self, p: Point2) -> (f64, f64) {
        let (c, w) = (self.center, self.half_width);
        let dx = ((p.x - c.x).abs() - w).max(0.0);
        let dy = ((p.y - c.y).abs() - w).max(0.0);
        let far = self.corners().iter().map(|q| q.dist(p)).fold(0.0, f64::max);
        (dx.hypot(dy), far)
    }
}

/// The `test_n²` bumps used by [`weak_residual`]: centers on a uniform grid
/// over the middle half of the domain's bounding square, half widths
/// `min(0.3R, dist/√2)` so the support stays inside the disk.
pub fn test_bumps(domain: &DiskDomain, test_n: usize) -> Vec<Bump> {
    let r = domain.radius;
    let mut out = Vec::with_capacity(test_n * test_n);
    for j in 0..test_n {
        for i in 0..test_n {
            let t = |k: usize| -0.5 + k as f64 / (test_n - 1) as f64;
            let c = Point2::new(domain.center.x + r * t(i), domain.center.y + r * t(j));
            let w = (0.3 * r).min(0.98 * domain.dist_to_boundary(c) / std::f64::consts::SQRT_2);
            out.push(Bump {
                center: c,
                half_width: w,
            });
        }
    }
    out
}

/// `max_v |∫ ⟨A∇u, ∇v⟩ dx|` over [`test_bumps`].
///
/// The quadrature is polar about the singular point of the field (the
/// angular center, else the domain center). Bumps whose support contains the
/// pole get log-spaced radial panels from [`RESIDUAL_CUTOFF`] and a full-turn
/// angular rule; the others get Gauss panels over the radial and angular
/// ranges of their support. Angular panels break at the jump angles of a
/// piecewise profile.
pub fn weak_residual(field: &CoefficientField, u: &dyn ScalarField, test_n: usize) -> Result<f64> {
    if test_n < 8 {
        return Err(Error::InvalidArgument(format!(
            "weak residual needs test_n >= 8, got {test_n}"
        )));
    }
    let (pole, breaks) = field
        .angular_breaks()
        .unwrap_or((field.domain.center, Vec::new()));
    let residuals = test_bumps(&field.domain, test_n)
        .par_iter()
        .map(|bump| bump_residual(field, u, bump, pole, &breaks))
        .collect::<Result<Vec<_>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

const PANEL_ORDER: usize = 8;
const ANGULAR_PANEL: f64 = 0.01;
const RADIAL_PANEL: f64 = 0.005;
const LOG_RADIAL_PANEL: f64 = 0.25;
/// Nodes per axis of the tensor trapezoid rule on a bump's support square.
const SQUARE_NODES: usize = 128;
/// Angular nodes of the full-turn rule around the pole.
const TURN_NODES: usize = 512;

/// Gauss panels on `[a, b]`, split at the breaks (taken modulo 2π) inside it.
fn broken_panels(a: f64, b: f64, breaks: &[f64]) -> Rule {
    let mut edges = vec![a];
    for &t in breaks {
        let mut t = a + (t - a).rem_euclid(TAU);
        while t < b {
            edges.push(t);
            t += TAU;
        }
    }
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    let mut rule = Rule::default();
    for pair in edges.windows(2) {
        if pair[1] > pair[0] {
            let piece = Rule::gauss_panels(pair[0], pair[1], ANGULAR_PANEL, PANEL_ORDER);
            rule.nodes.extend(piece.nodes);
            rule.weights.extend(piece.weights);
        }
    }
    rule
}

fn flux(field: &CoefficientField, u: &dyn ScalarField, bump: &Bump, p: Point2) -> Result<f64> {
    let (v, grad_v) = bump.value_and_gradient(p);
    if v == 0.0 {
        return Ok(0.0);
    }
    let a = field.eval_unchecked(p)?;
    let f = a.bilinear(u.gradient(p), grad_v);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::QuadratureBreakdown)
    }
}

fn bump_residual(
    field: &CoefficientField,
    u: &dyn ScalarField,
    bump: &Bump,
    pole: Point2,
    breaks: &[f64],
) -> Result<f64> {
    let total = if !bump.contains(pole) && breaks.is_empty() {
        // smooth integrand vanishing to all orders at the edges: the
        // trapezoid rule converges faster than any power
        let (c, w) = (bump.center, bump.half_width);
        let step = 2.0 * w / SQUARE_NODES as f64;
        let mut total = 0.0;
        for j in 1..SQUARE_NODES {
            for i in 1..SQUARE_NODES {
                let p = Point2::new(c.x - w + i as f64 * step, c.y - w + j as f64 * step);
                total += flux(field, u, bump, p)?;
            }
        }
        total * step * step
    } else {
        let (near, far) = bump.distance_range(pole);
        let (radial, angular) = if bump.contains(pole) {
            // the radial integrand is analytic in log ρ well inside the
            // largest disk about the pole contained in the support
            let (c, w) = (bump.center, bump.half_width);
            let inner = 0.5 * (w - (pole.x - c.x).abs()).min(w - (pole.y - c.y).abs());
            let mut radial =
                Rule::log_panels(RESIDUAL_CUTOFF, inner, LOG_RADIAL_PANEL, PANEL_ORDER);
            let outer = Rule::gauss_panels(inner, far, RADIAL_PANEL, PANEL_ORDER);
            radial.nodes.extend(outer.nodes);
            radial.weights.extend(outer.weights);
            let angular = if breaks.is_empty() {
                periodic_rule(TURN_NODES, breaks)
            } else {
                broken_panels(0.0, TAU, breaks)
            };
            (radial, angular)
        } else {
            let mid = (bump.center - pole).arg();
            let half = bump
                .corners()
                .iter()
                .map(|&q| {
                    ((q - pole).arg() - mid + std::f64::consts::PI).rem_euclid(TAU)
                        - std::f64::consts::PI
                })
                .fold(0.0f64, |m, d| m.max(d.abs()));
            (
                Rule::gauss_panels(near, far, RADIAL_PANEL, PANEL_ORDER),
                broken_panels(mid - half, mid + half, breaks),
            )
        };
        let mut total = 0.0;
        for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
            for (&theta, &wt) in angular.nodes.iter().zip(&angular.weights) {
                total += wr * wt * rho * flux(field, u, bump, Point2::polar(pole, rho, theta))?;
            }
        }
        total
    };
    Ok(total.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rotation;
    use crate::solution::{Affine, FnField};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_profiles() {
        let ex = SharpExample::build(AngularProfile::constant(1.0).unwrap());
        assert_eq!(ex.alpha_bar, 1.0);
        let p = Point2::new(0.3, -0.5);
        assert!(
            ex.field
                .eval_matrix(p)
                .unwrap()
                .max_abs_diff(&SymMatrix2::IDENTITY)
                < 1e-15
        );
        assert_abs_diff_eq!(ex.eval_solution(p), 0.3, epsilon = 1e-15);
        let ex = SharpExample::build(AngularProfile::constant(2.0).unwrap());
        assert_abs_diff_eq!(ex.alpha_bar, 0.5, epsilon = 1e-15);
        // u = ρ^{1/c} cos θ
        let p = Point2::polar(Point2::ORIGIN, 0.49, 2.2);
        assert_abs_diff_eq!(ex.eval_solution(p), 0.7 * 2.2f64.cos(), epsilon = 1e-14);
        assert_eq!(ex.eval_solution(Point2::ORIGIN), 0.0);
    }

    #[test]
    fn two_matrix_forms_agree() {
        let k = AngularProfile::fourier(2.0, vec![0.3], vec![-0.4]).unwrap();
        for &(r, t) in &[(0.3, 0.1), (0.9, 2.0), (0.01, 4.5)] {
            let x = Point2::polar(Point2::ORIGIN, r, t);
            let kt = k.eval(t);
            let rotated = SymMatrix2::diag(kt, 1.0 / kt).rotate(Rotation::new(t));
            assert!(outer_product_matrix(&k, x).unwrap().max_abs_diff(&rotated) < 1e-12);
        }
        assert!(outer_product_matrix(&k, Point2::ORIGIN).is_err());
    }

    #[test]
    fn branch_cut_is_continuous() {
        let ex = SharpExample::build(AngularProfile::fourier(2.5, vec![0.5], vec![0.2]).unwrap());
        let below = ex.eval_solution(Point2::polar(Point2::ORIGIN, 0.5, TAU - 1e-9));
        let above = ex.eval_solution(Point2::polar(Point2::ORIGIN, 0.5, 1e-9));
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let ex = SharpExample::build(AngularProfile::fourier(2.5, vec![0.5], vec![0.2]).unwrap());
        let p = Point2::new(0.31, -0.42);
        let g = ex.gradient(p);
        let fd = FnField(|q: Point2| ex.eval_solution(q)).gradient(p);
        assert_abs_diff_eq!(g.x, fd.x, epsilon = 1e-8);
        assert_abs_diff_eq!(g.y, fd.y, epsilon = 1e-8);
    }

    #[test]
    fn residual_of_linear_function_vanishes() {
        let f = CoefficientField::identity(DiskDomain::unit());
        let r = weak_residual(&f, &Affine::X1, 8).unwrap();
        assert!(r < 1e-10, "{r}");
        assert!(weak_residual(&f, &Affine::X1, 4).is_err());
    }

    #[test]
    fn residual_of_exact_solution_is_small() {
        let ex = SharpExample::build(AngularProfile::fourier(2.5, vec![0.5], vec![0.2]).unwrap());
        let r = weak_residual(&ex.field, &ex, 8).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn residual_detects_non_solutions() {
        // Δ(ρ²) = 4, so the residual is at least 4∫v for the bump at the center
        let f = CoefficientField::identity(DiskDomain::unit());
        let u = FnField(|p: Point2| p.dot(p));
        let r = weak_residual(&f, &u, 8).unwrap();
        assert!(r > 1e-3, "{r}");
    }
}
