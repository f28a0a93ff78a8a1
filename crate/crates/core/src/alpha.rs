//! Hölder exponent estimators from circle averages of the quadratic form.
//!
//! For a center `x₀` and radius `r` the circle average is
//! `(2π)⁻¹ ∫_{|ξ|=1} ⟨A(x₀ + rξ)ξ, ξ⟩ dσ`. The exponent `α` is `1/(sup over
//! centers and radii)`; the least upper bound `ᾱ` localizes the radius sup
//! to `r → 0` before taking the sup over centers.

use std::f64::consts::{FRAC_PI_4, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoefficientField, EllipticityBounds, FieldKind};
use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Discretization of the sup over centers, the ess-sup over radii and the
/// circle quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grids {
    pub center_grid_n: usize,
    pub radius_grid_n: usize,
    pub quad_n: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            center_grid_n: 16,
            radius_grid_n: 32,
            quad_n: 128,
        }
    }
}

impl Grids {
    pub fn new(center_grid_n: usize, radius_grid_n: usize, quad_n: usize) -> Result<Self> {
        let g = Self {
            center_grid_n,
            radius_grid_n,
            quad_n,
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if self.center_grid_n < 8 || self.radius_grid_n < 8 || self.quad_n < 64 {
            return Err(Error::InvalidArgument(format!(
                "grids must be at least (8, 8, 64), got ({}, {}, {})",
                self.center_grid_n, self.radius_grid_n, self.quad_n
            )));
        }
        Ok(())
    }
}

/// `(2π)⁻¹ ∫_{|ξ|=1} ⟨A(center + rξ)ξ, ξ⟩ dσ` by the `quad_n`-point periodic
/// midpoint rule (nodes at `2π(i + ½)/quad_n`).
///
/// Each node contributes the Rayleigh quotient `⟨Aξ,ξ⟩/⟨ξ,ξ⟩`, which equals
/// the quadratic form on the unit circle and is exactly 1 for the identity.
pub fn circle_average(
    field: &CoefficientField,
    center: Point2,
    r: f64,
    quad_n: usize,
) -> Result<f64> {
    if quad_n < 32 {
        return Err(Error::InvalidArgument(format!(
            "circle quadrature needs quad_n >= 32, got {quad_n}"
        )));
    }
    if !(r > 0.0) || !field.domain.contains_disk(center, r) {
        return Err(Error::CircleOutsideDomain { center, radius: r });
    }
    let mut sum = 0.0;
    for i in 0..quad_n {
        let t = TAU * (i as f64 + 0.5) / quad_n as f64;
        let (s, c) = t.sin_cos();
        let xi = Point2::new(c, s);
        let a = field.eval_unchecked(Point2::new(center.x + r * c, center.y + r * s))?;
        sum += a.quad_form(xi) / xi.dot(xi);
    }
    Ok(sum / quad_n as f64)
}

/// Circle averages along the radius grid of one center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSamples {
    pub center: Point2,
    pub radii: Vec<f64>,
    pub averages: Vec<f64>,
}

impl RadialSamples {
    /// Discrete `ess sup` over all radii.
    pub fn sup(&self) -> f64 {
        self.averages
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Discrete `inf_{r₀} ess sup_{0<r<r₀}`: the minimum over `r₀` of the
    /// running maxima taken from the smallest radius outward.
    pub fn localized_sup(&self) -> f64 {
        let mut running = f64::NEG_INFINITY;
        let mut best = f64::INFINITY;
        for &v in &self.averages {
            running = running.max(v);
            best = best.min(running);
        }
        best
    }
}

/// All circle averages used by the estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleScan {
    pub grids: Grids,
    pub samples: Vec<RadialSamples>,
}

impl CircleScan {
    /// `2π (2π · max average)⁻¹`, not clamped.
    pub fn alpha(&self) -> f64 {
        1.0 / self
            .samples
            .iter()
            .map(RadialSamples::sup)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Localized variant, not clamped.
    pub fn alpha_bar(&self) -> f64 {
        1.0 / self
            .samples
            .iter()
            .map(RadialSamples::localized_sup)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Centers of a uniform Cartesian grid over the domain's bounding square,
/// always containing the domain center, kept when at least one radius step
/// `R / radius_grid_n` away from the boundary. `center_grid_n` is rounded
/// up to an odd number of points per axis.
pub fn center_grid(field: &CoefficientField, grids: &Grids) -> Vec<Point2> {
    let d = field.domain;
    let half = grids.center_grid_n.div_ceil(2) as i64;
    let step = d.radius / half as f64;
    let margin = d.radius / grids.radius_grid_n as f64;
    let mut out = Vec::new();
    for j in -half..=half {
        for i in -half..=half {
            let p = Point2::new(d.center.x + i as f64 * step, d.center.y + j as f64 * step);
            if d.dist_to_boundary(p) >= margin * (1.0 - 1e-12) {
                out.push(p);
            }
        }
    }
    out
}

/// Uniform radii `dist · j / (n + 1)`, `j = 1..=n`, inside `(0, dist)`.
pub fn radius_grid(dist: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|j| dist * j as f64 / (n + 1) as f64).collect()
}

/// Evaluates every circle average on the center and radius grids.
pub fn scan(field: &CoefficientField, grids: &Grids) -> Result<CircleScan> {
    grids.check()?;
    let centers = center_grid(field, grids);
    let samples = centers
        .par_iter()
        .map(|&c| {
            let radii = radius_grid(field.domain.dist_to_boundary(c), grids.radius_grid_n);
            let averages = radii
                .iter()
                .map(|&r| circle_average(field, c, r, grids.quad_n))
                .collect::<Result<Vec<_>>>()?;
            Ok(RadialSamples {
                center: c,
                radii,
                averages,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CircleScan {
        grids: *grids,
        samples,
    })
}

/// Discrete `α = 2π (sup_{x₀} ess sup_r ∫ a_ij ξ_i ξ_j dσ)⁻¹` (unclamped).
pub fn alpha_estimate(field: &CoefficientField, grids: &Grids) -> Result<f64> {
    Ok(scan(field, grids)?.alpha())
}

/// Discrete `ᾱ = 2π (sup_{x₀} inf_{r₀} ess sup_{r<r₀} ∫ a_ij ξ_i ξ_j dσ)⁻¹` (unclamped).
///
/// On a radius grid the running maximum from the smallest radius outward
/// is minimized at the first radius, so only that circle is evaluated per
/// center; the result equals [`CircleScan::alpha_bar`] of a full scan.
pub fn alpha_bar_estimate(field: &CoefficientField, grids: &Grids) -> Result<f64> {
    grids.check()?;
    let worst = center_grid(field, grids)
        .par_iter()
        .map(|&c| {
            let r = radius_grid(field.domain.dist_to_boundary(c), grids.radius_grid_n)[0];
            circle_average(field, c, r, grids.quad_n)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 / worst)
}

/// Comparison exponents for symmetric coefficients with ellipticity ratio `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsBounds {
    /// `L^{-1/2}`, symmetric coefficients.
    pub symmetric: f64,
    /// `(4/π) arctan L^{-1/2}`, isotropic coefficients `a(x) I`.
    pub isotropic: Option<f64>,
    /// `Λ⁻¹`, unit-determinant coefficients.
    pub unit_det: Option<f64>,
}

pub fn ps_bounds(bounds: &EllipticityBounds, isotropic: bool, unit_det: bool) -> PsBounds {
    let s = bounds.ratio().sqrt().recip();
    PsBounds {
        symmetric: s,
        isotropic: isotropic.then(|| s.atan() / FRAC_PI_4),
        unit_det: unit_det.then(|| 1.0 / bounds.upper),
    }
}

/// Exponents for one field, clamped at 1 with the raw values alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub alpha: f64,
    pub alpha_raw: f64,
    pub alpha_bar: f64,
    pub alpha_bar_raw: f64,
    pub alpha_ps_symmetric: f64,
    pub alpha_ps_isotropic: Option<f64>,
    pub alpha_ps_unitdet: Option<f64>,
    pub bounds: EllipticityBounds,
    pub grids: Grids,
    pub center_count: usize,
}

impl ExponentReport {
    pub fn from_scan(
        field: &CoefficientField,
        scan: &CircleScan,
        bounds: EllipticityBounds,
    ) -> Self {
        let isotropic = matches!(field.kind, FieldKind::Identity);
        let ps = ps_bounds(&bounds, isotropic, true);
        let (alpha_raw, alpha_bar_raw) = (scan.alpha(), scan.alpha_bar());
        Self {
            alpha: alpha_raw.min(1.0),
            alpha_raw,
            alpha_bar: alpha_bar_raw.min(1.0),
            alpha_bar_raw,
            alpha_ps_symmetric: ps.symmetric,
            alpha_ps_isotropic: ps.isotropic,
            alpha_ps_unitdet: ps.unit_det,
            bounds,
            grids: scan.grids,
            center_count: scan.samples.len(),
        }
    }
}

/// Validates the field, scans it and assembles the report.
pub fn exponent_report(
    field: &CoefficientField,
    grids: &Grids,
    validate_n: usize,
) -> Result<(ExponentReport, CircleScan)> {
    let bounds = field.validate(validate_n)?;
    let s = scan(field, grids)?;
    Ok((ExponentReport::from_scan(field, &s, bounds), s))
}
