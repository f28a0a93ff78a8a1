//! Regularity measurements: energy profiles `g(r) = ∫_{|x-x₀|<r} ⟨A∇u, ∇u⟩`,
//! exponent fits, monotonicity of `G(r) = r^{-2α} g(r)` and sampled Hölder
//! quotients.

use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::CoefficientField;
use crate::error::{Error, Result};
use crate::fem::SolutionField;
use crate::geometry::{DiskDomain, Point2};
use crate::quadrature::{periodic_rule, Rule};
use crate::solution::ScalarField;

/// Inner radius below which analytic energy densities are not integrated.
pub const ANALYTIC_CUTOFF: f64 = 1e-8;

/// Relative size of the allowed decrease of `G` on FEM traces, in units of `g(r_max)`.
pub const FEM_MONOTONICITY_TOL: f64 = 1e-6;

const ANGULAR_NODES: usize = 1024;
const LOG_PANEL: f64 = 0.1;
const PANEL_ORDER: usize = 8;
/// Sample points per triangle straddling a circle (level-4 subdivision).
const STRADDLE_LEVEL: usize = 4;

/// What `energy_profile` integrates.
#[derive(Clone, Copy)]
pub enum EnergySource<'a> {
    /// Any function with a gradient; integrated by polar quadrature.
    Analytic(&'a dyn ScalarField),
    /// A finite-element solution; integrated element by element.
    Fem(&'a SolutionField),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyTrace {
    pub center: Point2,
    pub radii: Vec<f64>,
    pub energies: Vec<f64>,
}

impl EnergyTrace {
    /// `G(r_i) = r_i^{-2α} g(r_i)`.
    pub fn normalized(&self, alpha: f64) -> Vec<f64> {
        self.radii
            .iter()
            .zip(&self.energies)
            .map(|(r, g)| g * r.powf(-2.0 * alpha))
            .collect()
    }

    /// Indices of the radii in `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Range<usize> {
        let start = self.radii.partition_point(|&r| r < lo);
        let end = self.radii.partition_point(|&r| r <= hi);
        start..end.max(start)
    }

    pub fn max_energy(&self) -> f64 {
        self.energies.last().copied().unwrap_or(0.0)
    }
}

fn check_radii(domain: &DiskDomain, center: Point2, radii: &[f64]) -> Result<()> {
    if !domain.contains(center) {
        return Err(Error::CenterOutsideDomain(center));
    }
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no radii".into()));
    }
    if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    let last = *radii.last().unwrap();
    if !domain.contains_disk(center, last) {
        return Err(Error::CircleOutsideDomain {
            center,
            radius: last,
        });
    }
    Ok(())
}

/// Energies of `u` over the disks `|x - center| < r` for each radius.
pub fn energy_profile(
    field: &CoefficientField,
    source: EnergySource<'_>,
    center: Point2,
    radii: &[f64],
) -> Result<EnergyTrace> {
    check_radii(&field.domain, center, radii)?;
    let energies = match source {
        EnergySource::Analytic(u) => analytic_profile(field, u, center, radii)?,
        EnergySource::Fem(u) => fem_profile(u, center, radii),
    };
    Ok(EnergyTrace {
        center,
        radii: radii.to_vec(),
        energies,
    })
}

/// Polar quadrature about `center`: log-spaced Gauss panels on each ring
/// `[r_{i-1}, r_i]` (from [`ANALYTIC_CUTOFF`] for the first), and in angle the
/// trapezoid rule or, when `center` is the pole of a piecewise angular field,
/// Gauss panels between its jump angles. Ring contributions are summed, so
/// the trace is additive by construction.
fn analytic_profile(
    field: &CoefficientField,
    u: &dyn ScalarField,
    center: Point2,
    radii: &[f64],
) -> Result<Vec<f64>> {
    let breaks = match field.angular_breaks() {
        Some((pole, breaks)) if pole == center => breaks,
        _ => Vec::new(),
    };
    let angular = periodic_rule(ANGULAR_NODES, &breaks);
    let mut inner = Vec::with_capacity(radii.len());
    let mut prev = ANALYTIC_CUTOFF.min(0.5 * radii[0]);
    for &r in radii {
        inner.push(prev);
        prev = r;
    }
    let rings = inner
        .par_iter()
        .zip(radii)
        .map(|(&a, &b)| {
            let radial = Rule::log_panels(a, b, LOG_PANEL, PANEL_ORDER);
            let mut total = 0.0;
            for (&rho, &wr) in radial.nodes.iter().zip(&radial.weights) {
                let mut ring = 0.0;
                for (&theta, &wt) in angular.nodes.iter().zip(&angular.weights) {
                    let p = Point2::polar(center, rho, theta);
                    let density = field.eval_unchecked(p)?.quad_form(u.gradient(p));
                    if !density.is_finite() {
                        return Err(Error::QuadratureBreakdown);
                    }
                    ring += wt * density;
                }
                total += wr * rho * ring;
            }
            Ok(total)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut acc = 0.0;
    Ok(rings
        .into_iter()
        .map(|e| {
            acc += e;
            acc
        })
        .collect())
}

/// Centroids of the `level²` congruent subtriangles, in barycentric coordinates.
fn subdivision_centroids(level: usize) -> Vec<[f64; 3]> {
    let n = level as f64;
    let mut out = Vec::with_capacity(level * level);
    for i in 0..level {
        for j in 0..level - i {
            let (a, b) = (i as f64, j as f64);
            // upward subtriangle
            out.push([
                (a + 1.0 / 3.0) / n,
                (b + 1.0 / 3.0) / n,
                1.0 - (a + b + 2.0 / 3.0) / n,
            ]);
            if i + j + 1 < level {
                // downward subtriangle
                out.push([
                    (a + 2.0 / 3.0) / n,
                    (b + 2.0 / 3.0) / n,
                    1.0 - (a + b + 4.0 / 3.0) / n,
                ]);
            }
        }
    }
    out
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.dist(a + ab.scale(t))
}

/// Exact element energies for triangles inside each disk, plus the sampled
/// inside fraction of the element energy for triangles cut by its circle.
fn fem_profile(u: &SolutionField, center: Point2, radii: &[f64]) -> Vec<f64> {
    let mesh = u.mesh();
    let energies = u.element_energies();
    let samples = subdivision_centroids(STRADDLE_LEVEL);
    radii
        .par_iter()
        .map(|&r| {
            let mut total = 0.0;
            for (t, &e) in energies.iter().enumerate() {
                let p = mesh.triangle(t);
                let far = p.iter().map(|q| q.dist(center)).fold(0.0, f64::max);
                if far <= r {
                    total += e;
                    continue;
                }
                let near = (0..3)
                    .map(|i| segment_distance(center, p[i], p[(i + 1) % 3]))
                    .fold(f64::INFINITY, f64::min);
                let lam = crate::fem::barycentric(p, center);
                let center_inside = lam.iter().all(|&l| l >= 0.0);
                if near >= r && !center_inside {
                    continue;
                }
                let inside = samples
                    .iter()
                    .filter(|l| {
                        let x = Point2::new(
                            l[0] * p[0].x + l[1] * p[1].x + l[2] * p[2].x,
                            l[0] * p[0].y + l[1] * p[1].y + l[2] * p[2].y,
                        );
                        x.dist(center) < r
                    })
                    .count();
                total += e * inside as f64 / samples.len() as f64;
            }
            total
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Half the least-squares slope of `log g` against `log r`.
    pub exponent: f64,
    /// Root-mean-square residual of the fit in `log g`.
    pub residual: f64,
    pub points: usize,
}

pub fn fit_exponent(trace: &EnergyTrace, window: Range<usize>) -> Result<ExponentFit> {
    if window.end > trace.radii.len() || window.len() < 4 {
        return Err(Error::DegenerateWindow(format!(
            "window {window:?} needs at least 4 of {} points",
            trace.radii.len()
        )));
    }
    let xs: Vec<f64> = trace.radii[window.clone()].iter().map(|r| r.ln()).collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &g in &trace.energies[window] {
        if !(g > 0.0) {
            return Err(Error::DegenerateWindow(
                "non-positive energy in window".into(),
            ));
        }
        ys.push(g.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    Ok(ExponentFit {
        exponent: 0.5 * slope,
        residual: (ss / n).sqrt(),
        points: xs.len(),
    })
}

/// `min_i (G(r_{i+1}) - G(r_i))` with `G = r^{-2α} g`; `+∞` for fewer than two radii.
pub fn monotonicity_check(trace: &EnergyTrace, alpha: f64) -> f64 {
    trace
        .normalized(alpha)
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Allowed decrease of `G` on a FEM trace: [`FEM_MONOTONICITY_TOL`]`·g(r_max)`.
pub fn fem_monotonicity_tolerance(trace: &EnergyTrace) -> f64 {
    FEM_MONOTONICITY_TOL * trace.max_energy()
}

/// `|u(x) - u(y)| / |x - y|^α`, or `None` when undefined.
pub fn holder_quotient(u: &dyn ScalarField, x: Point2, y: Point2, alpha: f64) -> Option<f64> {
    let d = x.dist(y);
    if d == 0.0 {
        return None;
    }
    let q = (u.value(x) - u.value(y)).abs() / d.powf(alpha);
    q.is_finite().then_some(q)
}

/// Grid side of the deterministic pairs in [`pointwise_holder`].
const HOLDER_GRID: usize = 12;

/// Sampled Hölder seminorm of `u` on `compact`: the largest quotient over
/// `sample_n` random pairs and all pairs of a coarse grid. A lower bound for
/// the true supremum.
pub fn pointwise_holder<R: Rng + ?Sized>(
    u: &dyn ScalarField,
    compact: &DiskDomain,
    alpha: f64,
    sample_n: usize,
    rng: &mut R,
) -> Result<f64> {
    if sample_n < 100 {
        return Err(Error::InvalidArgument(format!(
            "pointwise_holder needs sample_n >= 100, got {sample_n}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let (c, r) = (compact.center, compact.radius);
    let mut draw = || loop {
        let p = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if p.dot(p) <= 1.0 {
            break c + p.scale(r);
        }
    };
    let mut best: f64 = 0.0;
    for _ in 0..sample_n {
        let (x, y) = (draw(), draw());
        if let Some(q) = holder_quotient(u, x, y, alpha) {
            best = best.max(q);
        }
    }
    let step = 2.0 * r / (HOLDER_GRID - 1) as f64;
    let grid: Vec<Point2> = (0..HOLDER_GRID * HOLDER_GRID)
        .map(|k| {
            Point2::new(
                c.x - r + (k % HOLDER_GRID) as f64 * step,
                c.y - r + (k / HOLDER_GRID) as f64 * step,
            )
        })
        .filter(|p| p.dist(c) <= r)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&p| u.value(p)).collect();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let q = (values[i] - values[j]).abs() / grid[i].dist(grid[j]).powf(alpha);
            if q.is_finite() {
                best = best.max(q);
            }
        }
    }
    Ok(best)
}

/// `max_θ |u(x₀ + ρ e^{iθ}) - u(x₀)| / ρ^α` for each `ρ`, over `n_angles` equispaced angles.
pub fn center_quotients(
    u: &dyn ScalarField,
    center: Point2,
    alpha: f64,
    radii: &[f64],
    n_angles: usize,
) -> Vec<f64> {
    let u0 = u.value(center);
    radii
        .iter()
        .map(|&rho| {
            (0..n_angles)
                .map(|i| {
                    let p = Point2::polar(
                        center,
                        rho,
                        std::f64::consts::TAU * i as f64 / n_angles as f64,
                    );
                    (u.value(p) - u0).abs() / rho.powf(alpha)
                })
                .fold(0.0, f64::max)
        })
        .collect()
}
