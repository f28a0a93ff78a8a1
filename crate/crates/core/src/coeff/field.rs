use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{AngularProfile, SymMatrix2};
use crate::error::{Error, Result};
use crate::geometry::{DiskDomain, Point2, Rotation};

/// Determinant tolerance for closed-form variants.
pub const DET_TOL_EXACT: f64 = 1e-12;
/// Determinant tolerance for grid-sampled fields.
pub const DET_TOL_GRID: f64 = 1e-10;

/// Coefficient matrices stored on a Cartesian grid of cells, evaluated by
/// nearest cell. Values are row-major, `values[j * nx + i]` covering
/// `[x0 + i dx, x0 + (i+1) dx) × [y0 + j dy, y0 + (j+1) dy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub origin: Point2,
    pub spacing: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<SymMatrix2>,
}

impl GridField {
    pub fn new(
        origin: Point2,
        spacing: [f64; 2],
        nx: usize,
        ny: usize,
        values: Vec<SymMatrix2>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(Error::InvalidArgument(format!(
                "grid of {nx}x{ny} cells needs {} values, got {}",
                nx * ny,
                values.len()
            )));
        }
        if !(spacing[0] > 0.0 && spacing[1] > 0.0) {
            return Err(Error::InvalidArgument(
                "grid spacing must be positive".into(),
            ));
        }
        Ok(Self {
            origin,
            spacing,
            nx,
            ny,
            values,
        })
    }

    /// Grid of `n × n` cells covering the bounding square of `domain`.
    pub fn covering(
        domain: &DiskDomain,
        n: usize,
        mut f: impl FnMut(Point2) -> SymMatrix2,
    ) -> Result<Self> {
        let r = domain.radius;
        let origin = Point2::new(domain.center.x - r, domain.center.y - r);
        let d = 2.0 * r / n as f64;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                values.push(f(Point2::new(
                    origin.x + (i as f64 + 0.5) * d,
                    origin.y + (j as f64 + 0.5) * d,
                )));
            }
        }
        Self::new(origin, [d, d], n, n, values)
    }

    pub fn cell_index(&self, p: Point2) -> usize {
        let fi = ((p.x - self.origin.x) / self.spacing[0]).floor();
        let fj = ((p.y - self.origin.y) / self.spacing[1]).floor();
        let i = (fi.max(0.0) as usize).min(self.nx - 1);
        let j = (fj.max(0.0) as usize).min(self.ny - 1);
        j * self.nx + i
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Identity,
    /// `A = J(θ) diag(k(θ), 1/k(θ)) J(θ)*` with `θ = arg(x - center)`.
    Angular {
        profile: AngularProfile,
        center: Point2,
    },
    Grid(GridField),
}

/// A symmetric, unit-determinant coefficient field on a disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    pub kind: FieldKind,
    pub domain: DiskDomain,
}

/// Ellipticity bounds `lambda |ξ|² ≤ ⟨Aξ, ξ⟩ ≤ upper |ξ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticityBounds {
    pub lambda: f64,
    #[serde(rename = "Lambda")]
    pub upper: f64,
}

impl EllipticityBounds {
    pub fn new(lambda: f64, upper: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= upper) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < lambda <= Lambda, got ({lambda}, {upper})"
            )));
        }
        Ok(Self { lambda, upper })
    }

    /// `L = Λ/λ`.
    pub fn ratio(&self) -> f64 {
        self.upper / self.lambda
    }
}

impl CoefficientField {
    pub fn identity(domain: DiskDomain) -> Self {
        Self {
            kind: FieldKind::Identity,
            domain,
        }
    }

    pub fn angular(profile: AngularProfile, center: Point2, domain: DiskDomain) -> Self {
        Self {
            kind: FieldKind::Angular { profile, center },
            domain,
        }
    }

    pub fn grid(grid: GridField, domain: DiskDomain) -> Self {
        Self {
            kind: FieldKind::Grid(grid),
            domain,
        }
    }

    pub fn det_tolerance(&self) -> f64 {
        match self.kind {
            FieldKind::Grid(_) => DET_TOL_GRID,
            _ => DET_TOL_EXACT,
        }
    }

    /// `A(x)`.
    pub fn eval_matrix(&self, x: Point2) -> Result<SymMatrix2> {
        if !self.domain.contains(x) {
            return Err(Error::PointOutsideDomain(x));
        }
        self.eval_unchecked(x)
    }

    /// `A(x)` without the domain check; the angular singularity is still reported.
    pub fn eval_unchecked(&self, x: Point2) -> Result<SymMatrix2> {
        match &self.kind {
            FieldKind::Identity => Ok(SymMatrix2::IDENTITY),
            FieldKind::Angular { profile, center } => {
                let d = x - *center;
                if d.x == 0.0 && d.y == 0.0 {
                    return Err(Error::AngularCenterSingularity);
                }
                let theta = d.arg();
                let k = profile.eval(theta);
                Ok(SymMatrix2::diag(k, 1.0 / k).rotate(Rotation::new(theta)))
            }
            FieldKind::Grid(g) => Ok(g.values[g.cell_index(x)]),
        }
    }

    /// `P = J(θ)* A(center + ρe^{iθ}) J(θ)`, the coefficient matrix in the polar frame about `center`.
    pub fn polar_conjugate(&self, center: Point2, rho: f64, theta: f64) -> Result<SymMatrix2> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "polar radius must be positive, got {rho}"
            )));
        }
        let a = self.eval_matrix(Point2::polar(center, rho, theta))?;
        Ok(a.conjugate(Rotation::new(theta)))
    }

    /// Angular center and jump angles when the field is a piecewise angular field.
    pub fn angular_breaks(&self) -> Option<(Point2, Vec<f64>)> {
        match &self.kind {
            FieldKind::Angular { profile, center } => Some((*center, profile.breakpoints())),
            _ => None,
        }
    }

    /// Checks symmetry, positive definiteness and `det A = 1` on `sample_n²`
    /// points (every cell for grid fields) and returns the observed bounds.
    pub fn validate(&self, sample_n: usize) -> Result<EllipticityBounds> {
        if sample_n < 16 {
            return Err(Error::InvalidArgument(format!(
                "validation needs sample_n >= 16, got {sample_n}"
            )));
        }
        let tol = self.det_tolerance();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut check = |m: SymMatrix2| -> Result<()> {
            if !m.is_positive_definite() {
                return Err(Error::NonPositiveDefinite);
            }
            let det = m.det();
            if (det - 1.0).abs() > tol {
                return Err(Error::DeterminantViolation { det, tol });
            }
            let (a, b) = m.eigenvalues();
            lo = lo.min(a);
            hi = hi.max(b);
            Ok(())
        };
        match &self.kind {
            FieldKind::Grid(g) => {
                for m in &g.values {
                    check(*m)?;
                }
            }
            _ => {
                let (c, r) = (self.domain.center, self.domain.radius);
                for i in 0..sample_n {
                    let rho = r * (i as f64 + 0.5) / sample_n as f64;
                    for j in 0..sample_n {
                        let theta = TAU * (j as f64 + 0.5) / sample_n as f64;
                        match self.eval_matrix(Point2::polar(c, rho, theta)) {
                            Ok(m) => check(m)?,
                            Err(Error::AngularCenterSingularity) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
                if let FieldKind::Angular { profile, center } = &self.kind {
                    let (tmin, tmax) = profile.extremal_angles();
                    let gap = self.domain.dist_to_boundary(*center);
                    if gap > 0.0 {
                        for t in [tmin, tmax] {
                            check(self.eval_matrix(Point2::polar(*center, 0.5 * gap, t))?)?;
                        }
                    }
                }
            }
        }
        let bounds = EllipticityBounds::new(lo, hi)?;
        debug_assert!((bounds.lambda * bounds.upper - 1.0).abs() <= 1e-10 + 10.0 * tol);
        Ok(bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn k_const(c: f64) -> CoefficientField {
        CoefficientField::angular(
            AngularProfile::constant(c).unwrap(),
            Point2::ORIGIN,
            DiskDomain::unit(),
        )
    }

    #[test]
    fn identity_evaluates_to_identity() {
        let f = CoefficientField::identity(DiskDomain::unit());
        assert_eq!(
            f.eval_matrix(Point2::new(0.3, -0.2)).unwrap(),
            SymMatrix2::IDENTITY
        );
        let b = f.validate(16).unwrap();
        assert_eq!((b.lambda, b.upper), (1.0, 1.0));
    }

    #[test]
    fn angular_axes_are_diagonal() {
        let f = k_const(2.0);
        let a = f.eval_matrix(Point2::new(1.0, 0.0)).unwrap();
        assert!(a.max_abs_diff(&SymMatrix2::diag(2.0, 0.5)) < 1e-15);
        let a = f.eval_matrix(Point2::new(0.0, 1.0)).unwrap();
        assert!(a.max_abs_diff(&SymMatrix2::diag(0.5, 2.0)) < 1e-15);
    }

    #[test]
    fn angular_center_and_outside_are_errors() {
        let f = k_const(2.0);
        assert_eq!(
            f.eval_matrix(Point2::ORIGIN),
            Err(Error::AngularCenterSingularity)
        );
        assert!(matches!(
            f.eval_matrix(Point2::new(1.0, 1.0)),
            Err(Error::PointOutsideDomain(_))
        ));
    }

    #[test]
    fn angular_field_is_radially_constant() {
        let k = AngularProfile::fourier(2.0, vec![0.4], vec![-0.3]).unwrap();
        let f = CoefficientField::angular(k, Point2::ORIGIN, DiskDomain::unit());
        let dir = Point2::new(0.6, -0.8);
        let a0 = f.eval_matrix(dir.scale(0.9)).unwrap();
        for t in [0.5, 0.1, 1e-3, 1e-9] {
            assert!(f.eval_matrix(dir.scale(0.9 * t)).unwrap().max_abs_diff(&a0) < 1e-14);
        }
    }

    #[test]
    fn polar_conjugate_of_centered_angular_field_is_k_diag() {
        let k = AngularProfile::fourier(2.5, vec![0.5], vec![0.2]).unwrap();
        let f = CoefficientField::angular(k.clone(), Point2::ORIGIN, DiskDomain::unit());
        for &t in &[0.0, 0.4, FRAC_PI_2, 3.0, 6.0] {
            let p = f.polar_conjugate(Point2::ORIGIN, 0.7, t).unwrap();
            let kt = k.eval(t);
            assert!(p.max_abs_diff(&SymMatrix2::diag(kt, 1.0 / kt)) < 1e-13);
        }
        assert!(f.polar_conjugate(Point2::ORIGIN, 0.0, 1.0).is_err());
    }

    #[test]
    fn validate_piecewise_bounds_are_exact() {
        let k = AngularProfile::piecewise(vec![2.0, 2.5, 3.0, 2.2]).unwrap();
        let f = CoefficientField::angular(k, Point2::ORIGIN, DiskDomain::unit());
        let b = f.validate(16).unwrap();
        assert_abs_diff_eq!(b.lambda, 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.upper, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn validate_rejects_bad_grid_cell() {
        let d = DiskDomain::unit();
        let mut g = GridField::covering(&d, 4, |_| SymMatrix2::IDENTITY).unwrap();
        g.values[5] = SymMatrix2::diag(2.0, 1.0);
        let f = CoefficientField::grid(g.clone(), d);
        assert!(matches!(
            f.validate(16),
            Err(Error::DeterminantViolation { .. })
        ));
        g.values[5] = SymMatrix2::diag(-1.0, -1.0);
        let f = CoefficientField::grid(g, d);
        assert_eq!(f.validate(16), Err(Error::NonPositiveDefinite));
        assert!(CoefficientField::identity(d).validate(15).is_err());
    }

    #[test]
    fn grid_uses_nearest_cell() {
        let d = DiskDomain::unit();
        let g = GridField::covering(&d, 2, |p| {
            if p.x < 0.0 {
                SymMatrix2::diag(2.0, 0.5)
            } else {
                SymMatrix2::IDENTITY
            }
        })
        .unwrap();
        let f = CoefficientField::grid(g, d);
        assert_eq!(
            f.eval_matrix(Point2::new(-0.1, 0.2)).unwrap(),
            SymMatrix2::diag(2.0, 0.5)
        );
        assert_eq!(
            f.eval_matrix(Point2::new(1.0, 0.0)).unwrap(),
            SymMatrix2::IDENTITY
        );
    }
}
