//! Assembly and solution of the Dirichlet problem with P1 elements.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::locate::Locator;
use super::mesh::Mesh;
use super::sparse::{conjugate_gradient, CsrMatrix};
use crate::coeff::{CoefficientField, SymMatrix2};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::solution::ScalarField;

/// Relative residual at which conjugate gradients stops.
pub const CG_TOL: f64 = 1e-10;

/// CG iteration cap per unknown.
const CG_ITERATIONS_PER_DOF: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SolveStats {
    pub n_vertices: usize,
    pub n_triangles: usize,
    pub n_dof: usize,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// A P1 function on a mesh together with the element coefficients it was
/// computed with.
#[derive(Debug)]
pub struct SolutionField {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
    coefficients: Vec<SymMatrix2>,
    locator: OnceLock<Locator>,
}

/// Barycentric gradients `∇λ_i` and the area of a triangle.
fn shape_gradients(p: [Point2; 3]) -> ([Point2; 3], f64) {
    let area = super::mesh::signed_area(p);
    let g =
        |a: Point2, b: Point2| Point2::new((a.y - b.y) / (2.0 * area), (b.x - a.x) / (2.0 * area));
    ([g(p[1], p[2]), g(p[2], p[0]), g(p[0], p[1])], area)
}

fn element_stiffness(a: &SymMatrix2, p: [Point2; 3]) -> [[f64; 3]; 3] {
    let (g, area) = shape_gradients(p);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = area * a.bilinear(g[j], g[i]);
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Element coefficients, frozen at barycenters.
fn element_coefficients(field: &CoefficientField, mesh: &Mesh) -> Result<Vec<SymMatrix2>> {
    (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| field.eval_unchecked(mesh.barycenter(t)))
        .collect()
}

/// Solves `div(A∇u) = 0` in the mesh with `u = g` at boundary vertices.
pub fn solve_dirichlet(
    field: &CoefficientField,
    mesh: Arc<Mesh>,
    g: &dyn ScalarField,
) -> Result<(SolutionField, SolveStats)> {
    let coefficients = element_coefficients(field, &mesh)?;
    let nv = mesh.n_vertices();
    let mut dof = vec![usize::MAX; nv];
    let mut n_dof = 0;
    for v in 0..nv {
        if !mesh.boundary[v] {
            dof[v] = n_dof;
            n_dof += 1;
        }
    }
    let mut values: Vec<f64> = (0..nv)
        .map(|v| {
            if mesh.boundary[v] {
                g.value(mesh.vertices[v])
            } else {
                0.0
            }
        })
        .collect();

    let mut triplets = Vec::with_capacity(9 * mesh.n_triangles());
    let mut rhs = vec![0.0; n_dof];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let k = element_stiffness(&coefficients[t], mesh.triangle(t));
        for i in 0..3 {
            let di = dof[tri[i]];
            if di == usize::MAX {
                continue;
            }
            for j in 0..3 {
                let dj = dof[tri[j]];
                if dj == usize::MAX {
                    rhs[di] -= k[i][j] * values[tri[j]];
                } else {
                    triplets.push((di, dj, k[i][j]));
                }
            }
        }
    }
    let matrix = CsrMatrix::from_triplets(n_dof, triplets);
    let mut x = vec![0.0; n_dof];
    let cg = conjugate_gradient(
        &matrix,
        &rhs,
        &mut x,
        CG_TOL,
        CG_ITERATIONS_PER_DOF * n_dof.max(1),
    )?;
    for v in 0..nv {
        if dof[v] != usize::MAX {
            values[v] = x[dof[v]];
        }
    }
    let stats = SolveStats {
        n_vertices: nv,
        n_triangles: mesh.n_triangles(),
        n_dof,
        iterations: cg.iterations,
        relative_residual: cg.relative_residual,
    };
    Ok((
        SolutionField {
            mesh,
            values,
            coefficients,
            locator: OnceLock::new(),
        },
        stats,
    ))
}

// Degree-5 seven-point rule on the reference triangle (barycentric points, weights summing to 1).
fn seven_point_rule() -> [([f64; 3], f64); 7] {
    let s = 15f64.sqrt();
    let (a1, b1, w1) = (
        (6.0 - s) / 21.0,
        (9.0 + 2.0 * s) / 21.0,
        (155.0 - s) / 1200.0,
    );
    let (a2, b2, w2) = (
        (6.0 + s) / 21.0,
        (9.0 - 2.0 * s) / 21.0,
        (155.0 + s) / 1200.0,
    );
    let c = 1.0 / 3.0;
    [
        ([c, c, c], 0.225),
        ([a1, a1, b1], w1),
        ([a1, b1, a1], w1),
        ([b1, a1, a1], w1),
        ([a2, a2, b2], w2),
        ([a2, b2, a2], w2),
        ([b2, a2, a2], w2),
    ]
}

impl SolutionField {
    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coefficients(&self) -> &[SymMatrix2] {
        &self.coefficients
    }

    fn locator(&self) -> &Locator {
        self.locator.get_or_init(|| Locator::new(&self.mesh))
    }

    /// Constant gradient of the solution on triangle `t`.
    pub fn element_gradient(&self, t: usize) -> Point2 {
        let (g, _) = shape_gradients(self.mesh.triangle(t));
        let tri = self.mesh.triangles[t];
        (0..3).fold(Point2::ORIGIN, |acc, i| {
            acc + g[i].scale(self.values[tri[i]])
        })
    }

    /// `∫_T ⟨A∇u, ∇u⟩` for every triangle `T`.
    pub fn element_energies(&self) -> Vec<f64> {
        (0..self.mesh.n_triangles())
            .map(|t| {
                let g = self.element_gradient(t);
                self.mesh.area(t) * self.coefficients[t].quad_form(g)
            })
            .collect()
    }

    pub fn energy(&self) -> f64 {
        self.element_energies().iter().sum()
    }

    /// `(‖u - exact‖, ‖u - exact‖ / ‖exact‖)` in `L²` of the mesh.
    pub fn l2_error(&self, exact: &dyn ScalarField) -> (f64, f64) {
        let rule = seven_point_rule();
        // per-element terms are collected before summing so the result does
        // not depend on how the work was split across threads
        let terms: Vec<(f64, f64)> = (0..self.mesh.n_triangles())
            .into_par_iter()
            .map(|t| {
                let p = self.mesh.triangle(t);
                let tri = self.mesh.triangles[t];
                let area = self.mesh.area(t);
                let mut e = 0.0;
                let mut n = 0.0;
                for (lam, w) in &rule {
                    let x = Point2::new(
                        lam[0] * p[0].x + lam[1] * p[1].x + lam[2] * p[2].x,
                        lam[0] * p[0].y + lam[1] * p[1].y + lam[2] * p[2].y,
                    );
                    let uh = lam[0] * self.values[tri[0]]
                        + lam[1] * self.values[tri[1]]
                        + lam[2] * self.values[tri[2]];
                    let ue = exact.value(x);
                    e += w * area * (uh - ue).powi(2);
                    n += w * area * ue * ue;
                }
                (e, n)
            })
            .collect();
        let (err2, norm2) = terms.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let abs = err2.sqrt();
        (abs, if norm2 > 0.0 { abs / norm2.sqrt() } else { abs })
    }

    /// `‖(K u)_I‖ / ‖(K_IB g)_I‖`: the discrete weak equations at interior
    /// vertices, relative to the load from the boundary data (`0` when that
    /// load vanishes and the residual does too).
    pub fn galerkin_residual(&self) -> f64 {
        let nv = self.mesh.n_vertices();
        let mut full = vec![0.0; nv];
        let mut load = vec![0.0; nv];
        for (t, tri) in self.mesh.triangles.iter().enumerate() {
            let k = element_stiffness(&self.coefficients[t], self.mesh.triangle(t));
            for i in 0..3 {
                for j in 0..3 {
                    full[tri[i]] += k[i][j] * self.values[tri[j]];
                    if self.mesh.boundary[tri[j]] {
                        load[tri[i]] += k[i][j] * self.values[tri[j]];
                    }
                }
            }
        }
        let interior = |v: &[f64]| {
            v.iter()
                .zip(&self.mesh.boundary)
                .filter(|(_, &b)| !b)
                .map(|(x, _)| x * x)
                .sum::<f64>()
                .sqrt()
        };
        let (r, l) = (interior(&full), interior(&load));
        if l > 0.0 {
            r / l
        } else {
            r
        }
    }

    /// Maximum and minimum nodal values.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Nodal values on boundary vertices only.
    pub fn boundary_range(&self) -> (f64, f64) {
        self.values
            .iter()
            .zip(&self.mesh.boundary)
            .filter(|(_, &b)| b)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&v, _)| {
                (lo.min(v), hi.max(v))
            })
    }

    fn interpolate(&self, p: Point2) -> Option<(usize, f64)> {
        let (t, lam) = self.locator().closest(&self.mesh, p)?;
        let tri = self.mesh.triangles[t];
        Some((
            t,
            lam[0] * self.values[tri[0]]
                + lam[1] * self.values[tri[1]]
                + lam[2] * self.values[tri[2]],
        ))
    }

    pub fn try_value(&self, p: Point2) -> Result<f64> {
        self.interpolate(p)
            .map(|(_, v)| v)
            .ok_or(Error::PointOutsideDomain(p))
    }
}

impl ScalarField for SolutionField {
    /// Linear interpolation; NaN away from the mesh.
    fn value(&self, p: Point2) -> f64 {
        self.interpolate(p).map_or(f64::NAN, |(_, v)| v)
    }

    /// Gradient of the containing element.
    fn gradient(&self, p: Point2) -> Point2 {
        match self.interpolate(p) {
            Some((t, _)) => self.element_gradient(t),
            None => Point2::new(f64::NAN, f64::NAN),
        }
    }
}
