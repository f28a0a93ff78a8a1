//! Piecewise-linear finite elements for `(a_ij u_{x_i})_{x_j} = 0` on a disk
//! with Dirichlet data.

mod locate;
mod mesh;
mod solve;
mod sparse;

pub use locate::{barycentric, Locator};
pub use mesh::{build_mesh, build_mesh_with, Mesh, MeshOptions};
pub use solve::{solve_dirichlet, SolutionField, SolveStats, CG_TOL};
pub use sparse::{conjugate_gradient, CgStats, CsrMatrix};
