//! Run configuration. Only `field` is required; every other section has
//! defaults.
//!
//! ```json
//! {
//!   "field": {"variant": "angular",
//!             "angular": {"profile": {"kind": "fourier", "mean": 2.5, "cos": [0.5], "sin": [0.3]}},
//!             "domain": {"center": [0, 0], "radius": 1}},
//!   "grids": {"center_grid_n": 16, "radius_grid_n": 32, "quad_n": 128},
//!   "mesh": {"h": 0.05},
//!   "boundary": {"kind": "exact-sharp"},
//!   "seed": 0
//! }
//! ```

use std::path::Path;

use holder2d::alpha::Grids;
use holder2d::{FieldSpec, Point2};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldSpec,
    #[serde(default)]
    pub grids: Grids,
    /// Sample resolution of the coefficient validation.
    #[serde(default = "default_validate_n")]
    pub validate_n: usize,
    #[serde(default)]
    pub wirtinger: WirtingerConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub sharp: SharpConfig,
    #[serde(default)]
    pub measure: MeasureConfig,
    #[serde(default)]
    pub seed: u64,
}

fn default_validate_n() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WirtingerConfig {
    pub n: usize,
    pub amplitude: f64,
    pub phase: f64,
}

impl Default for WirtingerConfig {
    fn default() -> Self {
        Self {
            n: 1024,
            amplitude: 1.0,
            phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub h: f64,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { h: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    /// The exact solution of the extremal example built from the field's profile.
    ExactSharp,
    /// `x₁`.
    #[default]
    Coordinate,
    /// `x₁² - x₂² = ρ² cos 2θ`.
    #[serde(rename = "harmonic-2theta")]
    HarmonicTwoTheta,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub kind: BoundaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SharpConfig {
    /// Bumps per axis in the weak-residual check.
    pub residual_test_n: usize,
    /// Geometric radii of the energy traces: `[r_min, r_max]` and their count.
    pub radii: [f64; 2],
    pub radii_count: usize,
    /// Fit window `[lo, hi]` in radius.
    pub window: [f64; 2],
    /// Polar sample grid `[n_rho, n_theta]` of the solution CSV.
    pub samples: [usize; 2],
}

impl Default for SharpConfig {
    fn default() -> Self {
        Self {
            residual_test_n: 8,
            radii: [0.02, 0.6],
            radii_count: 24,
            window: [0.05, 0.3],
            samples: [32, 64],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasureConfig {
    /// Trace center; the domain center when absent.
    pub center: Option<Point2>,
    /// Explicit radii; otherwise `count` geometric radii between `2.5 h` and
    /// half the distance to the boundary.
    pub radii: Option<Vec<f64>>,
    pub count: Option<usize>,
    /// Fit window `[lo, hi]`; all radii when absent.
    pub window: Option<[f64; 2]>,
    /// Exponent for `G = r^{-2α} g`; the discrete `ᾱ` when absent.
    pub alpha: Option<f64>,
    /// Random pairs for the sampled Hölder seminorm.
    pub holder_samples: Option<usize>,
    /// Radius of the compact disk for the seminorm; half the distance to the boundary when absent.
    pub holder_radius: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// `n` radii spaced geometrically from `lo` to `hi`.
pub fn geometric_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}
