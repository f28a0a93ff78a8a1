//! JSON field format:
//!
//! ```json
//! {"variant": "identity" | "angular" | "grid",
//!  "angular": {"profile": {"kind": "fourier", "mean": 2.0, "cos": [], "sin": []}, "center": [0, 0]},
//!  "grid": {"origin": [-1, -1], "spacing": [0.5, 0.5], "nx": 4, "ny": 4, "values": [[a11, a12, a22], ...]},
//!  "domain": {"center": [0, 0], "radius": 1}}
//! ```

use serde::{Deserialize, Serialize};

use super::{AngularProfile, CoefficientField, FieldKind, GridField};
use crate::error::{Error, Result};
use crate::geometry::{DiskDomain, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Identity,
    Angular,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularSpec {
    pub profile: AngularProfile,
    #[serde(default)]
    pub center: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub center: Point2,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular: Option<AngularSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridField>,
    pub domain: DomainSpec,
}

impl FieldSpec {
    pub fn build(&self) -> Result<CoefficientField> {
        let domain = DiskDomain::new(self.domain.center, self.domain.radius)?;
        let kind = match self.variant {
            Variant::Identity => FieldKind::Identity,
            Variant::Angular => {
                let a = self.angular.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("variant \"angular\" needs an \"angular\" block".into())
                })?;
                FieldKind::Angular {
                    profile: a.profile.clone(),
                    center: a.center,
                }
            }
            Variant::Grid => {
                let g = self.grid.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("variant \"grid\" needs a \"grid\" block".into())
                })?;
                FieldKind::Grid(GridField::new(
                    g.origin,
                    g.spacing,
                    g.nx,
                    g.ny,
                    g.values.clone(),
                )?)
            }
        };
        Ok(CoefficientField { kind, domain })
    }
}

impl From<&CoefficientField> for FieldSpec {
    fn from(f: &CoefficientField) -> Self {
        let domain = DomainSpec {
            center: f.domain.center,
            radius: f.domain.radius,
        };
        match &f.kind {
            FieldKind::Identity => FieldSpec {
                variant: Variant::Identity,
                angular: None,
                grid: None,
                domain,
            },
            FieldKind::Angular { profile, center } => FieldSpec {
                variant: Variant::Angular,
                angular: Some(AngularSpec {
                    profile: profile.clone(),
                    center: *center,
                }),
                grid: None,
                domain,
            },
            FieldKind::Grid(g) => FieldSpec {
                variant: Variant::Grid,
                angular: None,
                grid: Some(g.clone()),
                domain,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_angular_spec() {
        let json = r#"{"variant":"angular",
            "angular":{"profile":{"kind":"fourier","mean":2.0,"cos":[0.1],"sin":[]},"center":[0,0]},
            "domain":{"center":[0,0],"radius":1}}"#;
        let spec: FieldSpec = serde_json::from_str(json).unwrap();
        let f = spec.build().unwrap();
        assert!(matches!(f.kind, FieldKind::Angular { .. }));
        let back: FieldSpec =
            serde_json::from_str(&serde_json::to_string(&FieldSpec::from(&f)).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn missing_block_is_an_error() {
        let json = r#"{"variant":"angular","domain":{"center":[0,0],"radius":1}}"#;
        let spec: FieldSpec = serde_json::from_str(json).unwrap();
        assert!(spec.build().is_err());
        let json = r#"{"variant":"weird","domain":{"center":[0,0],"radius":1}}"#;
        assert!(serde_json::from_str::<FieldSpec>(json).is_err());
    }
}
