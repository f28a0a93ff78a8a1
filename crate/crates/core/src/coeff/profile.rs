//! Positive 2π-periodic angular profiles `k(θ)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum dense-sample size used to bound a Fourier profile.
const FOURIER_BOUND_SAMPLES: usize = 8192;

/// Serializable representation of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileRepr {
    /// `mean + Σ_j cos[j-1]·cos(jθ) + sin[j-1]·sin(jθ)`.
    Fourier {
        mean: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// Constant values on the uniform partition `[2πi/m, 2π(i+1)/m)`.
    Piecewise { values: Vec<f64> },
}

/// A 2π-periodic function bounded in `[k_min, k_max]` with `k_min > 0`.
///
/// For piecewise profiles the bounds are exact; for Fourier profiles they
/// come from a dense sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct AngularProfile {
    repr: ProfileRepr,
    k_min: f64,
    k_max: f64,
    theta_min: f64,
    theta_max: f64,
    /// Prefix sums `∫_0^{2πi/m} k` for piecewise profiles.
    prefix: Vec<f64>,
}

impl AngularProfile {
    pub fn fourier(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        Self::try_from(ProfileRepr::Fourier { mean, cos, sin })
    }

    pub fn piecewise(values: Vec<f64>) -> Result<Self> {
        Self::try_from(ProfileRepr::Piecewise { values })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::fourier(c, vec![], vec![])
    }

    pub fn repr(&self) -> &ProfileRepr {
        &self.repr
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    /// Angles at which the recorded bounds are attained.
    pub fn extremal_angles(&self) -> (f64, f64) {
        (self.theta_min, self.theta_max)
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(self.repr, ProfileRepr::Piecewise { .. })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match &self.repr {
            ProfileRepr::Fourier { mean, cos, sin } => {
                let mut v = *mean;
                for (j, c) in cos.iter().enumerate() {
                    v += c * ((j + 1) as f64 * theta).cos();
                }
                for (j, s) in sin.iter().enumerate() {
                    v += s * ((j + 1) as f64 * theta).sin();
                }
                v
            }
            ProfileRepr::Piecewise { values } => values[sector(values.len(), theta)],
        }
    }

    /// `∫_0^{2π} k`, exact for both representations.
    pub fn integral(&self) -> f64 {
        match &self.repr {
            ProfileRepr::Fourier { mean, .. } => TAU * mean,
            ProfileRepr::Piecewise { .. } => *self.prefix.last().unwrap(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.integral() / TAU
    }

    /// `Θ(θ) = ∫_0^θ k` for any real `θ` (closed-form antiderivative).
    pub fn cumulative(&self, theta: f64) -> f64 {
        let periods = (theta / TAU).floor();
        let t = theta - periods * TAU;
        let base = periods * self.integral();
        base + match &self.repr {
            ProfileRepr::Fourier { mean, cos, sin } => {
                let mut v = mean * t;
                for (j, c) in cos.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    v += c * (jf * t).sin() / jf;
                }
                for (j, s) in sin.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    v += s * (1.0 - (jf * t).cos()) / jf;
                }
                v
            }
            ProfileRepr::Piecewise { values } => {
                let i = sector(values.len(), t);
                let w = TAU / values.len() as f64;
                self.prefix[i] + values[i] * (t - i as f64 * w)
            }
        }
    }

    /// Angles in `[0, 2π)` where the profile may jump. Empty for smooth profiles.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.repr {
            ProfileRepr::Fourier { .. } => Vec::new(),
            ProfileRepr::Piecewise { values } => {
                let m = values.len();
                if values.iter().all(|v| *v == values[0]) {
                    return Vec::new();
                }
                (0..m).map(|i| TAU * i as f64 / m as f64).collect()
            }
        }
    }

    /// Highest Fourier mode (0 for piecewise profiles).
    pub fn degree(&self) -> usize {
        match &self.repr {
            ProfileRepr::Fourier { cos, sin, .. } => cos.len().max(sin.len()),
            ProfileRepr::Piecewise { .. } => 0,
        }
    }
}

fn sector(m: usize, theta: f64) -> usize {
    let t = theta.rem_euclid(TAU);
    ((t / TAU * m as f64).floor() as usize).min(m - 1)
}

impl TryFrom<ProfileRepr> for AngularProfile {
    type Error = Error;

    fn try_from(repr: ProfileRepr) -> Result<Self> {
        let (k_min, theta_min, k_max, theta_max, prefix);
        match &repr {
            ProfileRepr::Fourier { mean, cos, sin } => {
                if ![*mean].iter().chain(cos).chain(sin).all(|v| v.is_finite()) {
                    return Err(Error::InvalidProfile(
                        "non-finite Fourier coefficient".into(),
                    ));
                }
                let deg = cos.len().max(sin.len());
                let n = FOURIER_BOUND_SAMPLES.max(64 * deg);
                let probe = AngularProfile {
                    repr: repr.clone(),
                    k_min: 0.0,
                    k_max: 0.0,
                    theta_min: 0.0,
                    theta_max: 0.0,
                    prefix: Vec::new(),
                };
                let (mut lo, mut tlo, mut hi, mut thi) =
                    (f64::INFINITY, 0.0, f64::NEG_INFINITY, 0.0);
                for i in 0..n {
                    let t = TAU * i as f64 / n as f64;
                    let v = probe.eval(t);
                    if v < lo {
                        lo = v;
                        tlo = t;
                    }
                    if v > hi {
                        hi = v;
                        thi = t;
                    }
                }
                (k_min, theta_min, k_max, theta_max) = (lo, tlo, hi, thi);
                prefix = Vec::new();
            }
            ProfileRepr::Piecewise { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidProfile(
                        "piecewise profile needs at least one value".into(),
                    ));
                }
                if !values.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidProfile("non-finite piecewise value".into()));
                }
                let m = values.len();
                let w = TAU / m as f64;
                let imin = (0..m)
                    .min_by(|&a, &b| values[a].total_cmp(&values[b]))
                    .unwrap();
                let imax = (0..m)
                    .max_by(|&a, &b| values[a].total_cmp(&values[b]))
                    .unwrap();
                (k_min, theta_min) = (values[imin], (imin as f64 + 0.5) * w);
                (k_max, theta_max) = (values[imax], (imax as f64 + 0.5) * w);
                let mut acc = vec![0.0; m + 1];
                for i in 0..m {
                    acc[i + 1] = acc[i] + values[i] * w;
                }
                prefix = acc;
            }
        }
        if !(k_min > 0.0) {
            return Err(Error::InvalidProfile(format!(
                "profile must stay positive, minimum {k_min}"
            )));
        }
        Ok(Self {
            repr,
            k_min,
            k_max,
            theta_min,
            theta_max,
            prefix,
        })
    }
}

impl From<AngularProfile> for ProfileRepr {
    fn from(p: AngularProfile) -> Self {
        p.repr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn rejects_nonpositive_profiles() {
        assert!(AngularProfile::fourier(1.0, vec![1.5], vec![]).is_err());
        assert!(AngularProfile::piecewise(vec![1.0, 0.0]).is_err());
        assert!(AngularProfile::piecewise(vec![]).is_err());
    }

    #[test]
    fn piecewise_integral_and_cumulative() {
        let k = AngularProfile::piecewise(vec![1.0, 3.0]).unwrap();
        assert_abs_diff_eq!(k.integral(), 4.0 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(k.cumulative(PI), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(k.cumulative(1.5 * PI), 2.5 * PI, epsilon = 1e-14);
        assert_abs_diff_eq!(k.cumulative(TAU + 0.5), 4.0 * PI + 0.5, epsilon = 1e-13);
        assert_eq!(k.k_min(), 1.0);
        assert_eq!(k.k_max(), 3.0);
    }

    #[test]
    fn fourier_cumulative_matches_quadrature() {
        let k = AngularProfile::fourier(2.0, vec![0.3, -0.2], vec![0.1, 0.4]).unwrap();
        let rule = crate::quadrature::Rule::gauss_panels(0.0, 1.7, 0.1, 10);
        assert_abs_diff_eq!(
            k.cumulative(1.7),
            rule.integrate(|t| k.eval(t)),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(k.cumulative(TAU), k.integral(), epsilon = 1e-13);
    }

    #[test]
    fn json_round_trip_uses_kind_tag() {
        let json = r#"{"kind":"piecewise","values":[1.0,3.0]}"#;
        let k: AngularProfile = serde_json::from_str(json).unwrap();
        assert_eq!(k.eval(4.0), 3.0);
        let bad = r#"{"kind":"fourier","mean":-1.0}"#;
        assert!(serde_json::from_str::<AngularProfile>(bad).is_err());
    }
}
