//! The sharp weighted Wirtinger inequality
//!
//! ```text
//! ∫ a w²  ≤  ((1/2π) ∫ a)² ∫ (1/a) (w')²      for 2π-periodic w with ∫ a w = 0,
//! ```
//!
//! its closed-form constant `(2π / ∫a)²`, the equality family
//! `w = C cos((2π/∫a) Θ(θ) + φ)` with `Θ(θ) = ∫_0^θ a`, and an independent
//! discrete route: piecewise-linear periodic elements and block inverse
//! iteration for the smallest constrained generalized eigenvalue.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::coeff::AngularProfile;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, periodic_rule};

/// Relative tolerance on `|∫ a w|` accepted by [`check_inequality`],
/// measured against `sqrt(∫a · ∫ a w²)`.
pub const CONSTRAINT_TOL: f64 = 1e-8;
/// Inverse-iteration cap.
pub const MAX_EIGEN_ITERATIONS: usize = 500;
/// Relative stagnation tolerance on the smallest Ritz value.
pub const EIGEN_STAGNATION_TOL: f64 = 1e-12;

/// Number of quadrature nodes used for closed-form integrands.
const CLOSED_FORM_NODES: usize = 4096;

/// Analytic description attached to a [`PeriodicFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `amplitude · cos(β Θ(θ) + phase) - shift`, `β = 2π/∫a`.
    Minimizer {
        profile: AngularProfile,
        amplitude: f64,
        phase: f64,
        shift: f64,
    },
    /// `constant + Σ_j cos[j-1] cos(jθ) + sin[j-1] sin(jθ)`.
    Trigonometric {
        constant: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

impl ClosedForm {
    pub fn value(&self, theta: f64) -> f64 {
        match self {
            ClosedForm::Minimizer {
                profile,
                amplitude,
                phase,
                shift,
            } => {
                let beta = TAU / profile.integral();
                amplitude * (beta * profile.cumulative(theta) + phase).cos() - shift
            }
            ClosedForm::Trigonometric { constant, cos, sin } => {
                let mut v = *constant;
                for (j, c) in cos.iter().enumerate() {
                    v += c * ((j + 1) as f64 * theta).cos();
                }
                for (j, s) in sin.iter().enumerate() {
                    v += s * ((j + 1) as f64 * theta).sin();
                }
                v
            }
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match self {
            ClosedForm::Minimizer {
                profile,
                amplitude,
                phase,
                ..
            } => {
                let beta = TAU / profile.integral();
                -amplitude
                    * beta
                    * profile.eval(theta)
                    * (beta * profile.cumulative(theta) + phase).sin()
            }
            ClosedForm::Trigonometric { cos, sin, .. } => {
                let mut v = 0.0;
                for (j, c) in cos.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    v -= jf * c * (jf * theta).sin();
                }
                for (j, s) in sin.iter().enumerate() {
                    let jf = (j + 1) as f64;
                    v += jf * s * (jf * theta).cos();
                }
                v
            }
        }
    }

    fn degree(&self) -> usize {
        match self {
            ClosedForm::Minimizer { .. } => 0,
            ClosedForm::Trigonometric { cos, sin, .. } => cos.len().max(sin.len()),
        }
    }
}

/// Nodal values on `θ_i = 2πi/n`, `n` a power of two, optionally tagged with
/// the closed form they were sampled from.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    values: Vec<f64>,
    closed_form: Option<ClosedForm>,
}

impl PeriodicFunction {
    pub fn from_nodal(values: Vec<f64>) -> Result<Self> {
        check_resolution(values.len(), 16)?;
        Ok(Self {
            values,
            closed_form: None,
        })
    }

    pub fn from_closed_form(form: ClosedForm, n: usize) -> Result<Self> {
        check_resolution(n, 16)?;
        let values = (0..n).map(|i| form.value(node(n, i))).collect();
        Ok(Self {
            values,
            closed_form: Some(form),
        })
    }

    pub fn trigonometric(constant: f64, cos: Vec<f64>, sin: Vec<f64>, n: usize) -> Result<Self> {
        Self::from_closed_form(ClosedForm::Trigonometric { constant, cos, sin }, n)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn theta(&self, i: usize) -> f64 {
        node(self.len(), i)
    }

    /// Drops the closed form, keeping only nodal values.
    pub fn into_nodal(self) -> Self {
        Self {
            values: self.values,
            closed_form: None,
        }
    }

    fn shifted(&self, kappa: f64) -> Self {
        let values = self.values.iter().map(|v| v - kappa).collect();
        let closed_form = self.closed_form.clone().map(|f| match f {
            ClosedForm::Minimizer {
                profile,
                amplitude,
                phase,
                shift,
            } => ClosedForm::Minimizer {
                profile,
                amplitude,
                phase,
                shift: shift + kappa,
            },
            ClosedForm::Trigonometric { constant, cos, sin } => ClosedForm::Trigonometric {
                constant: constant - kappa,
                cos,
                sin,
            },
        });
        Self {
            values,
            closed_form,
        }
    }
}

fn node(n: usize, i: usize) -> f64 {
    TAU * i as f64 / n as f64
}

fn check_resolution(n: usize, min: usize) -> Result<()> {
    if n < min || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "resolution must be a power of two >= {min}, got {n}"
        )));
    }
    Ok(())
}

/// The integrals entering the Wirtinger quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedIntegrals {
    /// `∫ a`
    pub weight: f64,
    /// `∫ a w`
    pub weighted_mean: f64,
    /// `∫ a w²`
    pub mass: f64,
    /// `∫ (1/a) (w')²`
    pub stiffness: f64,
}

impl WeightedIntegrals {
    pub fn quotient(&self) -> f64 {
        self.stiffness / self.mass
    }

    /// `((1/2π)∫a)² ∫(1/a)(w')² - ∫ a w²`.
    pub fn slack(&self) -> f64 {
        let m = self.weight / TAU;
        m * m * self.stiffness - self.mass
    }
}

/// Evaluates the Wirtinger integrals of `w` against the weight `a`.
///
/// Closed-form functions are integrated with a 4096-node periodic rule
/// (Gauss panels between the jumps of a piecewise weight). Nodal functions
/// use spectral differentiation and the trapezoid rule for Fourier weights,
/// and the piecewise-linear interpolant with exact per-piece integration for
/// piecewise weights.
pub fn weighted_integrals(a: &AngularProfile, w: &PeriodicFunction) -> WeightedIntegrals {
    let weight = a.integral();
    if let Some(form) = &w.closed_form {
        let n = CLOSED_FORM_NODES
            .max(w.len())
            .max(32 * (form.degree() + a.degree() + 1));
        let rule = periodic_rule(n, &a.breakpoints());
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (&t, &q) in rule.nodes.iter().zip(&rule.weights) {
            let at = a.eval(t);
            let v = form.value(t);
            let d = form.derivative(t);
            m0 += q * at * v;
            m1 += q * at * v * v;
            m2 += q * d * d / at;
        }
        return WeightedIntegrals {
            weight,
            weighted_mean: m0,
            mass: m1,
            stiffness: m2,
        };
    }
    if a.is_piecewise() {
        let lin = LinearElements::assemble(a, w.len());
        let v = &w.values;
        WeightedIntegrals {
            weight,
            weighted_mean: lin.load.iter().zip(v).map(|(b, x)| b * x).sum(),
            mass: lin.mass.form(v, v),
            stiffness: lin.stiffness.form(v, v),
        }
    } else {
        let n = w.len();
        let h = TAU / n as f64;
        let d = spectral_derivative(&w.values);
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let at = a.eval(node(n, i));
            m0 += at * w.values[i];
            m1 += at * w.values[i] * w.values[i];
            m2 += d[i] * d[i] / at;
        }
        WeightedIntegrals {
            weight,
            weighted_mean: h * m0,
            mass: h * m1,
            stiffness: h * m2,
        }
    }
}

/// Derivative of the trigonometric interpolant of equispaced periodic samples.
pub fn spectral_derivative(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let freq = if j < n / 2 {
            j as f64
        } else if j == n / 2 {
            0.0
        } else {
            j as f64 - n as f64
        };
        *c *= Complex64::new(0.0, freq);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// The sharp constant `(2π / ∫a)²`.
pub fn wirtinger_constant(a: &AngularProfile) -> f64 {
    let r = TAU / a.integral();
    r * r
}

/// Samples `C cos((2π/∫a) Θ(θ) + φ)` on `n` nodes, keeping the closed form.
pub fn minimizer(
    a: &AngularProfile,
    amplitude: f64,
    phase: f64,
    n: usize,
) -> Result<PeriodicFunction> {
    if amplitude == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    PeriodicFunction::from_closed_form(
        ClosedForm::Minimizer {
            profile: a.clone(),
            amplitude,
            phase,
            shift: 0.0,
        },
        n,
    )
}

/// Subtracts the `a`-weighted mean so that `∫ a w = 0`.
pub fn project_constraint(a: &AngularProfile, w: &PeriodicFunction) -> PeriodicFunction {
    let ints = weighted_integrals(a, w);
    w.shifted(ints.weighted_mean / ints.weight)
}

/// Wirtinger quotient `∫(1/a)(w')² / ∫ a w²`.
pub fn quotient(a: &AngularProfile, w: &PeriodicFunction) -> f64 {
    weighted_integrals(a, w).quotient()
}

/// Returns the slack `RHS - LHS` of the inequality for `w`, which must
/// satisfy the weighted mean constraint.
pub fn check_inequality(a: &AngularProfile, w: &PeriodicFunction) -> Result<f64> {
    let ints = weighted_integrals(a, w);
    let scale = (ints.weight * ints.mass).sqrt().max(f64::MIN_POSITIVE);
    if ints.weighted_mean.abs() > CONSTRAINT_TOL * scale {
        return Err(Error::ConstraintViolated {
            residual: ints.weighted_mean,
        });
    }
    Ok(ints.slack())
}

/// Best fit of nodal data to the equality family `C cos(βΘ + φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyFit {
    pub amplitude: f64,
    pub phase: f64,
    /// `‖w - fit‖ / ‖w‖` in the `a`-weighted discrete norm.
    pub mismatch: f64,
}

/// Least-squares projection of `w` onto `span{cos βΘ, sin βΘ}` in the
/// `a`-weighted trapezoid inner product.
pub fn fit_to_family(a: &AngularProfile, w: &PeriodicFunction) -> FamilyFit {
    let n = w.len();
    let beta = TAU / a.integral();
    let (mut cc, mut cs, mut ss, mut wc, mut ws, mut ww) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let t = node(n, i);
        let at = a.eval(t);
        let (s, c) = (beta * a.cumulative(t)).sin_cos();
        let v = w.values[i];
        cc += at * c * c;
        cs += at * c * s;
        ss += at * s * s;
        wc += at * v * c;
        ws += at * v * s;
        ww += at * v * v;
    }
    let det = cc * ss - cs * cs;
    let alpha = (wc * ss - ws * cs) / det;
    let gamma = (ws * cc - wc * cs) / det;
    let fit_norm2 = alpha * wc + gamma * ws;
    let mismatch = ((ww - fit_norm2).max(0.0) / ww).sqrt();
    FamilyFit {
        amplitude: alpha.hypot(gamma),
        phase: (-gamma).atan2(alpha),
        mismatch,
    }
}

/// Output of [`rayleigh_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct WirtingerResult {
    /// Smallest constrained discrete eigenvalue.
    pub constant: f64,
    /// Eigenvector, normalized to unit discrete mass norm.
    pub minimizer: PeriodicFunction,
    pub amplitude: f64,
    pub phase: f64,
    /// Relative distance of the eigenvector from the closed-form family.
    pub mismatch: f64,
    pub iterations: usize,
}

/// Periodic symmetric tridiagonal matrix; `off[i]` couples `i` and `i+1 mod n`.
#[derive(Debug, Clone)]
struct CyclicTridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl CyclicTridiag {
    fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            off: vec![0.0; n],
        }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            out[i] = self.diag[i] * x[i] + self.off[i] * x[next] + self.off[prev] * x[prev];
        }
    }

    fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut tmp = vec![0.0; x.len()];
        self.apply(x, &mut tmp);
        tmp.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Solves `self · x = rhs` with `x[0] = 0` pinned, by the Thomas algorithm on
    /// rows `1..n`. Valid when the matrix is singular with constant kernel and
    /// `rhs` sums to zero.
    fn solve_pinned(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = rhs.len();
        let m = n - 1;
        // rows 1..n: sub = off[i-1], diag = diag[i], sup = off[i]
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        for r in 0..m {
            let i = r + 1;
            let sub = if r > 0 { self.off[i - 1] } else { 0.0 };
            let sup = if r + 1 < m { self.off[i] } else { 0.0 };
            let denom = self.diag[i] - sub * if r > 0 { c[r - 1] } else { 0.0 };
            if denom.abs() < f64::MIN_POSITIVE || !denom.is_finite() {
                return Err(Error::SingularSystem);
            }
            c[r] = sup / denom;
            d[r] = (rhs[i] - sub * if r > 0 { d[r - 1] } else { 0.0 }) / denom;
        }
        let mut x = vec![0.0; n];
        for r in (0..m).rev() {
            let next = if r + 1 < m { x[r + 2] } else { 0.0 };
            x[r + 1] = d[r] - c[r] * next;
        }
        Ok(x)
    }
}

/// Periodic piecewise-linear element forms for a weight `a`.
struct LinearElements {
    stiffness: CyclicTridiag,
    mass: CyclicTridiag,
    /// `∫ a φ_i`, i.e. the row sums of the mass matrix.
    load: Vec<f64>,
}

impl LinearElements {
    /// Element integrals are split at the jumps of `a` and evaluated with
    /// 4-point Gauss rules, exact for piecewise-constant weights.
    fn assemble(a: &AngularProfile, n: usize) -> Self {
        let h = TAU / n as f64;
        let breaks = a.breakpoints();
        let (gx, gw) = gauss_legendre(4);
        let mut stiffness = CyclicTridiag::zeros(n);
        let mut mass = CyclicTridiag::zeros(n);
        let mut local_breaks = Vec::new();
        for e in 0..n {
            let t0 = e as f64 * h;
            local_breaks.clear();
            local_breaks.push(0.0);
            for &b in &breaks {
                let s = (b - t0) / h;
                if s > 1e-12 && s < 1.0 - 1e-12 {
                    local_breaks.push(s);
                }
            }
            local_breaks.push(1.0);
            local_breaks.sort_by(f64::total_cmp);
            let (mut inv_a, mut m_ll, mut m_lr, mut m_rr) = (0.0, 0.0, 0.0, 0.0);
            for pair in local_breaks.windows(2) {
                let (s0, s1) = (pair[0], pair[1]);
                let half = 0.5 * (s1 - s0);
                for (x, w) in gx.iter().zip(&gw) {
                    let s = s0 + half * (1.0 + x);
                    let q = half * w;
                    let at = a.eval(t0 + s * h);
                    inv_a += q / at;
                    m_ll += q * at * (1.0 - s) * (1.0 - s);
                    m_lr += q * at * (1.0 - s) * s;
                    m_rr += q * at * s * s;
                }
            }
            let next = (e + 1) % n;
            stiffness.diag[e] += inv_a / h;
            stiffness.diag[next] += inv_a / h;
            stiffness.off[e] -= inv_a / h;
            mass.diag[e] += h * m_ll;
            mass.diag[next] += h * m_rr;
            mass.off[e] += h * m_lr;
        }
        let mut load = vec![0.0; n];
        mass.apply(&vec![1.0; n], &mut load);
        Self {
            stiffness,
            mass,
            load,
        }
    }

    fn project(&self, x: &mut [f64]) {
        let total: f64 = self.load.iter().sum();
        let kappa = self
            .load
            .iter()
            .zip(x.iter())
            .map(|(b, v)| b * v)
            .sum::<f64>()
            / total;
        x.iter_mut().for_each(|v| *v -= kappa);
    }
}

/// Smallest eigenpair of `∫(1/a) w' v' = λ ∫ a w v` on `∫ a w = 0`, with
/// piecewise-linear periodic elements on `n` nodes.
///
/// Shifted (shift 0) inverse iteration on a two-dimensional block with
/// Rayleigh–Ritz, since the continuous eigenvalue is double (cosine and sine
/// branches of the equality family). Iterates are deflated against the
/// weighted constants after every solve.
pub fn rayleigh_minimize(a: &AngularProfile, n: usize) -> Result<WirtingerResult> {
    check_resolution(n, 64)?;
    let el = LinearElements::assemble(a, n);
    let mut x1: Vec<f64> = (0..n)
        .map(|i| node(n, i).cos() + 0.1 * (2.0 * node(n, i)).sin())
        .collect();
    let mut x2: Vec<f64> = (0..n)
        .map(|i| node(n, i).sin() + 0.1 * (3.0 * node(n, i)).cos())
        .collect();
    let mut tmp = vec![0.0; n];
    let mut prev = f64::INFINITY;
    for it in 1..=MAX_EIGEN_ITERATIONS {
        let mut ys = Vec::with_capacity(2);
        for x in [&x1, &x2] {
            el.project_into(x, &mut tmp);
            let mut y = el.stiffness.solve_pinned(&tmp)?;
            el.project(&mut y);
            ys.push(y);
        }
        let (y1, y2) = (ys.swap_remove(0), ys.swap_remove(0));
        let (u1, u2) = m_orthonormalize(&el.mass, y1, y2)?;
        let k11 = el.stiffness.form(&u1, &u1);
        let k12 = el.stiffness.form(&u1, &u2);
        let k22 = el.stiffness.form(&u2, &u2);
        // symmetric 2x2 eigenproblem by a Jacobi rotation
        let phi = 0.5 * (2.0 * k12).atan2(k22 - k11);
        let (s, c) = phi.sin_cos();
        let mu_a = c * c * k11 - 2.0 * s * c * k12 + s * s * k22;
        let mu_b = s * s * k11 + 2.0 * s * c * k12 + c * c * k22;
        let va: Vec<f64> = u1.iter().zip(&u2).map(|(p, q)| c * p - s * q).collect();
        let vb: Vec<f64> = u1.iter().zip(&u2).map(|(p, q)| s * p + c * q).collect();
        let (mu, v_min, v_other) = if mu_a <= mu_b {
            (mu_a, va, vb)
        } else {
            (mu_b, vb, va)
        };
        if !mu.is_finite() {
            return Err(Error::EigenIterationDiverged { iterations: it });
        }
        x1 = v_min;
        x2 = v_other;
        if (mu - prev).abs() <= EIGEN_STAGNATION_TOL * mu.abs() {
            let minimizer = PeriodicFunction::from_nodal(x1)?;
            let fit = fit_to_family(a, &minimizer);
            return Ok(WirtingerResult {
                constant: mu,
                minimizer,
                amplitude: fit.amplitude,
                phase: fit.phase,
                mismatch: fit.mismatch,
                iterations: it,
            });
        }
        prev = mu;
    }
    Err(Error::EigenIterationDiverged {
        iterations: MAX_EIGEN_ITERATIONS,
    })
}

impl LinearElements {
    /// `out = M x` with `x` first deflated, so that `1ᵀ out = 0`.
    fn project_into(&self, x: &[f64], out: &mut [f64]) {
        let mut xp = x.to_vec();
        self.project(&mut xp);
        self.mass.apply(&xp, out);
    }
}

fn m_orthonormalize(
    mass: &CyclicTridiag,
    mut y1: Vec<f64>,
    mut y2: Vec<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n1 = mass.form(&y1, &y1).sqrt();
    if !(n1 > 0.0 && n1.is_finite()) {
        return Err(Error::SingularSystem);
    }
    y1.iter_mut().for_each(|v| *v /= n1);
    let p = mass.form(&y1, &y2);
    y2.iter_mut().zip(&y1).for_each(|(v, u)| *v -= p * u);
    let n2 = mass.form(&y2, &y2).sqrt();
    if !(n2 > 0.0 && n2.is_finite()) {
        return Err(Error::SingularSystem);
    }
    y2.iter_mut().for_each(|v| *v /= n2);
    Ok((y1, y2))
}
