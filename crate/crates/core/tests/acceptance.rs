//! Acceptance suite: nine end-to-end criteria, each printed as one PASS/FAIL
//! line with the measured quantities and wall time. Exits nonzero if any
//! criterion fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use holder2d::alpha::{alpha_bar_estimate, alpha_estimate, circle_average, scan, Grids};
use holder2d::coeff::GridField;
use holder2d::fem::{build_mesh, build_mesh_with, solve_dirichlet, MeshOptions};
use holder2d::geometry::Rotation;
use holder2d::holder::{energy_profile, fit_exponent, monotonicity_check, EnergySource};
use holder2d::sharp::{weak_residual, SharpExample};
use holder2d::solution::HarmonicTwoTheta;
use holder2d::wirtinger::{
    check_inequality, minimizer, project_constraint, quotient, rayleigh_minimize,
    wirtinger_constant, PeriodicFunction,
};
use holder2d::{AngularProfile, CoefficientField, DiskDomain, Point2, SymMatrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_fourier(rng: &mut ChaCha8Rng, mean: f64, spread: f64, degree: usize) -> AngularProfile {
    // coefficients share a total budget `spread`, so k stays within mean ± spread
    let mut weights: Vec<f64> = (0..2 * degree)
        .map(|_| rng.random_range(0.0..1.0))
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= spread / total);
    let sign = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let cos = (0..degree).map(|i| sign(rng) * weights[i]).collect();
    let sin = (0..degree)
        .map(|i| sign(rng) * weights[degree + i])
        .collect();
    AngularProfile::fourier(mean, cos, sin).unwrap()
}

fn random_piecewise(rng: &mut ChaCha8Rng) -> AngularProfile {
    let m = rng.random_range(2..=8);
    AngularProfile::piecewise((0..m).map(|_| rng.random_range(0.5..4.0)).collect()).unwrap()
}

fn random_profile(rng: &mut ChaCha8Rng, smooth: bool) -> AngularProfile {
    if smooth {
        let mean = rng.random_range(1.0..4.0);
        let degree = rng.random_range(1..=3);
        let spread = rng.random_range(0.1..0.7) * mean;
        random_fourier(rng, mean, spread, degree)
    } else {
        random_piecewise(rng)
    }
}

/// Oracle for `sup_θ f(k(θ))`: dense sampling followed by golden-section refinement.
fn dense_sup(k: &AngularProfile, f: impl Fn(f64) -> f64) -> f64 {
    let n = 20_000;
    let g = |t: f64| f(k.eval(t));
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        if g(t) > best {
            best = g(t);
            best_t = t;
        }
    }
    if k.is_piecewise() {
        return best;
    }
    let (mut a, mut b) = (best_t - TAU / n as f64, best_t + TAU / n as f64);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(g(0.5 * (a + b)))
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_smooth, mut worst_rough) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let smooth = i % 2 == 0;
        let a = random_profile(&mut rng, smooth);
        let exact = wirtinger_constant(&a);
        let discrete = match rayleigh_minimize(&a, 1024) {
            Ok(r) => r.constant,
            Err(e) => return outcome(false, format!("profile {i}: {e}")),
        };
        let rel = (discrete - exact).abs() / exact;
        if smooth {
            worst_smooth = worst_smooth.max(rel);
        } else {
            worst_rough = worst_rough.max(rel);
        }
    }
    outcome(
        worst_smooth <= 1e-4 && worst_rough <= 1e-3,
        format!("50 profiles at n=1024: max rel err smooth {worst_smooth:.2e} (<= 1e-4), piecewise {worst_rough:.2e} (<= 1e-3)"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_equality = 0.0f64;
    for _ in 0..10 {
        let a = random_profile(&mut rng, true);
        let w = minimizer(
            &a,
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..TAU),
            1024,
        )
        .unwrap();
        match check_inequality(&a, &w) {
            Ok(s) => worst_equality = worst_equality.max(s.abs()),
            Err(e) => return outcome(false, format!("minimizer rejected: {e}")),
        }
    }
    let (mut min_slack, mut min_gap) = (f64::INFINITY, f64::INFINITY);
    for trial in 0..1000 {
        let a = random_profile(&mut rng, trial % 2 == 0);
        let degree = rng.random_range(1..=8);
        let cos = (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sin = (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let trig =
            PeriodicFunction::trigonometric(rng.random_range(-1.0..1.0), cos, sin, 1024).unwrap();
        let w = if trial % 5 == 0 {
            // near-equality trials: a minimizer plus a small perturbation, sampled on nodes
            let eps = 10f64.powf(rng.random_range(-4.0..-1.0));
            let base = minimizer(&a, 1.0, rng.random_range(0.0..TAU), 1024).unwrap();
            let values = base
                .values()
                .iter()
                .zip(trig.values())
                .map(|(b, t)| b + eps * t)
                .collect();
            project_constraint(&a, &PeriodicFunction::from_nodal(values).unwrap())
        } else {
            project_constraint(&a, &trig)
        };
        match check_inequality(&a, &w) {
            Ok(s) => min_slack = min_slack.min(s),
            Err(e) => return outcome(false, format!("trial {trial}: {e}")),
        }
        min_gap = min_gap.min(quotient(&a, &w) - wirtinger_constant(&a));
    }
    outcome(
        worst_equality <= 1e-10 && min_slack >= -1e-8 && min_gap >= -1e-8,
        format!(
            "minimizer |slack| {worst_equality:.2e} (<= 1e-10); 1000 trials: min slack {min_slack:.2e}, min quotient - constant {min_gap:.2e} (>= -1e-8)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let field = CoefficientField::identity(DiskDomain::unit());
    let grids = Grids::default();
    let (a, b) = (
        alpha_estimate(&field, &grids),
        alpha_bar_estimate(&field, &grids),
    );
    match (a, b) {
        (Ok(a), Ok(b)) => outcome(
            a == 1.0 && b == 1.0,
            format!("alpha = {a:?}, alpha_bar = {b:?} (exactly 1)"),
        ),
        (a, b) => outcome(false, format!("{a:?} {b:?}")),
    }
}

/// Grids fine enough that the first circle at an off-center point sees
/// nearly the frozen matrix there, and that grid directions approach every
/// angle.
fn fine_grids() -> Grids {
    Grids::new(64, 400, 128).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let grids = fine_grids();
    let m = 10.0;
    let mut worst_m = 0.0f64;
    for _ in 0..10 {
        // M ≤ k ≤ 3M/2: mean 5M/4 with total Fourier amplitude at most M/4
        let degree = rng.random_range(1..=3);
        let spread = rng.random_range(0.2..1.0) * 0.25 * m;
        let k = random_fourier(&mut rng, 1.25 * m, spread, degree);
        assert!(k.k_min() >= m && k.k_max() <= 1.5 * m);
        let field = CoefficientField::angular(k.clone(), Point2::ORIGIN, DiskDomain::unit());
        let ab = alpha_bar_estimate(&field, &grids).unwrap();
        let expected = TAU / k.integral();
        worst_m = worst_m.max((ab - expected).abs() / expected);
    }
    let mut worst_v = 0.0f64;
    let mut violating = 0;
    while violating < 10 {
        let mean = rng.random_range(1.2..3.0);
        let (spread, degree) = (rng.random_range(0.6..0.9) * mean, rng.random_range(1..=2));
        let k = random_fourier(&mut rng, mean, spread, degree);
        let half_sum = dense_sup(&k, |v| 0.5 * (v + 1.0 / v));
        // the M-condition mean(k) ≥ sup ½(k + 1/k) is checked, not assumed
        if k.mean() >= half_sum {
            continue;
        }
        violating += 1;
        let field = CoefficientField::angular(k.clone(), Point2::ORIGIN, DiskDomain::unit());
        let inv = 1.0 / alpha_bar_estimate(&field, &grids).unwrap();
        let expected = k.mean().max(half_sum);
        worst_v = worst_v.max((inv - expected).abs() / expected);
    }
    outcome(
        worst_m <= 5e-3 && worst_v <= 5e-3,
        format!("M=10 profiles: max rel err of alpha_bar vs 2pi/int k {worst_m:.2e}; violating profiles: max rel err of 1/alpha_bar vs max formula {worst_v:.2e} (<= 5e-3)"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut spread = 0.0f64;
    for i in 0..10 {
        let k = random_profile(&mut rng, i % 2 == 0);
        let field = CoefficientField::angular(k, Point2::ORIGIN, DiskDomain::unit());
        let avgs: Vec<f64> = [1e-4, 1e-3, 0.01, 0.1, 0.5, 0.99]
            .iter()
            .map(|&r| circle_average(&field, Point2::ORIGIN, r, 256).unwrap())
            .collect();
        let (lo, hi) = avgs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
                (l.min(v), h.max(v))
            });
        spread = spread.max(hi - lo);
    }
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let k = random_profile(&mut rng, true);
        let field = CoefficientField::angular(k.clone(), Point2::ORIGIN, DiskDomain::unit());
        for _ in 0..5 {
            let x0 = Point2::polar(
                Point2::ORIGIN,
                rng.random_range(0.1..0.9),
                rng.random_range(0.0..TAU),
            );
            let kt = k.eval(x0.arg());
            let limit = 0.5 * (kt + 1.0 / kt);
            let avg = circle_average(&field, x0, 1e-3, 256).unwrap();
            worst = worst.max((avg - limit).abs() / limit);
        }
    }
    outcome(
        spread <= 1e-10 && worst <= 0.01,
        format!("center-0 spread across r {spread:.2e} (<= 1e-10); off-center r=1e-3 vs (k+1/k)/2 max rel err {worst:.2e} (<= 1e-2)"),
    )
}

/// Smooth profile with mean 2.5, so `ᾱ = 0.4`.
fn sharp_profile() -> AngularProfile {
    AngularProfile::fourier(2.5, vec![0.5, 0.1], vec![0.3, -0.15]).unwrap()
}

fn criterion_6() -> Outcome {
    let ex = SharpExample::build(sharp_profile());
    let residual = match weak_residual(&ex.field, &ex, 8) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("weak residual: {e}")),
    };
    let mesh = Arc::new(build_mesh(ex.field.domain, 0.02).unwrap());
    let (u, stats) = match solve_dirichlet(&ex.field, mesh, &ex) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("solve: {e}")),
    };
    let (_, rel_l2) = u.l2_error(&ex);
    let radii: Vec<f64> = (0..=12)
        .map(|i| 0.05 * 6f64.powf(i as f64 / 12.0))
        .collect();
    let trace = energy_profile(&ex.field, EnergySource::Fem(&u), Point2::ORIGIN, &radii).unwrap();
    let fit = fit_exponent(&trace, trace.window(0.05, 0.3)).unwrap();
    let rel_fit = (fit.exponent - ex.alpha_bar).abs() / ex.alpha_bar;
    outcome(
        rel_fit <= 0.05 && rel_l2 <= 0.02 && residual <= 1e-6,
        format!(
            "alpha_bar {:.4}, h=0.02 ({} triangles, {} CG its): fitted exponent {:.4} (rel err {rel_fit:.2e} <= 5e-2), rel L2 {rel_l2:.2e} (<= 2e-2), weak residual {residual:.2e} (<= 1e-6)",
            ex.alpha_bar, stats.n_triangles, stats.iterations, fit.exponent
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let radii: Vec<f64> = (1..=20).map(|i| 0.9 * (i as f64 / 20.0).powi(2)).collect();
    let (mut worst_exact, mut worst_inflated) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut profiles = vec![sharp_profile(), AngularProfile::constant(2.0).unwrap()];
    profiles.extend((0..3).map(|_| random_profile(&mut rng, true)));
    profiles.push(random_profile(&mut rng, false));
    for k in profiles {
        let ex = SharpExample::build(k);
        let trace = energy_profile(
            &ex.field,
            EnergySource::Analytic(&ex),
            Point2::ORIGIN,
            &radii,
        )
        .unwrap();
        worst_exact = worst_exact.min(monotonicity_check(&trace, ex.alpha_bar));
        worst_inflated = worst_inflated.max(monotonicity_check(&trace, ex.alpha_bar + 0.1));
    }
    outcome(
        worst_exact >= -1e-8 && worst_inflated < 0.0,
        format!("min step of G at alpha_bar {worst_exact:.2e} (>= -1e-8); at alpha_bar + 0.1 every trace decreases (max min-step {worst_inflated:.2e} < 0)"),
    )
}

/// Unit-determinant grid field `J(φ) diag(k, 1/k) J(φ)*` with smoothly varying `k`, `φ`.
fn random_grid_field(rng: &mut ChaCha8Rng) -> CoefficientField {
    let domain = DiskDomain::unit();
    let (a, b, c) = (
        rng.random_range(0.1..1.5),
        rng.random_range(0.0..TAU),
        rng.random_range(1.0..4.0),
    );
    let grid = GridField::covering(&domain, 48, |p| {
        let k = 1.0 + a * (1.0 + (c * p.x + b).sin() * (c * p.y).cos());
        SymMatrix2::diag(k, 1.0 / k).rotate(Rotation::new(b + c * p.x * p.y))
    })
    .unwrap();
    CoefficientField::grid(grid, domain)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let grids = Grids::default();
    let (mut worst_ps, mut worst_order) = (f64::INFINITY, f64::INFINITY);
    for i in 0..20 {
        let field = if i % 2 == 0 {
            let center = Point2::polar(
                Point2::ORIGIN,
                rng.random_range(0.0..0.5),
                rng.random_range(0.0..TAU),
            );
            CoefficientField::angular(
                random_profile(&mut rng, i % 4 == 0),
                center,
                DiskDomain::unit(),
            )
        } else {
            random_grid_field(&mut rng)
        };
        let bounds = match field.validate(64) {
            Ok(b) => b,
            Err(e) => return outcome(false, format!("field {i}: {e}")),
        };
        let s = match scan(&field, &grids) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("field {i}: {e}")),
        };
        worst_ps = worst_ps.min(s.alpha() - 1.0 / bounds.upper);
        worst_order = worst_order.min(s.alpha_bar() - s.alpha());
    }
    outcome(
        worst_ps >= -1e-9 && worst_order >= 0.0,
        format!("20 fields: min(alpha - 1/Lambda) {worst_ps:.2e} (>= -1e-9), min(alpha_bar - alpha) {worst_order:.2e} (>= 0)"),
    )
}

fn criterion_9() -> Outcome {
    let field = CoefficientField::identity(DiskDomain::unit());
    let hs = [0.1, 0.05, 0.025];
    let mut errs = Vec::new();
    for &h in &hs {
        let mesh = Arc::new(build_mesh_with(field.domain, h, &MeshOptions::default()).unwrap());
        let (u, _) = solve_dirichlet(&field, mesh, &HarmonicTwoTheta).unwrap();
        errs.push(u.l2_error(&HarmonicTwoTheta).0);
    }
    let rates: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let worst = rates.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        worst >= 1.8,
        format!(
            "L2 errors {:.2e} {:.2e} {:.2e}, rates {:.3} {:.3} (>= 1.8)",
            errs[0], errs[1], errs[2], rates[0], rates[1]
        ),
    )
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "Wirtinger closed form vs discrete oracle",
            budget: Some(Duration::from_secs(10)),
            run: criterion_1,
        },
        Criterion {
            id: 2,
            name: "Wirtinger equality case",
            budget: None,
            run: criterion_2,
        },
        Criterion {
            id: 3,
            name: "exponent formula, identity case",
            budget: Some(Duration::from_secs(1)),
            run: criterion_3,
        },
        Criterion {
            id: 4,
            name: "extremal-field exponent reproduction",
            budget: Some(Duration::from_secs(60)),
            run: criterion_4,
        },
        Criterion {
            id: 5,
            name: "circle-average laws",
            budget: None,
            run: criterion_5,
        },
        Criterion {
            id: 6,
            name: "sharpness end-to-end",
            budget: Some(Duration::from_secs(120)),
            run: criterion_6,
        },
        Criterion {
            id: 7,
            name: "monotonicity mechanism",
            budget: None,
            run: criterion_7,
        },
        Criterion {
            id: 8,
            name: "ordering of bounds",
            budget: None,
            run: criterion_8,
        },
        Criterion {
            id: 9,
            name: "FEM baseline convergence",
            budget: None,
            run: criterion_9,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let pass = result.pass && in_budget;
        if !pass {
            failed += 1;
        }
        let budget = c.budget.map_or(String::new(), |b| {
            format!(" / budget {:.0} s", b.as_secs_f64())
        });
        println!(
            "criterion {} [{}] {}: {} ({:.2} s{budget})",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
