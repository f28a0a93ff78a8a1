use std::f64::consts::TAU;
use std::sync::Arc;

use holder2d::alpha::{alpha_bar_estimate, exponent_report};
use holder2d::coeff::{FieldKind, DET_TOL_EXACT, DET_TOL_GRID};
use holder2d::fem::{
    build_mesh_with, solve_dirichlet, MeshOptions, SolutionField, SolveStats, CG_TOL,
};
use holder2d::holder::{
    center_quotients, energy_profile, fem_monotonicity_tolerance, fit_exponent, monotonicity_check,
    pointwise_holder, EnergySource, EnergyTrace, ANALYTIC_CUTOFF, FEM_MONOTONICITY_TOL,
};
use holder2d::sharp::{weak_residual, SharpExample, RESIDUAL_CUTOFF};
use holder2d::solution::{Affine, HarmonicTwoTheta};
use holder2d::wirtinger::{
    check_inequality, minimizer, quotient, rayleigh_minimize, wirtinger_constant, CONSTRAINT_TOL,
    EIGEN_STAGNATION_TOL, MAX_EIGEN_ITERATIONS,
};
use holder2d::{AngularProfile, CoefficientField, DiskDomain, Point2, ScalarField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{geometric_radii, BoundaryKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::Output;

fn angular_profile(field: &CoefficientField) -> CliResult<AngularProfile> {
    match &field.kind {
        FieldKind::Angular { profile, .. } => Ok(profile.clone()),
        _ => Err(CliError::Validation(holder2d::Error::InvalidArgument(
            "this command needs an angular field (variant \"angular\")".into(),
        ))),
    }
}

fn base_tolerances(field: &CoefficientField) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("det_tolerance".into(), json!(field.det_tolerance()));
    m.insert("det_tolerance_exact".into(), json!(DET_TOL_EXACT));
    m.insert("det_tolerance_grid".into(), json!(DET_TOL_GRID));
    m
}

fn fem_tolerances(m: &mut serde_json::Map<String, Value>) {
    m.insert("cg_relative_residual".into(), json!(CG_TOL));
    m.insert(
        "fem_monotonicity_relative".into(),
        json!(FEM_MONOTONICITY_TOL),
    );
}

/// The mesh follows the jump angles of a piecewise angular field centered
/// at the domain center.
fn mesh_options(field: &CoefficientField) -> MeshOptions {
    let breaks = match field.angular_breaks() {
        Some((pole, breaks)) if pole == field.domain.center => breaks,
        _ => Vec::new(),
    };
    MeshOptions {
        breaks,
        ..Default::default()
    }
}

fn boundary_data(kind: BoundaryKind, field: &CoefficientField) -> CliResult<Box<dyn ScalarField>> {
    Ok(match kind {
        BoundaryKind::ExactSharp => Box::new(SharpExample::build(angular_profile(field)?)),
        BoundaryKind::Coordinate => Box::new(Affine::X1),
        BoundaryKind::HarmonicTwoTheta => Box::new(HarmonicTwoTheta),
    })
}

fn solve(
    field: &CoefficientField,
    h: f64,
    g: &dyn ScalarField,
) -> CliResult<(SolutionField, SolveStats)> {
    let mesh = Arc::new(build_mesh_with(field.domain, h, &mesh_options(field))?);
    Ok(solve_dirichlet(field, mesh, g)?)
}

fn write_mesh(out: &Output, u: &SolutionField) -> CliResult<()> {
    let mesh = u.mesh();
    out.csv(
        "vertices.csv",
        &["x", "y", "boundary", "u"],
        mesh.vertices
            .iter()
            .zip(&mesh.boundary)
            .zip(u.values())
            .map(|((p, &b), &v)| (p.x, p.y, u8::from(b), v)),
    )?;
    out.csv(
        "triangles.csv",
        &["v0", "v1", "v2"],
        mesh.triangles.iter().map(|t| (t[0], t[1], t[2])),
    )
}

fn write_trace(out: &Output, name: &str, trace: &EnergyTrace, alpha: f64) -> CliResult<()> {
    let big_g = trace.normalized(alpha);
    out.csv(
        name,
        &["r", "g", "G"],
        trace
            .radii
            .iter()
            .zip(&trace.energies)
            .zip(&big_g)
            .map(|((&r, &g), &gg)| (r, g, gg)),
    )
}

pub fn alpha(cfg: &RunConfig, out: &Output) -> CliResult<()> {
    let field = cfg.field.build()?;
    let (report, scan) = exponent_report(&field, &cfg.grids, cfg.validate_n)?;
    let rows = scan.samples.iter().flat_map(|s| {
        s.radii
            .iter()
            .zip(&s.averages)
            .map(move |(&r, &a)| (s.center.x, s.center.y, r, a))
    });
    out.csv(
        "samples.csv",
        &["center_x", "center_y", "r", "average"],
        rows,
    )?;
    let tol = base_tolerances(&field);
    out.report(
        "alpha",
        cfg,
        Value::Object(tol),
        serde_json::to_value(&report)?,
    )
}

pub fn wirtinger(cfg: &RunConfig, out: &Output) -> CliResult<()> {
    let field = cfg.field.build()?;
    let a = angular_profile(&field)?;
    let w = &cfg.wirtinger;
    let constant = wirtinger_constant(&a);
    let discrete = rayleigh_minimize(&a, w.n)?;
    let closed = minimizer(&a, w.amplitude, w.phase, w.n)?;
    let slack = check_inequality(&a, &closed)?;
    let rows = (0..w.n).map(|i| {
        let t = closed.theta(i);
        (
            t,
            a.cumulative(t),
            closed.values()[i],
            discrete.minimizer.values()[i],
        )
    });
    out.csv(
        "minimizer.csv",
        &["theta", "Theta", "closed_form", "discrete"],
        rows,
    )?;
    let result = json!({
        "constant": constant,
        "discrete_constant": discrete.constant,
        "relative_difference": (discrete.constant - constant).abs() / constant,
        "iterations": discrete.iterations,
        "discrete_fit": {"amplitude": discrete.amplitude, "phase": discrete.phase, "mismatch": discrete.mismatch},
        "minimizer_quotient": quotient(&a, &closed),
        "minimizer_slack": slack,
    });
    let mut tol = base_tolerances(&field);
    tol.insert("constraint_relative".into(), json!(CONSTRAINT_TOL));
    tol.insert(
        "eigen_stagnation_relative".into(),
        json!(EIGEN_STAGNATION_TOL),
    );
    tol.insert("eigen_max_iterations".into(), json!(MAX_EIGEN_ITERATIONS));
    out.report("wirtinger", cfg, Value::Object(tol), result)
}

pub fn sharp(cfg: &RunConfig, out: &Output) -> CliResult<()> {
    let field = cfg.field.build()?;
    let k = angular_profile(&field)?;
    let s = &cfg.sharp;
    // the example lives on the unit disk about the origin, whatever the configured domain
    let ex = SharpExample::build(k.clone());
    let residual = weak_residual(&ex.field, &ex, s.residual_test_n)?;
    let (u, stats) = solve(&ex.field, cfg.mesh.h, &ex)?;
    let (l2_abs, l2_rel) = u.l2_error(&ex);

    let radii = geometric_radii(s.radii[0], s.radii[1], s.radii_count);
    let analytic = energy_profile(
        &ex.field,
        EnergySource::Analytic(&ex),
        Point2::ORIGIN,
        &radii,
    )?;
    let fem = energy_profile(&ex.field, EnergySource::Fem(&u), Point2::ORIGIN, &radii)?;
    let window = analytic.window(s.window[0], s.window[1]);
    let fit_analytic = fit_exponent(&analytic, window.clone())?;
    let fit_fem = fit_exponent(&fem, window)?;
    let ab = ex.alpha_bar;

    let dyadic: Vec<f64> = (1..=8).map(|i| 0.5f64.powi(i)).collect();
    let quotients = center_quotients(&ex, Point2::ORIGIN, ab, &dyadic, 4096);
    let inflated = center_quotients(&ex, Point2::ORIGIN, ab + 0.05, &dyadic, 4096);

    // ½(k + 1/k) is convex in k, so its sup sits at k_min or k_max
    let half_sum = |v: f64| 0.5 * (v + 1.0 / v);
    let sup_half_sum = half_sum(k.k_min()).max(half_sum(k.k_max()));

    let [n_rho, n_theta] = s.samples;
    let rows = (1..=n_rho).flat_map(|i| {
        let rho = i as f64 / n_rho as f64;
        let (ex, u) = (&ex, &u);
        (0..n_theta).map(move |j| {
            let theta = TAU * j as f64 / n_theta as f64;
            let p = Point2::polar(Point2::ORIGIN, rho, theta);
            (rho, theta, ex.eval_solution(p), u.value(p))
        })
    });
    out.csv("solution.csv", &["rho", "theta", "u", "u_fem"], rows)?;
    write_trace(out, "trace_analytic.csv", &analytic, ab)?;
    write_trace(out, "trace_fem.csv", &fem, ab)?;
    write_mesh(out, &u)?;

    let result = json!({
        "alpha_bar": ab,
        "mean_k": k.mean(),
        "sup_half_sum": sup_half_sum,
        "m_condition_holds": k.mean() >= sup_half_sum,
        "weak_residual": residual,
        "fem": {
            "stats": stats,
            "l2_error": l2_abs,
            "relative_l2_error": l2_rel,
            "galerkin_residual": u.galerkin_residual(),
        },
        "fit_window": s.window,
        "analytic_fit": fit_analytic,
        "analytic_fit_relative_error": (fit_analytic.exponent - ab).abs() / ab,
        "fem_fit": fit_fem,
        "fem_fit_relative_error": (fit_fem.exponent - ab).abs() / ab,
        "monotonicity": {
            "analytic_at_alpha_bar": monotonicity_check(&analytic, ab),
            "analytic_at_alpha_bar_plus_0.1": monotonicity_check(&analytic, ab + 0.1),
            "fem_at_alpha_bar": monotonicity_check(&fem, ab),
            "fem_tolerance": fem_monotonicity_tolerance(&fem),
        },
        "center_quotients": {"radii": dyadic, "at_alpha_bar": quotients, "at_alpha_bar_plus_0.05": inflated},
    });
    let mut tol = base_tolerances(&ex.field);
    fem_tolerances(&mut tol);
    tol.insert("residual_inner_cutoff".into(), json!(RESIDUAL_CUTOFF));
    tol.insert("analytic_inner_cutoff".into(), json!(ANALYTIC_CUTOFF));
    out.report("sharp", cfg, Value::Object(tol), result)
}

pub fn solve_cmd(cfg: &RunConfig, out: &Output) -> CliResult<()> {
    let field = cfg.field.build()?;
    let bounds = field.validate(cfg.validate_n)?;
    let g = boundary_data(cfg.boundary.kind, &field)?;
    let (u, stats) = solve(&field, cfg.mesh.h, g.as_ref())?;
    write_mesh(out, &u)?;
    let (lo, hi) = u.range();
    let (blo, bhi) = u.boundary_range();
    let (l2_abs, l2_rel) = u.l2_error(g.as_ref());
    let result = json!({
        "bounds": bounds,
        "stats": stats,
        "energy": u.energy(),
        "galerkin_residual": u.galerkin_residual(),
        "range": [lo, hi],
        "boundary_range": [blo, bhi],
        "l2_distance_to_boundary_function": l2_abs,
        "relative_l2_distance_to_boundary_function": l2_rel,
    });
    let mut tol = base_tolerances(&field);
    fem_tolerances(&mut tol);
    out.report("solve", cfg, Value::Object(tol), result)
}

pub fn measure(cfg: &RunConfig, out: &Output) -> CliResult<()> {
    let field = cfg.field.build()?;
    field.validate(cfg.validate_n)?;
    let m = &cfg.measure;
    let h = cfg.mesh.h;
    let center = m.center.unwrap_or(field.domain.center);
    let reach = field.domain.dist_to_boundary(center);
    let radii = match &m.radii {
        Some(r) => r.clone(),
        None => geometric_radii(2.5 * h, 0.5 * reach, m.count.unwrap_or(16)),
    };
    let alpha = match m.alpha {
        Some(a) => a,
        None => alpha_bar_estimate(&field, &cfg.grids)?.min(1.0),
    };
    let g = boundary_data(cfg.boundary.kind, &field)?;
    let (u, stats) = solve(&field, h, g.as_ref())?;
    let trace = energy_profile(&field, EnergySource::Fem(&u), center, &radii)?;
    let window = match m.window {
        Some([lo, hi]) => trace.window(lo, hi),
        None => 0..trace.radii.len(),
    };
    let fit = fit_exponent(&trace, window)?;
    let compact = DiskDomain::new(center, m.holder_radius.unwrap_or(0.5 * reach))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seminorm = pointwise_holder(
        &u,
        &compact,
        alpha,
        m.holder_samples.unwrap_or(1000),
        &mut rng,
    )?;
    write_trace(out, "trace.csv", &trace, alpha)?;
    let result = json!({
        "center": center,
        "alpha": alpha,
        "stats": stats,
        "fit": fit,
        "monotonicity": monotonicity_check(&trace, alpha),
        "monotonicity_tolerance": fem_monotonicity_tolerance(&trace),
        "sampled_holder_seminorm": seminorm,
        "holder_compact": {"center": compact.center, "radius": compact.radius},
    });
    let mut tol = base_tolerances(&field);
    fem_tolerances(&mut tol);
    out.report("measure", cfg, Value::Object(tol), result)
}
