//! Command-line laboratory for Finsler holonomy experiments.
//!
//! Subcommands wire the library into named experiments and emit JSON
//! reports (plus CSV series where there is something to plot). Exit code 0
//! means every check the command ran has passed.

mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use finsler_holonomy::circle::{bracket_closure, standard_generators, verify_theorem};
use finsler_holonomy::metrics::FinslerMetric;
use finsler_holonomy::ode::OdeSettings;
use finsler_holonomy::sample;
use finsler_holonomy::spray::{flag_curvature_extract, fundamental_tensor, SprayPath};
use finsler_holonomy::suite::{run_all, SuiteConfig};
use finsler_holonomy::transport::{
    loop_holonomy, parallel_transport, small_loop_field, LoopCurve, Segment,
};
use report::Report;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "finsler-lab",
    about = "Numerical experiments on Finsler 2-manifold holonomy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Metric selection: funk:+, funk:-, bryant:<alpha-radians>, euclid
    #[arg(long, global = true, default_value = "funk:+")]
    metric: String,
    /// Absolute/relative ODE solver tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_ode: f64,
    /// Tolerance for the command's pass/fail checks
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_check: f64,
    /// Seed for sampled-point checks
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Indicatrix/holonomy grid size (power of two, ≥ 16)
    #[arg(long, global = true, default_value_t = 256)]
    grid: usize,
    /// Fourier truncation order
    #[arg(long, global = true, default_value_t = 16)]
    nmax: usize,
    /// Directory for JSON/CSV report files
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the full JSON report to stdout
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F, P and the fundamental tensor at one point
    MetricInfo {
        #[command(flatten)]
        common: CommonOpts,
        /// Base point x1,x2
        #[arg(long, default_value = "0,0")]
        at: String,
        /// Fiber direction y1,y2
        #[arg(long, default_value = "1,0")]
        dir: String,
    },
    /// Extract the flag curvature at seeded random points
    Curvature {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of sample points
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Parallel transport along a curve
    Transport {
        #[command(flatten)]
        common: CommonOpts,
        /// Curve spec: polyline:x1,y1;x2,y2;... (open) or square:bx,by,s
        #[arg(long)]
        curve: String,
        /// Transported start vector y1,y2
        #[arg(long, default_value = "1,0")]
        dir: String,
    },
    /// Holonomy of a closed loop as a circle map
    Loop {
        #[command(flatten)]
        common: CommonOpts,
        /// Loop spec: square:bx,by,s or polyline:x1,y1;... (closed)
        #[arg(long = "loop")]
        loop_spec: String,
    },
    /// Generator fields and their comparison against the closed forms
    Algebra {
        #[command(flatten)]
        common: CommonOpts,
        /// Base point x1,x2
        #[arg(long, default_value = "0,0")]
        at: String,
    },
    /// Bracket closure of the five-element generator system
    Closure {
        #[command(flatten)]
        common: CommonOpts,
        /// Maximum bracket depth
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Run the full verification suite
    Verify {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_pair(s: &str, what: &str) -> Result<[f64; 2]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("parsing {what} `{s}`"))?;
    if parts.len() != 2 {
        bail!("{what} `{s}` must have exactly two comma-separated numbers");
    }
    Ok([parts[0], parts[1]])
}

/// Path spec for open transport: polylines stay open, squares close.
fn parse_path(spec: &str) -> Result<Vec<Segment>> {
    if let Some(rest) = spec.strip_prefix("polyline:") {
        let pts: Vec<[f64; 2]> = rest
            .split(';')
            .map(|p| parse_pair(p, "polyline point"))
            .collect::<Result<_>>()?;
        if pts.len() < 2 {
            bail!("polyline needs at least two points");
        }
        Ok(pts
            .windows(2)
            .map(|w| Segment::Line {
                from: w[0],
                to: w[1],
            })
            .collect())
    } else {
        Ok(LoopCurve::parse(spec)?.segments().to_vec())
    }
}

fn validate(common: &CommonOpts) -> Result<()> {
    if common.tol_ode <= 0.0 || common.tol_check <= 0.0 {
        bail!("tolerances must be positive");
    }
    if !common.grid.is_power_of_two() || common.grid < 16 {
        bail!("grid must be a power of two, at least 16");
    }
    if common.nmax < 2 {
        bail!("nmax must be at least 2");
    }
    Ok(())
}

fn ode_settings(common: &CommonOpts) -> OdeSettings {
    OdeSettings {
        rtol: common.tol_ode,
        atol: common.tol_ode,
        ..OdeSettings::default()
    }
}

fn config_echo(common: &CommonOpts) -> serde_json::Value {
    json!({
        "metric": common.metric,
        "tol_ode": common.tol_ode,
        "tol_check": common.tol_check,
        "seed": common.seed,
        "grid": common.grid,
        "nmax": common.nmax,
    })
}

fn cmd_metric_info(
    common: &CommonOpts,
    at: &str,
    dir: &str,
) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let x = parse_pair(at, "base point")?;
    let y = parse_pair(dir, "direction")?;
    let f = metric.norm(x, y)?;
    let p = metric.projective_factor(x, y)?;
    let g = fundamental_tensor(&metric, x, y)?;
    let f2 = metric.norm(x, [2.0 * y[0], 2.0 * y[1]])?;
    let homogeneity_error = (f2 - 2.0 * f).abs() / (2.0 * f);
    let pass = homogeneity_error <= common.tol_check;
    let results = json!({
        "F": f,
        "P": p,
        "g": g,
        "homogeneity_error": homogeneity_error,
        "known_flag_curvature": metric.known_flag_curvature(),
    });
    let mut config = config_echo(common);
    config["at"] = json!(x);
    config["dir"] = json!(y);
    let summary =
        format!("F = {f:.10}, P = {p:.10}, |g| spot-checked, homogeneity {homogeneity_error:.2e}");
    Ok((
        Report::new("metric-info", config, results, pass, summary),
        None,
    ))
}

fn cmd_curvature(common: &CommonOpts, count: usize) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let known = metric
        .known_flag_curvature()
        .ok_or_else(|| anyhow!("metric has no pinned flag curvature"))?;
    let mut rng = sample::rng(common.seed);
    let mut rows = Vec::new();
    let mut lam_min = f64::INFINITY;
    let mut lam_max = f64::NEG_INFINITY;
    let mut lam_sum = 0.0;
    let mut worst_residual = 0.0f64;
    let mut worst_dev = 0.0f64;
    for _ in 0..count {
        let x = sample::interior_point(&mut rng, 0.8);
        let y = sample::fiber_vector(&mut rng, 0.5, 2.0);
        let fit = flag_curvature_extract(&metric, x, y, SprayPath::Generic)?;
        lam_min = lam_min.min(fit.lambda_hat);
        lam_max = lam_max.max(fit.lambda_hat);
        lam_sum += fit.lambda_hat;
        worst_residual = worst_residual.max(fit.residual);
        worst_dev = worst_dev.max((fit.lambda_hat - known).abs());
        rows.push(json!({
            "x": x, "y": y,
            "lambda_hat": fit.lambda_hat,
            "residual": fit.residual,
        }));
    }
    let mean = lam_sum / count as f64;
    let pass = worst_dev <= common.tol_check && worst_residual <= common.tol_check;
    let results = json!({
        "known": known,
        "mean": mean,
        "min": lam_min,
        "max": lam_max,
        "max_deviation": worst_dev,
        "max_residual": worst_residual,
        "points": rows,
    });
    let mut config = config_echo(common);
    config["count"] = json!(count);
    let summary = format!(
        "λ̂ mean = {mean:.8} (known {known}), max deviation {worst_dev:.2e}, max residual {worst_residual:.2e}"
    );
    Ok((
        Report::new("curvature", config, results, pass, summary),
        None,
    ))
}

fn cmd_transport(
    common: &CommonOpts,
    curve: &str,
    dir: &str,
) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let y0 = parse_pair(dir, "direction")?;
    let path = parse_path(curve)?;
    let out = parallel_transport(&metric, &path, y0, &ode_settings(common))?;
    let start = path.first().map(|s| s.start()).unwrap_or([0.0, 0.0]);
    let f0 = metric.norm(start, y0)?;
    // drift stays within the check tolerance, floored above solver accuracy
    let drift_budget = common.tol_check.max(100.0 * common.tol_ode);
    let pass = out.norm_drift <= drift_budget;
    let results = json!({
        "vector": out.vector,
        "norm_start": f0,
        "norm_drift": out.norm_drift,
        "steps": out.steps,
        "rejected_steps": out.rejected,
    });
    let mut config = config_echo(common);
    config["curve"] = json!(curve);
    config["dir"] = json!(y0);
    // curve samples for plotting, t normalized over the whole chain
    let nseg = path.len();
    let mut rows = vec![];
    for (si, seg) in path.iter().enumerate() {
        for k in 0..100 {
            let t_local = k as f64 / 100.0;
            let p = seg.point(t_local);
            let t = (si as f64 + t_local) / nseg as f64;
            rows.push(format!("{t:.6},{:.12},{:.12}", p[0], p[1]));
        }
    }
    if let Some(seg) = path.last() {
        let p = seg.point(1.0);
        rows.push(format!("1.000000,{:.12},{:.12}", p[0], p[1]));
    }
    let summary = format!(
        "X(1) = ({:.10}, {:.10}), norm drift {:.2e} over {} steps",
        out.vector[0], out.vector[1], out.norm_drift, out.steps
    );
    Ok((
        Report::new("transport", config, results, pass, summary),
        Some(rows),
    ))
}

fn cmd_loop(common: &CommonOpts, loop_spec: &str) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let curve = LoopCurve::parse(loop_spec)?;
    let settings = ode_settings(common);
    let map = loop_holonomy(&metric, &curve, common.grid, &settings)?;
    let disp = map.displacement();
    let rows: Vec<String> = disp
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let t = std::f64::consts::TAU * i as f64 / disp.len() as f64;
            format!("{t:.10},{d:.12}")
        })
        .collect();
    let max_disp = map.max_displacement();
    let mut results = json!({
        "grid": common.grid,
        "max_displacement": max_disp,
    });
    let mut pass = true;
    let mut summary = format!(
        "holonomy map on {} points, max |φ(t) − t| = {max_disp:.3e}",
        common.grid
    );
    // for square loops, add the shrinking-loop extrapolation
    if let Some(rest) = loop_spec.strip_prefix("square:") {
        let nums: Vec<f64> = rest
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .context("parsing square spec")?;
        let (base, s) = ([nums[0], nums[1]], nums[2]);
        let sides = [s, 0.5 * s, 0.25 * s];
        let small = small_loop_field(
            &metric,
            base,
            &sides,
            common.grid,
            common.nmax.min(8),
            &settings,
        )?;
        pass &= small.converged;
        results["small_loop"] = json!({
            "sides": sides,
            "field": small.field,
            "constant_part": small.field.a0(),
            "observed_order": small.observed_order,
            "converged": small.converged,
        });
        summary.push_str(&format!(
            "; extrapolated field constant = {:.6} (order {:.2})",
            small.field.a0(),
            small.observed_order
        ));
    }
    let mut config = config_echo(common);
    config["loop"] = json!(loop_spec);
    Ok((
        Report::new("loop", config, results, pass, summary),
        Some(rows),
    ))
}

fn cmd_algebra(common: &CommonOpts, at: &str) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let x0 = parse_pair(at, "base point")?;
    let report = verify_theorem(&metric, x0, common.grid, common.nmax, common.tol_check)?;
    let pass = report.pass;
    let summary =
        if !report.hypotheses_met {
            format!(
            "theorem hypotheses not met at ({}, {}): condition A {}, condition B {} (c = {:.3e})",
            x0[0],
            x0[1],
            if report.condition_a.holds { "holds" } else { "fails" },
            if report.condition_b.holds { "holds" } else { "fails" },
            report.condition_b.c
        )
        } else {
            let worst = report
                .entries
                .iter()
                .map(|e| e.sup_error)
                .fold(0.0, f64::max);
            format!(
                "c = {:.10}, λ = {}, six fields via {} route, max sup error {worst:.2e}",
                report.c, report.lambda, report.route
            )
        };
    let mut config = config_echo(common);
    config["at"] = json!(x0);
    let results = serde_json::to_value(&report)?;
    Ok((Report::new("algebra", config, results, pass, summary), None))
}

fn cmd_closure(common: &CommonOpts, depth: usize) -> Result<(Report, Option<Vec<String>>)> {
    let nmax = common.nmax;
    let report = bracket_closure(&standard_generators(nmax), nmax, depth);
    let expected = 2 * nmax + 1;
    let pass = report.stable && report.final_dimension == expected;
    let results = json!({
        "nmax": nmax,
        "expected_dimension": expected,
        "final_dimension": report.final_dimension,
        "dimension_trace": report.dimension_trace,
        "stable": report.stable,
    });
    let mut config = config_echo(common);
    config["depth"] = json!(depth);
    let summary = format!(
        "dimension trace {:?} → {} (expected {expected})",
        report.dimension_trace, report.final_dimension
    );
    Ok((Report::new("closure", config, results, pass, summary), None))
}

/// Agreement between the derivative towers and the finite-difference oracle
/// for first-order norm partials at seeded points.
fn fd_oracle_check(metric: &FinslerMetric, seed: u64) -> Result<f64> {
    use finsler_holonomy::jet::{fd_check, lift, DerivativeRequest, Jet};
    let mut rng = sample::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = sample::interior_point(&mut rng, 0.7);
        let y = sample::fiber_vector(&mut rng, 0.5, 1.5);
        let point = [x[0], x[1], y[0], y[1]];
        let jet = lift(
            |s: &[Jet]| {
                metric.norm_jet(&[s[0].clone(), s[1].clone()], &[s[2].clone(), s[3].clone()])
            },
            &point,
            DerivativeRequest::new(4, 1),
        )?;
        let f = |p: &[f64]| metric.norm([p[0], p[1]], [p[2], p[3]]).unwrap();
        for alpha in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] {
            let fd = fd_check(f, &point, &alpha, 1e-4);
            let ad = jet.partial(&alpha);
            worst = worst.max((ad - fd).abs() / ad.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn cmd_verify(common: &CommonOpts) -> Result<(Report, Option<Vec<String>>)> {
    let metric = FinslerMetric::parse(&common.metric)?;
    let fd_dev = if matches!(
        metric.kind(),
        finsler_holonomy::metrics::MetricKind::BryantShen { .. }
    ) {
        None // no base-point sampling available off the origin
    } else {
        let dev = fd_oracle_check(&metric, common.seed)?;
        println!(
            "[{}] fd oracle {:<31} max relative tower-vs-difference deviation {dev:.2e}",
            if dev <= 1e-5 { "PASS" } else { "FAIL" },
            "first-order partials",
        );
        Some(dev)
    };
    let theorem = verify_theorem(
        &metric,
        [0.0, 0.0],
        common.grid.min(64),
        common.nmax,
        common.tol_check,
    )?;
    println!(
        "[{}] theorem check {:<28} metric {}, c = {:.6}, λ = {}",
        if theorem.pass { "PASS" } else { "FAIL" },
        theorem.route,
        theorem.metric,
        theorem.c,
        theorem.lambda
    );
    let cfg = SuiteConfig {
        seed: common.seed,
        ode: ode_settings(common),
        grid: common.grid.min(64),
        nmax: common.nmax,
    };
    let outcomes = run_all(&cfg);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let pass = theorem.pass && outcomes.iter().all(|o| o.pass) && fd_dev.is_none_or(|d| d <= 1e-5);
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| o.name)
        .collect();
    let results = json!({
        "fd_oracle_max_relative_deviation": fd_dev,
        "theorem": theorem,
        "criteria": outcomes,
    });
    let summary = if pass {
        "fd oracle, theorem check and all 11 criteria pass".to_string()
    } else {
        format!("failures: {failed:?}")
    };
    Ok((
        Report::new("verify", config_echo(common), results, pass, summary),
        None,
    ))
}

fn run(cli: Cli) -> Result<i32> {
    let started = std::time::Instant::now();
    let (common, built): (&CommonOpts, (Report, Option<Vec<String>>)) = match &cli.command {
        Command::MetricInfo { common, at, dir } => {
            validate(common)?;
            (common, cmd_metric_info(common, at, dir)?)
        }
        Command::Curvature { common, count } => {
            validate(common)?;
            (common, cmd_curvature(common, *count)?)
        }
        Command::Transport { common, curve, dir } => {
            validate(common)?;
            (common, cmd_transport(common, curve, dir)?)
        }
        Command::Loop { common, loop_spec } => {
            validate(common)?;
            (common, cmd_loop(common, loop_spec)?)
        }
        Command::Algebra { common, at } => {
            validate(common)?;
            (common, cmd_algebra(common, at)?)
        }
        Command::Closure { common, depth } => {
            validate(common)?;
            (common, cmd_closure(common, *depth)?)
        }
        Command::Verify { common } => {
            validate(common)?;
            (common, cmd_verify(common)?)
        }
    };
    let (rep, csv_rows) = built;
    if let Some(out) = &common.out {
        let csv = csv_rows.as_deref().map(|rows| {
            let header = match rep.command.as_str() {
                "transport" => "t,x1,x2",
                "loop" => "t,displacement",
                _ => "t,value",
            };
            (header, rows)
        });
        report::write_outputs(&rep, out, csv)?;
    }
    let code = report::emit(&rep, common.json)?;
    eprintln!("completed in {:.2}s", started.elapsed().as_secs_f64());
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
