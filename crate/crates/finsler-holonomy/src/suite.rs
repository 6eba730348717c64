//! The aggregated verification suite: every acceptance check behind the
//! `verify` command, runnable one criterion at a time.
//!
//! Tolerances are pinned here, next to the checks they gate.

use crate::circle::{
    bracket_closure, exp_flow, lie_bracket, standard_generators, verify_theorem, CircleVectorField,
};
use crate::metrics::FinslerMetric;
use crate::ode::OdeSettings;
use crate::sample;
use crate::spray::{flag_curvature_extract, spray_data, SprayPath};
use crate::transport::{
    geodesic, parallel_transport, small_loop_field, Segment, SQUARE_LOOP_FIELD_SIGN,
};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub ode: OdeSettings,
    /// Indicatrix/holonomy grid size.
    pub grid: usize,
    /// Fourier truncation.
    pub nmax: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            ode: OdeSettings::default(),
            grid: 64,
            nmax: 16,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:02} {:<28} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub const CRITERION_NAMES: [&str; 11] = [
    "funk-constant-curvature",
    "projective-flatness",
    "norm-preservation",
    "generator-closed-forms",
    "generator-spanning",
    "bracket-closure-dimension",
    "small-loop-limit",
    "flow-correctness",
    "algebra-identities",
    "bryant-shen-hypotheses",
    "dual-path-spray",
];

fn outcome(id: usize, pass: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name: CRITERION_NAMES[id - 1],
        pass,
        detail,
    }
}

/// 1. Flag curvature of the Funk metric: λ̂ = −¼ within 1e-6 at 20 seeded
/// interior points, residual ≤ 1e-6, via the generic (norm-only) route.
pub fn criterion_funk_curvature(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    let m = FinslerMetric::funk(1);
    let mut rng = sample::rng(cfg.seed.wrapping_add(1));
    let mut worst_l = 0.0f64;
    let mut worst_r = 0.0f64;
    for _ in 0..20 {
        let x = sample::interior_point(&mut rng, 0.8);
        let y = sample::fiber_vector(&mut rng, 0.5, 2.0);
        match flag_curvature_extract(&m, x, y, SprayPath::Generic) {
            Ok(fit) => {
                worst_l = worst_l.max((fit.lambda_hat + 0.25).abs());
                worst_r = worst_r.max(fit.residual);
            }
            Err(e) => return outcome(1, false, format!("extraction failed: {e}")),
        }
    }
    outcome(
        1,
        worst_l <= TOL && worst_r <= TOL,
        format!("max |λ̂ + 1/4| = {worst_l:.2e}, max residual = {worst_r:.2e} (tol {TOL:.0e})"),
    )
}

/// 2. Projective flatness: Funk geodesics trace chords, deviation ≤ 1e-8.
pub fn criterion_projective_flatness(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-8;
    let m = FinslerMetric::funk(1);
    let mut rng = sample::rng(cfg.seed.wrapping_add(2));
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x0 = sample::interior_point(&mut rng, 0.5);
        let y0 = sample::fiber_vector(&mut rng, 0.3, 1.0);
        let path = match geodesic(&m, x0, y0, 1.0, &cfg.ode) {
            Ok(p) => p,
            Err(e) => return outcome(2, false, format!("geodesic failed: {e}")),
        };
        let norm = (y0[0] * y0[0] + y0[1] * y0[1]).sqrt();
        let dir = [y0[0] / norm, y0[1] / norm];
        for s in &path.samples {
            let d = [s.x[0] - x0[0], s.x[1] - x0[1]];
            worst = worst.max((d[0] * dir[1] - d[1] * dir[0]).abs());
        }
    }
    outcome(
        2,
        worst <= TOL,
        format!("max chord deviation = {worst:.2e} (tol {TOL:.0e})"),
    )
}

/// 3. Norm preservation under transport along 10 seeded curves, ≤ 1e-8.
pub fn criterion_norm_preservation(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-8;
    let m = FinslerMetric::funk(1);
    let mut rng = sample::rng(cfg.seed.wrapping_add(3));
    let mut worst = 0.0f64;
    for case in 0..10 {
        let y0 = sample::fiber_vector(&mut rng, 0.5, 1.5);
        let path: Vec<Segment> = if case % 2 == 0 {
            let pts: Vec<[f64; 2]> = (0..4)
                .map(|_| sample::interior_point(&mut rng, 0.55))
                .collect();
            pts.windows(2)
                .map(|w| Segment::Line {
                    from: w[0],
                    to: w[1],
                })
                .collect()
        } else {
            let center = sample::interior_point(&mut rng, 0.3);
            let radius = 0.1 + 0.15 * rng.gen::<f64>();
            let a0 = rng.gen::<f64>() * std::f64::consts::TAU;
            vec![Segment::Arc {
                center,
                radius,
                from_angle: a0,
                to_angle: a0 + 1.0 + 4.0 * rng.gen::<f64>(),
            }]
        };
        match parallel_transport(&m, &path, y0, &cfg.ode) {
            Ok(out) => worst = worst.max(out.norm_drift),
            Err(e) => return outcome(3, false, format!("transport failed: {e}")),
        }
    }
    outcome(
        3,
        worst <= TOL,
        format!("max |F(c(t), X(t)) − F₀| = {worst:.2e} (tol {TOL:.0e})"),
    )
}

/// 4. The six generator fields computed by the full pipeline at the Funk
/// origin match the closed forms (c = ½, λ = −¼) within 1e-6 sup norm.
pub fn criterion_generator_closed_forms(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    let m = FinslerMetric::funk(1);
    let report = match verify_theorem(&m, [0.0, 0.0], cfg.grid, cfg.nmax, TOL) {
        Ok(r) => r,
        Err(e) => return outcome(4, false, format!("verification failed: {e}")),
    };
    let worst = report
        .entries
        .iter()
        .map(|e| e.sup_error)
        .fold(0.0, f64::max);
    let sym = report.symmetry_error.unwrap_or(f64::NAN);
    let pass = report.hypotheses_met
        && report.entries.len() == 6
        && report.entries.iter().all(|e| e.pass)
        && sym <= TOL;
    outcome(
        4,
        pass,
        format!(
            "six fields, max sup error = {worst:.2e}, ∇₁∇₂ vs ∇₂∇₁ = {sym:.2e} (tol {TOL:.0e})"
        ),
    )
}

/// 5. The computed fields span the five-element generator system with
/// least-squares residual ≤ 1e-6.
pub fn criterion_generator_spanning(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    let m = FinslerMetric::funk(1);
    let report = match verify_theorem(&m, [0.0, 0.0], cfg.grid, cfg.nmax, TOL) {
        Ok(r) => r,
        Err(e) => return outcome(5, false, format!("verification failed: {e}")),
    };
    match report.spanning {
        Some(s) => outcome(
            5,
            s.pass,
            format!(
                "max spanning residual = {:.2e} (tol {TOL:.0e})",
                s.max_residual
            ),
        ),
        None => outcome(5, false, "no spanning report produced".into()),
    }
}

/// 6. Bracket closure from the five generators reaches dimension 2·Nmax + 1
/// exactly for Nmax ∈ {3, 5, 8} within depth 8.
pub fn criterion_bracket_closure(_cfg: &SuiteConfig) -> CriterionOutcome {
    let mut detail = String::new();
    let mut pass = true;
    for nmax in [3usize, 5, 8] {
        let expected = 2 * nmax + 1;
        let report = bracket_closure(&standard_generators(nmax), nmax, 8);
        if !detail.is_empty() {
            detail.push_str(", ");
        }
        detail.push_str(&format!("Nmax {nmax}: dim {}", report.final_dimension));
        pass &= report.final_dimension == expected && report.stable;
    }
    outcome(6, pass, detail)
}

/// 7. The Richardson-extrapolated square-loop displacement field at the Funk
/// origin is the constant −¼ (up to the documented orientation sign, which
/// is +1), within 1e-3, with non-constant energy ≤ 1% of the total.
pub fn criterion_small_loop(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-3;
    let m = FinslerMetric::funk(1);
    let sides = [0.2, 0.1, 0.05];
    let report = match small_loop_field(&m, [0.0, 0.0], &sides, cfg.grid, 8, &cfg.ode) {
        Ok(r) => r,
        Err(e) => return outcome(7, false, format!("extraction failed: {e}")),
    };
    let expected = SQUARE_LOOP_FIELD_SIGN * -0.25;
    let err = (report.field.a0() - expected).abs();
    let ms = report.field.mean_square();
    let nonconst = if ms > 0.0 {
        (ms - report.field.a0().powi(2)) / ms
    } else {
        0.0
    };
    let pass = err <= TOL && nonconst <= 0.01 && report.converged;
    outcome(
        7,
        pass,
        format!(
            "a₀ = {:.6} vs {expected} (err {err:.2e}, tol {TOL:.0e}), non-constant energy {:.3}%, observed order {:.2}",
            report.field.a0(),
            100.0 * nonconst,
            report.observed_order
        ),
    )
}

/// 8. exp_flow of sin t d/dt at s = 1 matches tan(θ/2) = e·tan(θ₀/2) within
/// 1e-8 sup norm, and the one-parameter group property holds.
pub fn criterion_flow_correctness(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-8;
    let tight = OdeSettings {
        rtol: 1e-12,
        atol: 1e-12,
        ..OdeSettings::default()
    };
    let n = cfg.grid.max(512);
    let f = CircleVectorField::zero(4).with_sin(1, 1.0);
    let flow1 = match exp_flow(&f, 1.0, n, &tight) {
        Ok(m) => m,
        Err(e) => return outcome(8, false, format!("flow failed: {e}")),
    };
    let mut worst = 0.0f64;
    for (i, &v) in flow1.lift().iter().enumerate() {
        let theta0 = std::f64::consts::TAU * i as f64 / n as f64;
        let mut expected = 2.0 * (std::f64::consts::E * (theta0 / 2.0).tan()).atan();
        if expected < 0.0 {
            expected += std::f64::consts::TAU;
        }
        worst = worst.max((v - expected).abs());
    }
    let half = match exp_flow(&f, 0.5, n, &tight) {
        Ok(m) => m,
        Err(e) => return outcome(8, false, format!("flow failed: {e}")),
    };
    let group = match half.compose(&half) {
        Ok(m) => flow1.distance(&m),
        Err(e) => return outcome(8, false, format!("composition failed: {e}")),
    };
    outcome(
        8,
        worst <= TOL && group <= TOL,
        format!("closed-form sup error = {worst:.2e}, group-property distance = {group:.2e} (tol {TOL:.0e})"),
    )
}

/// 9. Bracket antisymmetry to round-off and Jacobi residual ≤ 1e-10 on 100
/// seeded random degree-≤4 fields (Nmax = 12, no truncation loss).
pub fn criterion_algebra_identities(cfg: &SuiteConfig) -> CriterionOutcome {
    const JACOBI_TOL: f64 = 1e-10;
    const ANTISYM_TOL: f64 = 1e-12;
    let nmax = 12;
    let mut rng = sample::rng(cfg.seed.wrapping_add(9));
    let mut random_field = || {
        let mut f = CircleVectorField::constant(rng.gen::<f64>() * 2.0 - 1.0, nmax);
        for n in 1..=4 {
            f = f
                .with_cos(n, rng.gen::<f64>() * 2.0 - 1.0)
                .with_sin(n, rng.gen::<f64>() * 2.0 - 1.0);
        }
        f
    };
    let mut worst_anti = 0.0f64;
    let mut worst_jacobi = 0.0f64;
    for _ in 0..100 {
        let f = random_field();
        let g = random_field();
        let h = random_field();
        let anti = lie_bracket(&f, &g).add(&lie_bracket(&g, &f));
        worst_anti = worst_anti.max(anti.sup_norm());
        let jac = lie_bracket(&f, &lie_bracket(&g, &h))
            .add(&lie_bracket(&g, &lie_bracket(&h, &f)))
            .add(&lie_bracket(&h, &lie_bracket(&f, &g)));
        worst_jacobi = worst_jacobi.max(jac.sup_norm());
    }
    outcome(
        9,
        worst_anti <= ANTISYM_TOL && worst_jacobi <= JACOBI_TOL,
        format!("max antisymmetry = {worst_anti:.2e} (tol {ANTISYM_TOL:.0e}), max Jacobi = {worst_jacobi:.2e} (tol {JACOBI_TOL:.0e})"),
    )
}

/// 10. Bryant-Shen hypotheses for α ∈ {π/6, π/4, 1.0}: conditions A and B
/// hold with c = tan α (within 1e-12) and λ = 1, and the six generator
/// fields are emitted by substitution.
pub fn criterion_bryant_shen(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-12;
    let mut detail = String::new();
    let mut pass = true;
    for alpha in [
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_4,
        1.0,
    ] {
        let m = match FinslerMetric::bryant_shen(alpha) {
            Ok(m) => m,
            Err(e) => return outcome(10, false, format!("bad metric: {e}")),
        };
        let report = match verify_theorem(&m, [0.0, 0.0], cfg.grid, cfg.nmax, 1e-6) {
            Ok(r) => r,
            Err(e) => return outcome(10, false, format!("verification failed: {e}")),
        };
        let c_err = (report.c - alpha.tan()).abs();
        let ok = report.hypotheses_met
            && c_err <= TOL
            && report.lambda == 1.0
            && report.entries.len() == 6
            && report.pass;
        if !detail.is_empty() {
            detail.push_str(", ");
        }
        detail.push_str(&format!("α = {alpha:.4}: |c − tan α| = {c_err:.1e}"));
        pass &= ok;
    }
    outcome(10, pass, detail)
}

/// 11. Generic and projective spray routes agree for Funk at 50 seeded
/// points, all components within 1e-6 relative.
pub fn criterion_dual_path(cfg: &SuiteConfig) -> CriterionOutcome {
    const TOL: f64 = 1e-6;
    let m = FinslerMetric::funk(1);
    let mut rng = sample::rng(cfg.seed.wrapping_add(11));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x = sample::interior_point(&mut rng, 0.8);
        let y = sample::fiber_vector(&mut rng, 0.5, 2.0);
        let (a, b) = match (
            spray_data(&m, x, y, SprayPath::Generic),
            spray_data(&m, x, y, SprayPath::Projective),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return outcome(11, false, format!("spray failed: {e}")),
        };
        let mut scale = 0.0f64;
        let mut dev = 0.0f64;
        let mut upd = |u: f64, v: f64| {
            scale = scale.max(v.abs());
            dev = dev.max((u - v).abs());
        };
        for i in 0..2 {
            upd(a.coefficients[i], b.coefficients[i]);
            for j in 0..2 {
                upd(a.connection[i][j], b.connection[i][j]);
                for k in 0..2 {
                    upd(a.berwald[i][j][k], b.berwald[i][j][k]);
                }
            }
        }
        worst = worst.max(dev / scale.max(1e-9));
    }
    outcome(
        11,
        worst <= TOL,
        format!("max relative component deviation = {worst:.2e} (tol {TOL:.0e})"),
    )
}

pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionOutcome {
    match id {
        1 => criterion_funk_curvature(cfg),
        2 => criterion_projective_flatness(cfg),
        3 => criterion_norm_preservation(cfg),
        4 => criterion_generator_closed_forms(cfg),
        5 => criterion_generator_spanning(cfg),
        6 => criterion_bracket_closure(cfg),
        7 => criterion_small_loop(cfg),
        8 => criterion_flow_correctness(cfg),
        9 => criterion_algebra_identities(cfg),
        10 => criterion_bryant_shen(cfg),
        11 => criterion_dual_path(cfg),
        other => panic!("no criterion {other}"),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    (1..=11).map(|id| run_criterion(id, cfg)).collect()
}
