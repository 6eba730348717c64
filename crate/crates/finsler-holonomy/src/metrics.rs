//! Catalog of concrete Finsler metrics.
//!
//! Every evaluator works over [`Jet`] inputs so the spray and curvature
//! pipelines stay differentiable; plain `f64` entry points seed order-0 jets.
//! Base and fiber coordinates are passed as separate pairs of jets living in
//! one common jet space — callers decide which of them are seeded as
//! variables.

use crate::error::{Error, Result};
use crate::jet::{jet_space, DerivativeRequest, Jet};

/// Strict interior guard for the Funk disk, kept off the boundary where
/// 1/(1-|x|²) blows up.
pub const FUNK_DOMAIN_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricKind {
    /// Funk metric on the open unit disk, `+` branch of the defining formula.
    FunkPlus,
    /// Funk metric, `-` branch.
    FunkMinus,
    /// Bryant-Shen sphere data; only the tangent plane at the chart origin is
    /// available, with F(0,y) = |y|·cos α and P(0,y) = |y|·sin α.
    BryantShen { alpha: f64 },
    /// Flat baseline, F(x,y) = |y|.
    Euclidean,
}

#[derive(Clone, Copy, Debug)]
pub struct FinslerMetric {
    kind: MetricKind,
}

fn dot2(a: &[Jet; 2], b: &[Jet; 2]) -> Jet {
    &(&a[0] * &b[0]) + &(&a[1] * &b[1])
}

fn is_identically_zero(j: &Jet) -> bool {
    j.partials().all(|(_, p)| p == 0.0)
}

impl FinslerMetric {
    pub fn new(kind: MetricKind) -> Result<FinslerMetric> {
        if let MetricKind::BryantShen { alpha } = kind {
            if !(alpha.abs() < std::f64::consts::FRAC_PI_2) {
                return Err(Error::Parse(format!(
                    "Bryant-Shen parameter must satisfy |alpha| < pi/2, got {alpha}"
                )));
            }
        }
        Ok(FinslerMetric { kind })
    }

    pub fn funk(sign: i8) -> FinslerMetric {
        match sign {
            s if s >= 0 => FinslerMetric {
                kind: MetricKind::FunkPlus,
            },
            _ => FinslerMetric {
                kind: MetricKind::FunkMinus,
            },
        }
    }

    pub fn euclidean() -> FinslerMetric {
        FinslerMetric {
            kind: MetricKind::Euclidean,
        }
    }

    pub fn bryant_shen(alpha: f64) -> Result<FinslerMetric> {
        FinslerMetric::new(MetricKind::BryantShen { alpha })
    }

    /// Metric selection grammar: `funk:+`, `funk:-`, `bryant:<alpha>`, `euclid`.
    pub fn parse(spec: &str) -> Result<FinslerMetric> {
        match spec {
            "funk:+" => Ok(FinslerMetric::funk(1)),
            "funk:-" => Ok(FinslerMetric::funk(-1)),
            "euclid" => Ok(FinslerMetric::euclidean()),
            other => match other.strip_prefix("bryant:") {
                Some(a) => {
                    let alpha: f64 = a
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad Bryant-Shen parameter `{a}`")))?;
                    FinslerMetric::bryant_shen(alpha)
                }
                None => Err(Error::Parse(format!(
                    "unknown metric `{spec}` (expected funk:+, funk:-, bryant:<alpha>, euclid)"
                ))),
            },
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            MetricKind::FunkPlus => "funk:+".into(),
            MetricKind::FunkMinus => "funk:-".into(),
            MetricKind::BryantShen { alpha } => format!("bryant:{alpha}"),
            MetricKind::Euclidean => "euclid".into(),
        }
    }

    /// Known constant flag curvature, when the catalog pins one.
    pub fn known_flag_curvature(&self) -> Option<f64> {
        match self.kind {
            MetricKind::FunkPlus | MetricKind::FunkMinus => Some(-0.25),
            MetricKind::BryantShen { .. } => Some(1.0),
            MetricKind::Euclidean => Some(0.0),
        }
    }

    /// Whether a closed-form projective factor is available.
    pub fn has_projective_factor(&self) -> bool {
        true
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        match self.kind {
            MetricKind::FunkPlus | MetricKind::FunkMinus => {
                let m = 1.0 - FUNK_DOMAIN_MARGIN;
                x[0] * x[0] + x[1] * x[1] < m * m
            }
            MetricKind::BryantShen { .. } => x == [0.0, 0.0],
            MetricKind::Euclidean => true,
        }
    }

    /// Whether x sits in the outer collar just inside the hard guard, where
    /// trajectory integration should stop cleanly instead of starving its
    /// step size against the domain edge.
    pub fn near_boundary(&self, x: [f64; 2]) -> bool {
        match self.kind {
            MetricKind::FunkPlus | MetricKind::FunkMinus => {
                let m = 1.0 - 10.0 * FUNK_DOMAIN_MARGIN;
                x[0] * x[0] + x[1] * x[1] >= m * m
            }
            MetricKind::BryantShen { .. } | MetricKind::Euclidean => false,
        }
    }

    fn check_point(&self, x: [f64; 2], y: [f64; 2]) -> Result<()> {
        if !self.contains(x) {
            return Err(Error::OutsideDomain(format!(
                "x = ({}, {}) not in the domain of {}",
                x[0],
                x[1],
                self.name()
            )));
        }
        if y == [0.0, 0.0] {
            return Err(Error::ZeroFiberVector);
        }
        Ok(())
    }

    /// The Bryant-Shen chart carries no base-point derivative information:
    /// both x-jets must be identically zero.
    fn check_origin_jets(&self, x: &[Jet; 2]) -> Result<()> {
        if is_identically_zero(&x[0]) && is_identically_zero(&x[1]) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(
                "Bryant-Shen data is available only at the chart origin, \
                 with no base-point derivatives"
                    .into(),
            ))
        }
    }

    /// Finsler norm F(x, y) over jets.
    pub fn norm_jet(&self, x: &[Jet; 2], y: &[Jet; 2]) -> Result<Jet> {
        let xv = [x[0].value(), x[1].value()];
        let yv = [y[0].value(), y[1].value()];
        self.check_point(xv, yv)?;
        match self.kind {
            MetricKind::FunkPlus => Ok(funk_norm_jet(x, y, 1.0)),
            MetricKind::FunkMinus => Ok(funk_norm_jet(x, y, -1.0)),
            MetricKind::Euclidean => Ok(dot2(y, y).sqrt()),
            MetricKind::BryantShen { alpha } => {
                self.check_origin_jets(x)?;
                Ok(&dot2(y, y).sqrt() * alpha.cos())
            }
        }
    }

    /// Closed-form projective factor P(x, y) over jets.
    pub fn projective_factor_jet(&self, x: &[Jet; 2], y: &[Jet; 2]) -> Result<Jet> {
        let xv = [x[0].value(), x[1].value()];
        let yv = [y[0].value(), y[1].value()];
        self.check_point(xv, yv)?;
        match self.kind {
            MetricKind::FunkPlus => Ok(funk_projective_jet(x, y, 1.0)),
            MetricKind::FunkMinus => Ok(funk_projective_jet(x, y, -1.0)),
            MetricKind::Euclidean => Ok(Jet::constant(y[0].space(), 0.0)),
            MetricKind::BryantShen { alpha } => {
                self.check_origin_jets(x)?;
                Ok(&dot2(y, y).sqrt() * alpha.sin())
            }
        }
    }

    pub fn norm(&self, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let space = jet_space(1, 0)?;
        let xj = [Jet::constant(space, x[0]), Jet::constant(space, x[1])];
        let yj = [Jet::constant(space, y[0]), Jet::constant(space, y[1])];
        Ok(self.norm_jet(&xj, &yj)?.value())
    }

    pub fn projective_factor(&self, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let space = jet_space(1, 0)?;
        let xj = [Jet::constant(space, x[0]), Jet::constant(space, x[1])];
        let yj = [Jet::constant(space, y[0]), Jet::constant(space, y[1])];
        Ok(self.projective_factor_jet(&xj, &yj)?.value())
    }
}

fn funk_norm_jet(x: &[Jet; 2], y: &[Jet; 2], sign: f64) -> Jet {
    let xx = dot2(x, x);
    let yy = dot2(y, y);
    let xy = dot2(x, y);
    let w = (&(&yy - &(&(&xx * &yy) - &(&xy * &xy)))).sqrt();
    let denom = 1.0 - &xx;
    &(&w + &(&xy * sign)) / &denom
}

fn funk_projective_jet(x: &[Jet; 2], y: &[Jet; 2], sign: f64) -> Jet {
    let xx = dot2(x, x);
    let yy = dot2(y, y);
    let xy = dot2(x, y);
    let w = (&(&yy - &(&(&xx * &yy) - &(&xy * &xy)))).sqrt();
    let denom = 1.0 - &xx;
    &(&(&(&w * sign) + &xy) / &denom) * 0.5
}

/// Funk norm with an explicit sign, plain values.
pub fn funk_norm(sign: i8, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    FinslerMetric::funk(sign).norm(x, y)
}

/// Funk projective factor with an explicit sign, plain values.
pub fn funk_projective_factor(sign: i8, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    FinslerMetric::funk(sign).projective_factor(x, y)
}

/// Bryant-Shen norm and projective factor at the chart origin:
/// (F₀, P₀) = (|y| cos α, |y| sin α). The derived condition-B constant is
/// P₀/F₀ = tan α.
pub fn bryant_shen_origin(alpha: f64, y: [f64; 2]) -> Result<(f64, f64)> {
    let m = FinslerMetric::bryant_shen(alpha)?;
    let f = m.norm([0.0, 0.0], y)?;
    let p = m.projective_factor([0.0, 0.0], y)?;
    Ok((f, p))
}

/// Projective factor recovered from the norm alone,
/// P = (1/2F) Σᵢ (∂F/∂xⁱ) yⁱ, for projectively flat metrics.
///
/// Needs base-point derivatives of F, so it rejects Bryant-Shen (origin-only
/// data). For the Funk metrics it coincides with the closed form.
pub fn projective_factor_from_norm(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
) -> Result<f64> {
    let jet = crate::jet::lift(
        |seeds: &[Jet]| {
            let xj = [seeds[0].clone(), seeds[1].clone()];
            let space = seeds[0].space();
            let yj = [Jet::constant(space, y[0]), Jet::constant(space, y[1])];
            metric.norm_jet(&xj, &yj)
        },
        &x,
        DerivativeRequest::new(2, 1),
    )?;
    let f = jet.value();
    let fx = [jet.partial(&[1, 0]), jet.partial(&[0, 1])];
    Ok((fx[0] * y[0] + fx[1] * y[1]) / (2.0 * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{fd_check, jet_space, lift, DerivativeRequest, Jet};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn funk_norm_examples() {
        assert_relative_eq!(funk_norm(1, [0.0, 0.0], [1.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(funk_norm(1, [0.5, 0.0], [1.0, 0.0]).unwrap(), 2.0);
        assert_relative_eq!(
            funk_norm(-1, [0.5, 0.0], [1.0, 0.0]).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn funk_projective_factor_examples() {
        assert_relative_eq!(
            funk_projective_factor(1, [0.0, 0.0], [1.0, 0.0]).unwrap(),
            0.5
        );
        assert_relative_eq!(
            funk_projective_factor(1, [0.5, 0.0], [1.0, 0.0]).unwrap(),
            1.0
        );
        assert_relative_eq!(
            funk_projective_factor(-1, [0.0, 0.0], [0.0, 2.0]).unwrap(),
            -1.0
        );
    }

    #[test]
    fn bryant_shen_origin_examples() {
        let (f, p) = bryant_shen_origin(0.0, [1.0, 0.0]).unwrap();
        assert_relative_eq!(f, 1.0);
        assert_relative_eq!(p, 0.0);
        let (f, p) = bryant_shen_origin(std::f64::consts::FRAC_PI_4, [1.0, 0.0]).unwrap();
        assert_relative_eq!(f, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(p, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        let (f, p) = bryant_shen_origin(std::f64::consts::FRAC_PI_6, [0.0, 2.0]).unwrap();
        assert_relative_eq!(f, 3.0f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(p, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn domain_guards() {
        assert!(matches!(
            funk_norm(1, [1.0, 0.0], [1.0, 0.0]),
            Err(Error::OutsideDomain(_))
        ));
        assert!(matches!(
            funk_norm(1, [0.2, 0.0], [0.0, 0.0]),
            Err(Error::ZeroFiberVector)
        ));
        assert!(FinslerMetric::bryant_shen(2.0).is_err());
        let bs = FinslerMetric::bryant_shen(0.3).unwrap();
        assert!(matches!(
            bs.norm([0.1, 0.0], [1.0, 0.0]),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn bryant_shen_rejects_base_variables() {
        let bs = FinslerMetric::bryant_shen(0.3).unwrap();
        assert!(matches!(
            projective_factor_from_norm(&bs, [0.0, 0.0], [1.0, 0.0]),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn funk_norm_tower_matches_fd_oracle_to_order_3() {
        let metric = FinslerMetric::funk(1);
        let point = [0.3, 0.1, 1.0, 0.2];
        let f = |p: &[f64]| metric.norm([p[0], p[1]], [p[2], p[3]]).unwrap();
        let jet = lift(
            |s: &[Jet]| {
                metric.norm_jet(&[s[0].clone(), s[1].clone()], &[s[2].clone(), s[3].clone()])
            },
            &point,
            DerivativeRequest::new(4, 3),
        )
        .unwrap();
        for (alpha, ad) in jet.partials() {
            let total: usize = alpha.iter().map(|&k| k as usize).sum();
            if total == 0 || total > 3 {
                continue;
            }
            let idx: Vec<usize> = alpha.iter().map(|&k| k as usize).collect();
            // third-order differences sit on the f64 noise floor at h = 1e-4
            // (ε/h³ ≈ 1e-4); a larger step keeps the oracle meaningful there
            let h = if total <= 2 { 1e-4 } else { 5e-3 };
            let fd = fd_check(f, &point, &idx, h);
            assert_relative_eq!(ad, fd, max_relative = 1e-5, epsilon = 1e-6);
        }
    }

    #[test]
    fn lift_and_fd_agree_on_random_interior_points() {
        let metric = FinslerMetric::funk(1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let r = 0.8 * rng.gen::<f64>().sqrt();
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            let s = 0.5 + 1.5 * rng.gen::<f64>();
            let b = rng.gen::<f64>() * std::f64::consts::TAU;
            let point = [r * a.cos(), r * a.sin(), s * b.cos(), s * b.sin()];
            let f = |p: &[f64]| metric.norm([p[0], p[1]], [p[2], p[3]]).unwrap();
            let jet = lift(
                |sj: &[Jet]| {
                    metric.norm_jet(
                        &[sj[0].clone(), sj[1].clone()],
                        &[sj[2].clone(), sj[3].clone()],
                    )
                },
                &point,
                DerivativeRequest::new(4, 1),
            )
            .unwrap();
            for alpha in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] {
                let fd = fd_check(f, &point, &alpha, 1e-4);
                assert_relative_eq!(jet.partial(&alpha), fd, max_relative = 1e-5, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn norm_is_positively_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for metric in [
            FinslerMetric::funk(1),
            FinslerMetric::funk(-1),
            FinslerMetric::euclidean(),
        ] {
            for _ in 0..100 {
                let x = [rng.gen::<f64>() * 0.8 - 0.4, rng.gen::<f64>() * 0.8 - 0.4];
                let y = [
                    rng.gen::<f64>() * 2.0 - 1.0,
                    rng.gen::<f64>() * 2.0 - 1.0 + 1.5,
                ];
                let s = 0.1 + 3.0 * rng.gen::<f64>();
                let f = metric.norm(x, y).unwrap();
                let fs = metric.norm(x, [s * y[0], s * y[1]]).unwrap();
                assert!(f > 0.0);
                assert!((fs - s * f).abs() <= 1e-12 * s * f);
                let p = metric.projective_factor(x, y).unwrap();
                let ps = metric.projective_factor(x, [s * y[0], s * y[1]]).unwrap();
                assert!((ps - s * p).abs() <= 1e-12 * (s * p.abs()).max(1e-3));
            }
        }
    }

    #[test]
    fn euler_relation_from_homogeneity() {
        // Σ yᵏ ∂F/∂yᵏ = F for the degree-1 homogeneous norm
        let metric = FinslerMetric::funk(1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let space = jet_space(2, 1).unwrap();
        for _ in 0..50 {
            let x = [rng.gen::<f64>() * 0.8 - 0.4, rng.gen::<f64>() * 0.8 - 0.4];
            let y = [rng.gen::<f64>() + 0.5, rng.gen::<f64>() - 0.5];
            let xj = [Jet::constant(space, x[0]), Jet::constant(space, x[1])];
            let yj = [Jet::variable(space, y[0], 0), Jet::variable(space, y[1], 1)];
            let f = metric.norm_jet(&xj, &yj).unwrap();
            let euler = y[0] * f.partial(&[1, 0]) + y[1] * f.partial(&[0, 1]);
            assert_relative_eq!(euler, f.value(), max_relative = 1e-12);
        }
    }

    #[test]
    fn projective_factor_from_norm_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for metric in [FinslerMetric::funk(1), FinslerMetric::funk(-1)] {
            for _ in 0..100 {
                let r = 0.85 * rng.gen::<f64>().sqrt();
                let a = rng.gen::<f64>() * std::f64::consts::TAU;
                let x = [r * a.cos(), r * a.sin()];
                let y = [rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 0.3];
                if y == [0.0, 0.0] {
                    continue;
                }
                let from_norm = projective_factor_from_norm(&metric, x, y).unwrap();
                let closed = metric.projective_factor(x, y).unwrap();
                assert_relative_eq!(from_norm, closed, epsilon = 1e-8, max_relative = 1e-8);
            }
        }
        // spot values from the definition
        assert_relative_eq!(
            projective_factor_from_norm(&FinslerMetric::funk(1), [0.0, 0.0], [1.0, 0.0]).unwrap(),
            0.5,
            epsilon = 1e-10
        );
        let e = FinslerMetric::euclidean();
        assert_relative_eq!(
            projective_factor_from_norm(&e, [0.3, -0.2], [0.7, 1.1]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn condition_a_is_exact_at_the_origin() {
        let funk = FinslerMetric::funk(1);
        let bs = FinslerMetric::bryant_shen(0.6).unwrap();
        for k in 0..16 {
            let t = std::f64::consts::TAU * k as f64 / 16.0;
            let y = [t.cos(), t.sin()];
            assert_eq!(
                funk.norm([0.0, 0.0], y).unwrap(),
                (y[0] * y[0] + y[1] * y[1]).sqrt()
            );
            let ratio = bs.norm([0.0, 0.0], y).unwrap() / 0.6f64.cos();
            assert_relative_eq!(ratio, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(
            FinslerMetric::parse("funk:+").unwrap().kind(),
            MetricKind::FunkPlus
        );
        assert_eq!(
            FinslerMetric::parse("funk:-").unwrap().kind(),
            MetricKind::FunkMinus
        );
        assert_eq!(
            FinslerMetric::parse("euclid").unwrap().kind(),
            MetricKind::Euclidean
        );
        assert!(matches!(
            FinslerMetric::parse("bryant:0.5").unwrap().kind(),
            MetricKind::BryantShen { .. }
        ));
        assert!(FinslerMetric::parse("randers:1").is_err());
    }
}
