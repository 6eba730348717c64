//! Fiber vector fields on the indicatrix bundle and their horizontal Berwald
//! covariant derivatives.
//!
//! A [`FiberField`] evaluates its components as jets at a point, so the
//! covariant-derivative formula
//!
//! ∇_X ξ = (∂ξⁱ/∂xʲ − G_jᵏ ∂ξⁱ/∂yᵏ + Gⁱ_jk ξᵏ) Xʲ ∂/∂yⁱ
//!
//! can be applied repeatedly: each application consumes one tower order of
//! the inner evaluator. Restricting to the indicatrix and projecting on the
//! angle coordinate turns the result into a [`CircleVectorField`].

use crate::circle::chart::IndicatrixChart;
use crate::circle::fourier::{CircleVectorField, SpectrumInfo};
use crate::error::{Error, Result};
use crate::jet::{jet_space, Jet};
use crate::metrics::FinslerMetric;
use crate::spray::{curvature_jets, projective_tower};
use rayon::prelude::*;

/// Tangency budget for the raw curvature field (a violation signals a
/// curvature-pipeline bug, not a numerical artifact).
pub const CURVATURE_TANGENCY_TOL: f64 = 1e-8;

/// Vector field ξ(x, y) = ξⁱ ∂/∂yⁱ on (a neighborhood of) the indicatrix
/// bundle, evaluated as derivative towers.
pub trait FiberField: Sync {
    /// Components (ξ¹, ξ²) at (x, y) as jets of the requested order over the
    /// four variables (x¹, x², y¹, y²).
    fn eval(&self, x: [f64; 2], y: [f64; 2], order: usize) -> Result<[Jet; 2]>;
}

/// ξ = R(X, Y) for constant coordinate frames X, Y.
#[derive(Clone, Copy)]
pub struct CurvatureField {
    pub metric: FinslerMetric,
    pub x_frame: [f64; 2],
    pub y_frame: [f64; 2],
}

impl CurvatureField {
    pub fn coordinate(metric: FinslerMetric) -> CurvatureField {
        CurvatureField {
            metric,
            x_frame: [1.0, 0.0],
            y_frame: [0.0, 1.0],
        }
    }
}

impl FiberField for CurvatureField {
    fn eval(&self, x: [f64; 2], y: [f64; 2], order: usize) -> Result<[Jet; 2]> {
        let tower = projective_tower(&self.metric, x, y, order + 2)?;
        let r = curvature_jets(&tower);
        Ok(std::array::from_fn(|i| {
            let mut acc = Jet::constant(r[i][0][0].space(), 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    let w = self.x_frame[j] * self.y_frame[k];
                    if w != 0.0 {
                        acc = &acc + &(&r[i][j][k] * w);
                    }
                }
            }
            acc
        }))
    }
}

/// Identically zero field (flat baseline).
pub struct ZeroField;

impl FiberField for ZeroField {
    fn eval(&self, _x: [f64; 2], _y: [f64; 2], order: usize) -> Result<[Jet; 2]> {
        let space = jet_space(4, order)?;
        Ok([Jet::constant(space, 0.0), Jet::constant(space, 0.0)])
    }
}

/// ∇_j of an inner field, as a field. Composable: the output is again a
/// [`FiberField`], one tower order hungrier than its input.
pub struct BerwaldDerivative<F> {
    pub metric: FinslerMetric,
    pub inner: F,
    /// Base direction j of ∇_j (0 or 1).
    pub direction: usize,
}

impl<F: FiberField> FiberField for BerwaldDerivative<F> {
    fn eval(&self, x: [f64; 2], y: [f64; 2], order: usize) -> Result<[Jet; 2]> {
        let j = self.direction;
        let xi = self.inner.eval(x, y, order + 1)?;
        let tower = projective_tower(&self.metric, x, y, order + 2)?;
        Ok(std::array::from_fn(|i| {
            // ∂ξⁱ/∂xʲ
            let mut out = xi[i].derivative(j);
            // − G_jᵐ ∂ξⁱ/∂yᵐ + Gⁱ_jm ξᵐ
            for m in 0..2 {
                out = &out - &(&tower.connection[m][j] * &xi[i].derivative(2 + m));
                out = &out + &(&tower.berwald[i][j][m] * &xi[m]);
            }
            out
        }))
    }
}

/// Restriction of a fiber field to the indicatrix at `x0`, projected on the
/// angle coordinate.
#[derive(Clone, Copy, Debug)]
pub struct RestrictionInfo {
    /// max_t |dF(ξ)| over the grid — the normal component that tangent
    /// fields must not have.
    pub max_tangency_violation: f64,
    pub spectrum: SpectrumInfo,
}

pub fn restrict_to_indicatrix(
    field: &dyn FiberField,
    metric: &FinslerMetric,
    x0: [f64; 2],
    grid: usize,
    nmax: usize,
) -> Result<(CircleVectorField, RestrictionInfo)> {
    let chart = IndicatrixChart::new(metric, x0)?;
    let rows: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let t = std::f64::consts::TAU * i as f64 / grid as f64;
            let y = chart.point(t)?;
            let v = field.eval(x0, y, 0)?;
            let v = [v[0].value(), v[1].value()];
            // normal component via dF
            let space = jet_space(2, 1)?;
            let xj = [Jet::constant(space, x0[0]), Jet::constant(space, x0[1])];
            let yj = [Jet::variable(space, y[0], 0), Jet::variable(space, y[1], 1)];
            let f = metric.norm_jet(&xj, &yj)?;
            let df = f.partial(&[1, 0]) * v[0] + f.partial(&[0, 1]) * v[1];
            Ok((IndicatrixChart::angle_component(y, v), df.abs()))
        })
        .collect::<Result<_>>()?;
    let samples: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let max_tangency = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let (field, spectrum) = CircleVectorField::from_samples(&samples, nmax);
    Ok((
        field,
        RestrictionInfo {
            max_tangency_violation: max_tangency,
            spectrum,
        },
    ))
}

/// Curvature vector field ξ = R(X, Y) on the indicatrix at `x0`, in the
/// angle coordinate. Errors when ξ is not tangent to the indicatrix.
pub fn curvature_field(
    metric: &FinslerMetric,
    x0: [f64; 2],
    x_frame: [f64; 2],
    y_frame: [f64; 2],
    grid: usize,
    nmax: usize,
) -> Result<(CircleVectorField, RestrictionInfo)> {
    let ev = CurvatureField {
        metric: *metric,
        x_frame,
        y_frame,
    };
    let (f, info) = restrict_to_indicatrix(&ev, metric, x0, grid, nmax)?;
    if info.max_tangency_violation > CURVATURE_TANGENCY_TOL {
        return Err(Error::Tangency(
            info.max_tangency_violation,
            CURVATURE_TANGENCY_TOL,
        ));
    }
    Ok((f, info))
}

/// ∇_direction of a fiber field, restricted to the indicatrix at `x0`.
pub fn berwald_derivative_field<F: FiberField>(
    metric: &FinslerMetric,
    field: F,
    direction: usize,
    x0: [f64; 2],
    grid: usize,
    nmax: usize,
) -> Result<(CircleVectorField, RestrictionInfo)> {
    assert!(direction < 2, "base direction must be 0 or 1");
    let ev = BerwaldDerivative {
        metric: *metric,
        inner: field,
        direction,
    };
    restrict_to_indicatrix(&ev, metric, x0, grid, nmax)
}
