//! Angle parameterization of the indicatrix at a base point.
//!
//! The indicatrix {F(x₀, y) = 1} is star-shaped around the origin of the
//! tangent plane, so the central angle t of y is a global chart:
//! y(t) = ρ(t)(cos t, sin t) with ρ(t) = 1/F(x₀, (cos t, sin t)). Fields on
//! the indicatrix are stored in this coordinate, with the d/dt basis vector
//! being ∂y/∂t. At base points where F(x₀, ·) is an isotropic Euclidean norm
//! the radius is constant, which is exactly condition A of the generator
//! construction.

use crate::error::Result;
use crate::metrics::FinslerMetric;

#[derive(Clone, Copy)]
pub struct IndicatrixChart<'m> {
    metric: &'m FinslerMetric,
    x0: [f64; 2],
}

impl<'m> IndicatrixChart<'m> {
    pub fn new(metric: &'m FinslerMetric, x0: [f64; 2]) -> Result<IndicatrixChart<'m>> {
        // probe one norm evaluation so bad base points fail here
        metric.norm(x0, [1.0, 0.0])?;
        Ok(IndicatrixChart { metric, x0 })
    }

    pub fn base_point(&self) -> [f64; 2] {
        self.x0
    }

    /// ρ(t): radius of the indicatrix along the ray at angle t.
    pub fn radius(&self, t: f64) -> Result<f64> {
        Ok(1.0 / self.metric.norm(self.x0, [t.cos(), t.sin()])?)
    }

    /// Indicatrix point y(t).
    pub fn point(&self, t: f64) -> Result<[f64; 2]> {
        let r = self.radius(t)?;
        Ok([r * t.cos(), r * t.sin()])
    }

    /// Central angle of a fiber vector.
    pub fn angle(y: [f64; 2]) -> f64 {
        y[1].atan2(y[0])
    }

    /// Component of a fiber vector v at y along d/dt in the angle chart:
    /// dθ(v) = (y¹v² − y²v¹)/|y|². Radial components contribute nothing.
    pub fn angle_component(y: [f64; 2], v: [f64; 2]) -> f64 {
        (y[0] * v[1] - y[1] * v[0]) / (y[0] * y[0] + y[1] * y[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn funk_origin_chart_is_the_unit_circle() {
        let m = FinslerMetric::funk(1);
        let chart = IndicatrixChart::new(&m, [0.0, 0.0]).unwrap();
        for t in [0.0, 1.0, 2.0, 4.5] {
            let y = chart.point(t).unwrap();
            assert_relative_eq!(y[0] * y[0] + y[1] * y[1], 1.0, epsilon = 1e-14);
            assert_relative_eq!(m.norm([0.0, 0.0], y).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn off_origin_chart_stays_on_the_indicatrix() {
        let m = FinslerMetric::funk(1);
        let chart = IndicatrixChart::new(&m, [0.3, -0.2]).unwrap();
        for k in 0..32 {
            let t = std::f64::consts::TAU * k as f64 / 32.0;
            let y = chart.point(t).unwrap();
            assert_relative_eq!(m.norm([0.3, -0.2], y).unwrap(), 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn angle_component_of_tangent_is_one() {
        // dθ applied to dy/dt equals 1 in any radial chart
        let m = FinslerMetric::funk(1);
        let chart = IndicatrixChart::new(&m, [0.25, 0.1]).unwrap();
        let h = 1e-6;
        for t in [0.3, 1.9, 3.7] {
            let y = chart.point(t).unwrap();
            let yp = chart.point(t + h).unwrap();
            let ym = chart.point(t - h).unwrap();
            let v = [(yp[0] - ym[0]) / (2.0 * h), (yp[1] - ym[1]) / (2.0 * h)];
            assert_relative_eq!(IndicatrixChart::angle_component(y, v), 1.0, epsilon = 1e-9);
        }
    }
}
