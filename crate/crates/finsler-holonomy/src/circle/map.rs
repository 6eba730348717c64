//! Orientation-preserving circle diffeomorphisms as monotone lifted sample
//! tables on a uniform grid.

use crate::error::{Error, Result};

/// Lifted values φ̃(tᵢ) at tᵢ = 2πi/N with φ̃ strictly increasing and
/// φ̃(t + 2π) = φ̃(t) + 2π (degree one).
#[derive(Clone, Debug)]
pub struct CircleMap {
    lift: Vec<f64>,
}

fn wrap_pm_pi(mut d: f64) -> f64 {
    while d > std::f64::consts::PI {
        d -= std::f64::consts::TAU;
    }
    while d <= -std::f64::consts::PI {
        d += std::f64::consts::TAU;
    }
    d
}

impl CircleMap {
    pub fn identity(n: usize) -> CircleMap {
        CircleMap::rotation(n, 0.0)
    }

    pub fn rotation(n: usize, angle: f64) -> CircleMap {
        CircleMap {
            lift: (0..n)
                .map(|i| std::f64::consts::TAU * i as f64 / n as f64 + angle)
                .collect(),
        }
    }

    /// Build from raw angles (any branch) sampled at the uniform grid,
    /// unwrapping to the nearest branch. Fails when the samples are not
    /// strictly monotone or do not wind exactly once — under-resolved maps
    /// want a larger grid or a tighter solver tolerance.
    pub fn from_angle_samples(angles: &[f64]) -> Result<CircleMap> {
        let n = angles.len();
        if n < 16 {
            return Err(Error::ResolutionFailure(format!(
                "grid of {n} is below the minimum of 16"
            )));
        }
        let mut lift = Vec::with_capacity(n);
        lift.push(wrap_pm_pi(angles[0]));
        for i in 1..n {
            let inc = wrap_pm_pi(angles[i] - angles[i - 1]);
            if inc <= 0.0 {
                return Err(Error::ResolutionFailure(format!(
                    "sampled lift not strictly increasing at grid index {i} (increment {inc:.3e})"
                )));
            }
            lift.push(lift[i - 1] + inc);
        }
        let closing = wrap_pm_pi(angles[0] - angles[n - 1]);
        if closing <= 0.0 {
            return Err(Error::ResolutionFailure(
                "sampled lift not strictly increasing across the seam".into(),
            ));
        }
        let winding = lift[n - 1] + closing - lift[0];
        if (winding - std::f64::consts::TAU).abs() > 1e-9 {
            return Err(Error::ResolutionFailure(format!(
                "sampled map winds {winding:.6} instead of 2π; increase the grid"
            )));
        }
        Ok(CircleMap { lift })
    }

    /// Build directly from lift values already on a common branch (flows
    /// produce these); validates monotonicity.
    pub fn from_lift(lift: Vec<f64>) -> Result<CircleMap> {
        let n = lift.len();
        for i in 1..n {
            if lift[i] <= lift[i - 1] {
                return Err(Error::ResolutionFailure(format!(
                    "lift not strictly increasing at index {i}"
                )));
            }
        }
        if lift[n - 1] - lift[0] >= std::f64::consts::TAU {
            return Err(Error::ResolutionFailure(
                "lift spans 2π or more within one period".into(),
            ));
        }
        Ok(CircleMap { lift })
    }

    pub fn grid_size(&self) -> usize {
        self.lift.len()
    }

    pub fn lift(&self) -> &[f64] {
        &self.lift
    }

    /// Lift value at a grid index shifted by whole periods.
    fn node(&self, j: isize) -> f64 {
        let n = self.lift.len() as isize;
        let wrap = j.div_euclid(n);
        let idx = j.rem_euclid(n) as usize;
        self.lift[idx] + wrap as f64 * std::f64::consts::TAU
    }

    /// Lift evaluated anywhere by periodic cubic Hermite interpolation with
    /// fourth-order slopes (error O(N⁻⁴) on smooth maps; exact at nodes).
    pub fn eval_lift(&self, s: f64) -> f64 {
        let n = self.lift.len();
        let tau = std::f64::consts::TAU;
        let k = (s / tau).floor();
        let s0 = s - k * tau; // in [0, 2π)
        let step = tau / n as f64;
        let j = ((s0 / step) as usize).min(n - 1) as isize;
        let u = (s0 - j as f64 * step) / step;
        let slope = |i: isize| {
            (-self.node(i + 2) + 8.0 * self.node(i + 1) - 8.0 * self.node(i - 1) + self.node(i - 2))
                / (12.0 * step)
        };
        let (p0, p1) = (self.node(j), self.node(j + 1));
        let (m0, m1) = (slope(j), slope(j + 1));
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * p0 + h10 * step * m0 + h01 * p1 + h11 * step * m1 + k * tau
    }

    /// (self ∘ other)(t) = self(other(t)), resampled on `other`'s grid via
    /// interpolation of this map's lift. Interpolation of an under-resolved
    /// map can break monotonicity, which is reported rather than repaired.
    pub fn compose(&self, other: &CircleMap) -> Result<CircleMap> {
        let lift: Vec<f64> = other.lift.iter().map(|&v| self.eval_lift(v)).collect();
        for i in 1..lift.len() {
            if lift[i] <= lift[i - 1] {
                return Err(Error::ResolutionFailure(format!(
                    "composition lost monotonicity at grid index {i}"
                )));
            }
        }
        Ok(CircleMap { lift })
    }

    /// C¹-flavored distance: sup of lift differences plus sup of
    /// first-difference discrepancies. Grids must match.
    pub fn distance(&self, other: &CircleMap) -> f64 {
        assert_eq!(
            self.lift.len(),
            other.lift.len(),
            "distance requires equal grids; resample first"
        );
        let n = self.lift.len();
        let sup = self
            .lift
            .iter()
            .zip(other.lift.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let tau = std::f64::consts::TAU;
        let mut dsup = 0.0f64;
        for i in 0..n {
            let (a2, b2) = if i + 1 == n {
                (self.lift[0] + tau, other.lift[0] + tau)
            } else {
                (self.lift[i + 1], other.lift[i + 1])
            };
            dsup = dsup.max(((a2 - self.lift[i]) - (b2 - other.lift[i])).abs());
        }
        sup + dsup
    }

    /// Displacement profile φ(tᵢ) − tᵢ.
    pub fn displacement(&self) -> Vec<f64> {
        let n = self.lift.len();
        self.lift
            .iter()
            .enumerate()
            .map(|(i, &v)| v - std::f64::consts::TAU * i as f64 / n as f64)
            .collect()
    }

    pub fn max_displacement(&self) -> f64 {
        self.displacement().iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    /// Resample onto a grid of `n` points by lift interpolation.
    pub fn resample(&self, n: usize) -> CircleMap {
        CircleMap {
            lift: (0..n)
                .map(|i| self.eval_lift(std::f64::consts::TAU * i as f64 / n as f64))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compose_with_identity() {
        let phi = CircleMap::rotation(64, 0.7);
        let id = CircleMap::identity(64);
        let c = id.compose(&phi).unwrap();
        for (a, b) in c.lift().iter().zip(phi.lift().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
        let c = phi.compose(&id).unwrap();
        for (a, b) in c.lift().iter().zip(phi.lift().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn rotations_compose_additively() {
        let a = CircleMap::rotation(128, 0.9);
        let b = CircleMap::rotation(128, 1.4);
        let c = a.compose(&b).unwrap();
        let expected = CircleMap::rotation(128, 2.3);
        assert!(c.distance(&expected) <= 1e-12);
    }

    #[test]
    fn from_angle_samples_unwraps_branches() {
        let n = 64;
        let angles: Vec<f64> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let phi = t + 0.3 * t.sin();
                f64::atan2(phi.sin(), phi.cos()) // fold into (-π, π]
            })
            .collect();
        let m = CircleMap::from_angle_samples(&angles).unwrap();
        for (i, &v) in m.lift().iter().enumerate() {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            assert_relative_eq!(v, t + 0.3 * t.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn non_monotone_samples_are_rejected() {
        let n = 32;
        let mut angles: Vec<f64> = (0..n)
            .map(|i| std::f64::consts::TAU * i as f64 / n as f64)
            .collect();
        angles.swap(3, 4);
        assert!(matches!(
            CircleMap::from_angle_samples(&angles),
            Err(Error::ResolutionFailure(_))
        ));
    }

    #[test]
    fn interpolation_error_shrinks_with_the_grid() {
        let smooth = |t: f64| t + 0.4 * t.sin();
        let build = |n: usize| {
            CircleMap::from_lift(
                (0..n)
                    .map(|i| smooth(std::f64::consts::TAU * i as f64 / n as f64))
                    .collect(),
            )
            .unwrap()
        };
        let coarse = build(256);
        let fine = build(512);
        let err = |m: &CircleMap, n: usize| {
            (0..4 * n)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / (4 * n) as f64;
                    (m.eval_lift(t) - smooth(t)).abs()
                })
                .fold(0.0, f64::max)
        };
        let e1 = err(&coarse, 256);
        let e2 = err(&fine, 512);
        assert!(
            e1 / e2 > 3.0,
            "expected ~4x error drop, got {e1:.3e}/{e2:.3e}"
        );
    }
}
