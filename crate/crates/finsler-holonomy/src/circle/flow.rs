//! Exponential map: the time-s flow of a circle vector field as a circle
//! diffeomorphism.

use crate::circle::fourier::CircleVectorField;
use crate::circle::map::CircleMap;
use crate::error::{Error, Result};
use crate::ode::{integrate_dp45, OdeSettings};

/// Integrate dθ/ds = f(θ) from every grid point for time `s`. The flow of a
/// 2π-periodic field commutes with the deck translation, so the integrated
/// values are directly a lift.
pub fn exp_flow(
    field: &CircleVectorField,
    s: f64,
    n: usize,
    settings: &OdeSettings,
) -> Result<CircleMap> {
    if n < 16 {
        return Err(Error::ResolutionFailure(format!(
            "flow grid {n} is below the minimum of 16"
        )));
    }
    if s == 0.0 {
        return Ok(CircleMap::identity(n));
    }
    let (t0, t1, forward) = if s > 0.0 {
        (0.0, s, true)
    } else {
        (0.0, -s, false)
    };
    let mut lift = Vec::with_capacity(n);
    for i in 0..n {
        let theta0 = std::f64::consts::TAU * i as f64 / n as f64;
        let rhs = |_t: f64, y: &[f64; 1]| -> Result<[f64; 1]> {
            let v = field.eval(y[0]);
            Ok([if forward { v } else { -v }])
        };
        let sol = integrate_dp45(rhs, t0, t1, [theta0], settings, |_, _| true)?;
        lift.push(sol.y[0]);
    }
    CircleMap::from_lift(lift)
}
