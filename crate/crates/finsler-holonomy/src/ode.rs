//! Adaptive Dormand-Prince 5(4) integration with a fixed-step classical RK4
//! fallback for cross-checks.
//!
//! The right-hand side may fail (metric domain errors near the disk
//! boundary); a failing trial step is treated like a rejected step and the
//! step size shrinks, so integration halts cleanly at the domain edge with
//! the halt time reported.

use crate::error::{Error, Result};

const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Copy, Debug)]
pub struct OdeSettings {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` uses a fraction of the interval.
    pub h0: Option<f64>,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings {
            rtol: 1e-10,
            atol: 1e-10,
            h0: None,
            h_min: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Solution<const N: usize> {
    pub y: [f64; N],
    /// Time actually reached (t1, or earlier when the observer stopped).
    pub t: f64,
    pub stats: OdeStats,
    pub stopped_early: bool,
}

/// Integrate y' = f(t, y) from `t0` to `t1` (t1 > t0). The observer runs
/// after every accepted step and returns whether to keep integrating;
/// returning `false` ends the run at that step (event detection without
/// starving the step size against a hard domain guard).
pub fn integrate_dp45<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    settings: &OdeSettings,
    mut observer: O,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(f64, &[f64; N]) -> bool,
{
    let mut stats = OdeStats::default();
    if t1 <= t0 {
        return Err(Error::Solver(format!("empty interval [{t0}, {t1}]")));
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = settings.h0.unwrap_or(span / 100.0).min(span);
    let mut k0 = f(t, &y)?; // FSAL
    stats.rhs_evals += 1;
    let mut last_failure: Option<Error> = None;
    // after any rejection, hold the step size until a clean accept; this
    // breaks the grow/fail cycle at domain edges
    let mut just_rejected = false;

    while t < t1 {
        if stats.steps + stats.rejected > settings.max_steps {
            return Err(Error::Solver(format!(
                "step budget {} exhausted at t = {t}",
                settings.max_steps
            )));
        }
        h = h.min(t1 - t);
        if h < settings.h_min {
            let reason = match &last_failure {
                Some(e) => format!("step size underflow after: {e}"),
                None => "step size underflow".into(),
            };
            return Err(Error::Halted { t, reason });
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k0;
        let mut failed = false;
        for s in 0..6 {
            let mut ys = y;
            for (l, kl) in k.iter().enumerate().take(s + 1) {
                let a = A[s][l];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kl[i];
                    }
                }
            }
            stats.rhs_evals += 1;
            match f(t + C[s] * h, &ys) {
                Ok(v) => k[s + 1] = v,
                Err(e) => {
                    last_failure = Some(e);
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            stats.rejected += 1;
            just_rejected = true;
            h *= 0.5;
            continue;
        }

        let mut y_new = y;
        for (l, kl) in k.iter().enumerate() {
            if B5[l] != 0.0 {
                for i in 0..N {
                    y_new[i] += h * B5[l] * kl[i];
                }
            }
        }
        // scaled RMS error of the embedded 4th-order difference
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (l, kl) in k.iter().enumerate() {
                e += E[l] * kl[i];
            }
            e *= h;
            let scale = settings.atol + settings.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y = y_new;
            k0 = k[6]; // FSAL: stage 7 is f(t_new, y_new)
            stats.steps += 1;
            if !observer(t, &y) {
                return Ok(Solution {
                    y,
                    t,
                    stats,
                    stopped_early: true,
                });
            }
            let cap = if just_rejected { 1.0 } else { 5.0 };
            let factor = if err == 0.0 {
                cap
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, cap)
            };
            h *= factor;
            just_rejected = false;
        } else {
            stats.rejected += 1;
            just_rejected = true;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0).min(0.9);
        }
    }
    Ok(Solution {
        y,
        t,
        stats,
        stopped_early: false,
    })
}

/// Classical fixed-step RK4 over `nsteps` equal steps; the cross-check
/// integrator.
pub fn integrate_rk4<const N: usize, F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [f64; N],
    nsteps: usize,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let h = (t1 - t0) / nsteps as f64;
    let mut t = t0;
    let mut y = y0;
    let axpy = |y: &[f64; N], s: f64, k: &[f64; N]| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    for _ in 0..nsteps {
        let k1 = f(t, &y)?;
        let k2 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let k3 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let k4 = f(t + h, &axpy(&y, h, &k3))?;
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay() {
        let sol = integrate_dp45(
            |_, y: &[f64; 1]| Ok([-y[0]]),
            0.0,
            1.0,
            [1.0],
            &OdeSettings::default(),
            |_, _| true,
        )
        .unwrap();
        assert_relative_eq!(sol.y[0], (-1.0f64).exp(), epsilon = 1e-10);
        assert!(sol.stats.steps > 0);
        assert!(!sol.stopped_early);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let sol = integrate_dp45(
            |_, y: &[f64; 2]| Ok([y[1], -y[0]]),
            0.0,
            20.0 * std::f64::consts::PI,
            [1.0, 0.0],
            &OdeSettings::default(),
            |_, _| true,
        )
        .unwrap();
        let y = sol.y;
        assert_relative_eq!(y[0] * y[0] + y[1] * y[1], 1.0, epsilon = 1e-8);
        assert_relative_eq!(y[0], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn adaptive_and_fixed_step_agree() {
        let rhs = |t: f64, y: &[f64; 2]| Ok([y[1], -(1.0 + 0.3 * t.sin()) * y[0]]);
        let a = integrate_dp45(
            rhs,
            0.0,
            5.0,
            [0.3, -0.2],
            &OdeSettings::default(),
            |_, _| true,
        )
        .unwrap()
        .y;
        let b = integrate_rk4(rhs, 0.0, 5.0, [0.3, -0.2], 20_000).unwrap();
        assert_relative_eq!(a[0], b[0], epsilon = 1e-9);
        assert_relative_eq!(a[1], b[1], epsilon = 1e-9);
    }

    #[test]
    fn observer_can_stop_integration() {
        let sol = integrate_dp45(
            |_, _y: &[f64; 1]| Ok([1.0]),
            0.0,
            10.0,
            [0.0],
            &OdeSettings::default(),
            |_, y| y[0] < 2.0,
        )
        .unwrap();
        assert!(sol.stopped_early);
        assert!(sol.t < 10.0);
        assert!(
            sol.y[0] >= 2.0,
            "stopped at the first sample past the event"
        );
    }

    #[test]
    fn halts_when_rhs_leaves_domain() {
        // RHS defined only for y < 1: blows past it, solver must halt
        let r = integrate_dp45(
            |_, y: &[f64; 1]| {
                if y[0] >= 1.0 {
                    Err(Error::OutsideDomain("y >= 1".into()))
                } else {
                    Ok([1.0])
                }
            },
            0.0,
            2.0,
            [0.0],
            &OdeSettings::default(),
            |_, _| true,
        );
        match r {
            Err(Error::Halted { t, .. }) => assert_relative_eq!(t, 1.0, epsilon = 1e-6),
            other => panic!("expected halt near t = 1, got {other:?}"),
        }
    }
}
