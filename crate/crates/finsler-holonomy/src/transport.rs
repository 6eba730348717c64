//! Geodesics, nonlinear parallel transport, loop holonomy and the small-loop
//! curvature limit.
//!
//! Transport solves dXⁱ/dt + Gⁱ_j(c(t), X) ċʲ(t) = 0 along piecewise-smooth
//! curves. The map it induces between indicatrices depends only on the
//! oriented trace of the curve, and it preserves the Finsler norm; the
//! recorded drift of F(c(t), X(t)) is the primary solver-health signal.

use crate::circle::chart::IndicatrixChart;
use crate::circle::fourier::{CircleVectorField, SpectrumInfo};
use crate::circle::map::CircleMap;
use crate::error::{Error, Result};
use crate::metrics::FinslerMetric;
use crate::ode::{integrate_dp45, OdeSettings};
use crate::spray::connection_at;
use rayon::prelude::*;

/// Curves shorter than this are treated as degenerate points.
pub const DEGENERATE_LENGTH: f64 = 1e-12;
/// Closedness tolerance for loops.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Empirically fixed orientation convention: transporting around the
/// positively oriented coordinate square (base → +e₁ → +e₂ → −e₁ → −e₂)
/// displaces indicatrix angles by +s²·dθ(ξ) + O(s³), where ξ = R(∂₁, ∂₂).
/// The small-loop field therefore matches the curvature field with sign +1.
pub const SQUARE_LOOP_FIELD_SIGN: f64 = 1.0;

/// One smooth piece of a curve, parameterized over [0, 1].
#[derive(Clone, Copy, Debug)]
pub enum Segment {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    /// Circular arc around `center`, angles in radians.
    Arc {
        center: [f64; 2],
        radius: f64,
        from_angle: f64,
        to_angle: f64,
    },
}

impl Segment {
    pub fn point(&self, t: f64) -> [f64; 2] {
        match *self {
            Segment::Line { from, to } => [
                from[0] + t * (to[0] - from[0]),
                from[1] + t * (to[1] - from[1]),
            ],
            Segment::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => {
                let a = from_angle + t * (to_angle - from_angle);
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            }
        }
    }

    pub fn velocity(&self, t: f64) -> [f64; 2] {
        match *self {
            Segment::Line { from, to } => [to[0] - from[0], to[1] - from[1]],
            Segment::Arc {
                center: _,
                radius,
                from_angle,
                to_angle,
            } => {
                let sweep = to_angle - from_angle;
                let a = from_angle + t * sweep;
                [-radius * sweep * a.sin(), radius * sweep * a.cos()]
            }
        }
    }

    pub fn start(&self) -> [f64; 2] {
        self.point(0.0)
    }

    pub fn end(&self) -> [f64; 2] {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc {
                center,
                radius,
                from_angle,
                to_angle,
            } => Segment::Arc {
                center,
                radius,
                from_angle: to_angle,
                to_angle: from_angle,
            },
        }
    }

    /// Chord-polygon length estimate, enough to drop degenerate pieces.
    fn approx_length(&self) -> f64 {
        let mut len = 0.0;
        let mut prev = self.point(0.0);
        for k in 1..=16 {
            let p = self.point(k as f64 / 16.0);
            len += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2)).sqrt();
            prev = p;
        }
        len
    }
}

/// Piecewise-smooth closed curve; counterclockwise is the positive
/// orientation convention.
#[derive(Clone, Debug)]
pub struct LoopCurve {
    segments: Vec<Segment>,
}

impl LoopCurve {
    /// Build from segments, dropping degenerate pieces and validating
    /// closedness.
    pub fn new(segments: Vec<Segment>) -> Result<LoopCurve> {
        let kept: Vec<Segment> = segments
            .into_iter()
            .filter(|s| s.approx_length() > DEGENERATE_LENGTH)
            .collect();
        if kept.is_empty() {
            return Ok(LoopCurve { segments: kept });
        }
        for w in kept.windows(2) {
            let (a, b) = (w[0].end(), w[1].start());
            if (a[0] - b[0]).abs() > CLOSURE_TOL || (a[1] - b[1]).abs() > CLOSURE_TOL {
                return Err(Error::Parse(format!(
                    "curve segments do not chain: {a:?} vs {b:?}"
                )));
            }
        }
        let (a, b) = (kept.last().unwrap().end(), kept[0].start());
        if (a[0] - b[0]).abs() > CLOSURE_TOL || (a[1] - b[1]).abs() > CLOSURE_TOL {
            return Err(Error::Parse(format!(
                "loop does not close: ends at {a:?}, starts at {b:?}"
            )));
        }
        Ok(LoopCurve { segments: kept })
    }

    /// Positively oriented coordinate square based at `base`:
    /// base → +e₁ → +e₂ → −e₁ → −e₂.
    pub fn square(base: [f64; 2], side: f64) -> LoopCurve {
        let (bx, by) = (base[0], base[1]);
        let s = side;
        LoopCurve::new(vec![
            Segment::Line {
                from: [bx, by],
                to: [bx + s, by],
            },
            Segment::Line {
                from: [bx + s, by],
                to: [bx + s, by + s],
            },
            Segment::Line {
                from: [bx + s, by + s],
                to: [bx, by + s],
            },
            Segment::Line {
                from: [bx, by + s],
                to: [bx, by],
            },
        ])
        .expect("square loop always closes")
    }

    /// Closed polyline through the given vertices (closing edge implied).
    pub fn polyline(points: &[[f64; 2]]) -> Result<LoopCurve> {
        if points.len() < 2 {
            return Err(Error::Parse("polyline needs at least two points".into()));
        }
        let mut segs = Vec::new();
        for w in points.windows(2) {
            segs.push(Segment::Line {
                from: w[0],
                to: w[1],
            });
        }
        segs.push(Segment::Line {
            from: *points.last().unwrap(),
            to: points[0],
        });
        LoopCurve::new(segs)
    }

    /// Loop mini-format: `square:<bx>,<by>,<s>` or
    /// `polyline:x1,y1;x2,y2;...` (closed automatically).
    pub fn parse(spec: &str) -> Result<LoopCurve> {
        if let Some(rest) = spec.strip_prefix("square:") {
            let nums: Vec<f64> = rest
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad square spec `{rest}`")))?;
            if nums.len() != 3 {
                return Err(Error::Parse("square spec needs bx,by,s".into()));
            }
            Ok(LoopCurve::square([nums[0], nums[1]], nums[2]))
        } else if let Some(rest) = spec.strip_prefix("polyline:") {
            let pts: Vec<[f64; 2]> = rest
                .split(';')
                .map(|p| {
                    let nums: Vec<f64> = p
                        .split(',')
                        .map(|s| s.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse(format!("bad polyline point `{p}`")))?;
                    if nums.len() != 2 {
                        return Err(Error::Parse(format!("polyline point `{p}` needs x,y")));
                    }
                    Ok([nums[0], nums[1]])
                })
                .collect::<Result<_>>()?;
            LoopCurve::polyline(&pts)
        } else {
            Err(Error::Parse(format!(
                "unknown loop spec `{spec}` (expected square:... or polyline:...)"
            )))
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn base_point(&self) -> Option<[f64; 2]> {
        self.segments.first().map(|s| s.start())
    }

    pub fn is_degenerate(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn reversed(&self) -> LoopCurve {
        LoopCurve {
            segments: self.segments.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Concatenation of two loops based at the same point.
    pub fn concat(&self, other: &LoopCurve) -> Result<LoopCurve> {
        let mut segs = self.segments.clone();
        segs.extend_from_slice(&other.segments);
        LoopCurve::new(segs)
    }
}

/// Result of one transport run.
#[derive(Clone, Copy, Debug)]
pub struct TransportOutcome {
    pub vector: [f64; 2],
    /// max_t |F(c(t), X(t)) − F(c(0), X(0))| over accepted steps.
    pub norm_drift: f64,
    pub steps: usize,
    pub rejected: usize,
}

/// Parallel transport of `y0` along a chain of segments.
pub fn parallel_transport(
    metric: &FinslerMetric,
    path: &[Segment],
    y0: [f64; 2],
    settings: &OdeSettings,
) -> Result<TransportOutcome> {
    let mut x = y0;
    let mut drift = 0.0f64;
    let mut steps = 0;
    let mut rejected = 0;
    let f0 = match path.first() {
        Some(seg) => metric.norm(seg.start(), y0)?,
        None => {
            return Ok(TransportOutcome {
                vector: y0,
                norm_drift: 0.0,
                steps: 0,
                rejected: 0,
            })
        }
    };
    for seg in path {
        let rhs = |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
            let c = seg.point(t);
            let cdot = seg.velocity(t);
            let conn = connection_at(metric, c, *y)?;
            Ok([
                -(conn[0][0] * cdot[0] + conn[0][1] * cdot[1]),
                -(conn[1][0] * cdot[0] + conn[1][1] * cdot[1]),
            ])
        };
        let mut seg_drift = 0.0f64;
        let observe = |t: f64, y: &[f64; 2]| {
            if let Ok(f) = metric.norm(seg.point(t), *y) {
                seg_drift = seg_drift.max((f - f0).abs());
            }
            true
        };
        let sol = integrate_dp45(rhs, 0.0, 1.0, x, settings, observe)?;
        if sol.y[0].hypot(sol.y[1]) < DEGENERATE_LENGTH {
            return Err(Error::Solver("transported vector collapsed to zero".into()));
        }
        x = sol.y;
        drift = drift.max(seg_drift);
        steps += sol.stats.steps;
        rejected += sol.stats.rejected;
    }
    Ok(TransportOutcome {
        vector: x,
        norm_drift: drift,
        steps,
        rejected,
    })
}

/// One geodesic sample (t, x, ẋ).
#[derive(Clone, Copy, Debug)]
pub struct GeodesicSample {
    pub t: f64,
    pub x: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicSample>,
    /// Set when integration halted at the domain boundary (or on step-size
    /// underflow), with the halt time.
    pub exit_time: Option<f64>,
}

/// Integrate ẍⁱ + 2Gⁱ(x, ẋ) = 0 from (x0, y0) for parameter time `t_end`.
pub fn geodesic(
    metric: &FinslerMetric,
    x0: [f64; 2],
    y0: [f64; 2],
    t_end: f64,
    settings: &OdeSettings,
) -> Result<GeodesicPath> {
    if y0 == [0.0, 0.0] {
        return Err(Error::ZeroFiberVector);
    }
    metric.norm(x0, y0)?;
    let rhs = |_t: f64, s: &[f64; 4]| -> Result<[f64; 4]> {
        let x = [s[0], s[1]];
        let v = [s[2], s[3]];
        let p = metric.projective_factor(x, v)?;
        Ok([v[0], v[1], -2.0 * p * v[0], -2.0 * p * v[1]])
    };
    let mut samples = vec![GeodesicSample {
        t: 0.0,
        x: x0,
        v: y0,
    }];
    let observe = |t: f64, s: &[f64; 4]| {
        let x = [s[0], s[1]];
        samples.push(GeodesicSample {
            t,
            x,
            v: [s[2], s[3]],
        });
        !metric.near_boundary(x)
    };
    match integrate_dp45(
        rhs,
        0.0,
        t_end,
        [x0[0], x0[1], y0[0], y0[1]],
        settings,
        observe,
    ) {
        Ok(sol) => Ok(GeodesicPath {
            samples,
            exit_time: sol.stopped_early.then_some(sol.t),
        }),
        Err(Error::Halted { t, .. }) => Ok(GeodesicPath {
            samples,
            exit_time: Some(t),
        }),
        Err(e) => Err(e),
    }
}

/// Holonomy of a loop as a circle map: each indicatrix grid direction is
/// transported independently around the loop and read back as an angle.
pub fn loop_holonomy(
    metric: &FinslerMetric,
    curve: &LoopCurve,
    n: usize,
    settings: &OdeSettings,
) -> Result<CircleMap> {
    if n < 16 {
        return Err(Error::ResolutionFailure(format!(
            "holonomy grid {n} is below the minimum of 16"
        )));
    }
    if curve.is_degenerate() {
        return Ok(CircleMap::identity(n));
    }
    let x0 = curve.base_point().expect("non-degenerate loop has a base");
    let chart = IndicatrixChart::new(metric, x0)?;
    let angles: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            let y = chart.point(t)?;
            let out = parallel_transport(metric, curve.segments(), y, settings)?;
            Ok(IndicatrixChart::angle(out.vector))
        })
        .collect::<Result<_>>()?;
    CircleMap::from_angle_samples(&angles)
}

/// Small-loop extraction report.
#[derive(Clone, Debug)]
pub struct SmallLoopReport {
    /// Extrapolated displacement field, displacement/s² → s = 0.
    pub field: CircleVectorField,
    /// Per-side raw fields (side, displacement/s²) in the order given.
    pub raw: Vec<(f64, CircleVectorField)>,
    /// Observed convergence order in s of displacement/s² (expected ≥ 1).
    pub observed_order: f64,
    pub converged: bool,
    pub spectrum: SpectrumInfo,
}

/// Neville extrapolation of tabulated values to s = 0.
fn neville_to_zero(ss: &[f64], vals: &[f64]) -> f64 {
    let n = ss.len();
    let mut q: Vec<f64> = vals.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let (s_lo, s_hi) = (ss[i], ss[i + level]);
            q[i] = (s_lo * q[i + 1] - s_hi * q[i]) / (s_lo - s_hi);
        }
    }
    q[0]
}

/// Extract the curvature vector field at `x0` from shrinking positively
/// oriented coordinate-square loops: the angle displacement of the side-s
/// loop, divided by s², Richardson-extrapolated over the given sides.
pub fn small_loop_field(
    metric: &FinslerMetric,
    x0: [f64; 2],
    sides: &[f64],
    n: usize,
    nmax: usize,
    settings: &OdeSettings,
) -> Result<SmallLoopReport> {
    if sides.len() < 3 {
        return Err(Error::Parse(
            "small-loop extraction needs at least 3 side lengths".into(),
        ));
    }
    if sides.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parse(
            "side lengths must be strictly decreasing".into(),
        ));
    }
    let mut profiles: Vec<Vec<f64>> = Vec::new();
    let mut raw = Vec::new();
    for &s in sides {
        let map = loop_holonomy(metric, &LoopCurve::square(x0, s), n, settings)?;
        let profile: Vec<f64> = map.displacement().iter().map(|d| d / (s * s)).collect();
        let (f, _) = CircleVectorField::from_samples(&profile, nmax);
        raw.push((s, f));
        profiles.push(profile);
    }
    // pointwise extrapolation to s = 0 over the grid
    let extrapolated: Vec<f64> = (0..n)
        .map(|i| {
            let vals: Vec<f64> = profiles.iter().map(|p| p[i]).collect();
            neville_to_zero(sides, &vals)
        })
        .collect();
    let (field, spectrum) = CircleVectorField::from_samples(&extrapolated, nmax);
    // observed order from the last three sides, sup norms of differences;
    // differences at the round-off floor mean the limit is already exact
    let m = sides.len();
    let d1 = raw[m - 3].1.sup_distance(&raw[m - 2].1);
    let d2 = raw[m - 2].1.sup_distance(&raw[m - 1].1);
    let ratio = sides[m - 3] / sides[m - 2];
    let observed_order = if d2 <= 1e-12 || d1 <= 1e-12 {
        f64::INFINITY
    } else {
        (d1 / d2).ln() / ratio.ln()
    };
    let converged = observed_order >= 0.5;
    Ok(SmallLoopReport {
        field,
        raw,
        observed_order,
        converged,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use approx::assert_relative_eq;

    fn funk() -> FinslerMetric {
        FinslerMetric::funk(1)
    }

    fn tight() -> OdeSettings {
        OdeSettings::default()
    }

    #[test]
    fn euclidean_transport_is_trivial() {
        let m = FinslerMetric::euclidean();
        let path = [
            Segment::Line {
                from: [0.0, 0.0],
                to: [1.5, 0.3],
            },
            Segment::Arc {
                center: [1.5, 1.3],
                radius: 1.0,
                from_angle: -std::f64::consts::FRAC_PI_2,
                to_angle: 0.7,
            },
        ];
        let out = parallel_transport(&m, &path, [0.4, -1.1], &tight()).unwrap();
        assert_relative_eq!(out.vector[0], 0.4, epsilon = 1e-12);
        assert_relative_eq!(out.vector[1], -1.1, epsilon = 1e-12);
        assert!(out.norm_drift <= 1e-12);
    }

    #[test]
    fn euclidean_geodesics_are_straight_lines() {
        let m = FinslerMetric::euclidean();
        let g = geodesic(&m, [0.2, -0.1], [0.5, 0.25], 2.0, &tight()).unwrap();
        assert!(g.exit_time.is_none());
        for s in &g.samples {
            assert_relative_eq!(s.x[0], 0.2 + s.t * 0.5, epsilon = 1e-10);
            assert_relative_eq!(s.x[1], -0.1 + s.t * 0.25, epsilon = 1e-10);
        }
    }

    #[test]
    fn funk_geodesic_from_origin_stays_on_the_axis() {
        let g = geodesic(&funk(), [0.0, 0.0], [1.0, 0.0], 3.0, &tight()).unwrap();
        let last = g.samples.last().unwrap();
        assert!(
            last.x[0] > 0.5,
            "geodesic should progress toward the boundary"
        );
        for s in &g.samples {
            assert!(s.x[1].abs() <= 1e-12);
            assert!(s.x[0] < 1.0);
        }
    }

    #[test]
    fn funk_geodesics_trace_chords() {
        let mut rng = sample::rng(43);
        for _ in 0..10 {
            let x0 = sample::interior_point(&mut rng, 0.5);
            let y0 = sample::fiber_vector(&mut rng, 0.3, 1.0);
            let g = geodesic(&funk(), x0, y0, 1.0, &tight()).unwrap();
            let norm = (y0[0] * y0[0] + y0[1] * y0[1]).sqrt();
            let dir = [y0[0] / norm, y0[1] / norm];
            for s in &g.samples {
                let d = [s.x[0] - x0[0], s.x[1] - x0[1]];
                let cross = (d[0] * dir[1] - d[1] * dir[0]).abs();
                assert!(cross <= 1e-8, "chord deviation {cross:.3e}");
            }
        }
    }

    #[test]
    fn funk_geodesic_halts_at_the_disk_boundary() {
        // on-axis dynamics give 1 − x = e^{−2t}, so the stop collar at
        // 1 − 1e-8 is reached near t = ln(1e8)/2 ≈ 9.2
        let g = geodesic(&funk(), [0.0, 0.0], [2.0, 0.0], 50.0, &tight()).unwrap();
        let t = g.exit_time.expect("integration must stop at the rim");
        let crossing = 0.5 * (1e8f64).ln();
        assert!(
            t >= crossing - 1e-6 && t < crossing + 0.6,
            "exit at t = {t}"
        );
        let last = g.samples.last().unwrap();
        assert!(last.x[0] > 1.0 - 1e-7, "halted at {:?}", last.x);
        assert!(last.x[0] < 1.0);
    }

    #[test]
    fn transport_preserves_the_norm_along_a_square() {
        let m = funk();
        let loop_ = LoopCurve::square([0.0, 0.0], 0.1);
        let out = parallel_transport(&m, loop_.segments(), [1.0, 0.0], &tight()).unwrap();
        let f_end = m.norm([0.0, 0.0], out.vector).unwrap();
        assert!(
            (f_end - 1.0).abs() <= 1e-8,
            "norm drift {}",
            (f_end - 1.0).abs()
        );
        assert!(out.norm_drift <= 1e-8);
    }

    #[test]
    fn transport_is_reversible() {
        let m = funk();
        let mut rng = sample::rng(47);
        for _ in 0..5 {
            let a = sample::interior_point(&mut rng, 0.5);
            let b = sample::interior_point(&mut rng, 0.5);
            let y0 = sample::fiber_vector(&mut rng, 0.5, 1.5);
            let fwd = [Segment::Line { from: a, to: b }];
            let bwd = [Segment::Line { from: b, to: a }];
            let mid = parallel_transport(&m, &fwd, y0, &tight()).unwrap();
            let back = parallel_transport(&m, &bwd, mid.vector, &tight()).unwrap();
            let err = ((back.vector[0] - y0[0]).powi(2) + (back.vector[1] - y0[1]).powi(2)).sqrt();
            let scale = (y0[0] * y0[0] + y0[1] * y0[1]).sqrt();
            assert!(err <= 1e-7 * scale, "reversal error {err:.3e}");
        }
    }

    #[test]
    fn geodesic_velocity_is_self_parallel() {
        // transporting the initial velocity along the geodesic trace keeps it
        // positively proportional to the ray direction
        let m = funk();
        let x0 = [0.1, 0.2];
        let y0 = [0.3, -0.1];
        let g = geodesic(&m, x0, y0, 1.0, &tight()).unwrap();
        let end = g.samples.last().unwrap();
        let path = [Segment::Line {
            from: x0,
            to: end.x,
        }];
        let out = parallel_transport(&m, &path, y0, &tight()).unwrap();
        let cross = out.vector[0] * y0[1] - out.vector[1] * y0[0];
        let dot = out.vector[0] * y0[0] + out.vector[1] * y0[1];
        assert!(
            cross.abs() <= 1e-8,
            "transported velocity left the ray: {cross:.3e}"
        );
        assert!(dot > 0.0);
    }

    #[test]
    fn euclidean_loops_have_identity_holonomy() {
        let m = FinslerMetric::euclidean();
        let map = loop_holonomy(&m, &LoopCurve::square([0.4, -0.2], 0.5), 32, &tight()).unwrap();
        assert!(map.max_displacement() <= 1e-10);
    }

    #[test]
    fn degenerate_loops_are_the_identity() {
        let m = funk();
        let tiny = LoopCurve::new(vec![Segment::Line {
            from: [0.1, 0.1],
            to: [0.1, 0.1],
        }])
        .unwrap();
        assert!(tiny.is_degenerate());
        let map = loop_holonomy(&m, &tiny, 32, &tight()).unwrap();
        assert!(map.max_displacement() == 0.0);
    }

    #[test]
    fn loop_concatenation_matches_map_composition() {
        let m = funk();
        let n = 256;
        let l1 = LoopCurve::square([0.0, 0.0], 0.25);
        let l2 = LoopCurve::polyline(&[[0.0, 0.0], [0.3, 0.05], [0.1, 0.25]]).unwrap();
        let m1 = loop_holonomy(&m, &l1, n, &tight()).unwrap();
        let m2 = loop_holonomy(&m, &l2, n, &tight()).unwrap();
        let chained = loop_holonomy(&m, &l1.concat(&l2).unwrap(), n, &tight()).unwrap();
        // traversing l1 then l2 composes the maps as τ₂ ∘ τ₁
        let composed = m2.compose(&m1).unwrap();
        let d = chained.distance(&composed);
        assert!(d <= 1e-8, "composition mismatch {d:.3e}");
        // and stays at the floor when the grid doubles
        let m1f = loop_holonomy(&m, &l1, 2 * n, &tight()).unwrap();
        let m2f = loop_holonomy(&m, &l2, 2 * n, &tight()).unwrap();
        let chainedf = loop_holonomy(&m, &l1.concat(&l2).unwrap(), 2 * n, &tight()).unwrap();
        let df = chainedf.distance(&m2f.compose(&m1f).unwrap());
        assert!(df <= 1e-8, "composition mismatch at 2N: {df:.3e}");
    }

    #[test]
    fn loop_spec_grammar() {
        assert!(LoopCurve::parse("square:0,0,0.2").is_ok());
        assert!(LoopCurve::parse("polyline:0,0;0.2,0;0.1,0.2").is_ok());
        assert!(LoopCurve::parse("circle:0,0,1").is_err());
        assert!(LoopCurve::parse("square:0,0").is_err());
    }
}
