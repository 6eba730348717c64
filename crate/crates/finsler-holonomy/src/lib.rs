//! Numerics for the holonomy of Finsler 2-manifolds.
//!
//! The crate spans the full computational chain from a Finsler norm to the
//! algebra of circle vector fields its holonomy generates:
//!
//! - [`jet`] — forward-mode derivative towers (the differentiation engine),
//! - [`metrics`] — the metric catalog (Funk disk, origin data of the
//!   Bryant-Shen spheres, Euclidean baseline),
//! - [`spray`] — fundamental tensor, geodesic spray, nonlinear connection,
//!   Berwald coefficients, curvature tensor, flag-curvature extraction,
//! - [`transport`] — geodesics, nonlinear parallel transport, loop holonomy,
//!   small-loop curvature extraction,
//! - [`circle`] — Fourier fields on S¹, Lie brackets and bracket closure,
//!   flows, circle-map arithmetic, covariant-derivative fields on the
//!   indicatrix and the generator-field verification report,
//! - [`suite`] — the aggregated verification suite used by the CLI and the
//!   acceptance tests.

pub mod circle;
pub mod error;
pub mod jet;
pub mod metrics;
pub mod ode;
pub mod sample;
pub mod spray;
pub mod suite;
pub mod transport;

pub use error::{Error, Result};
pub use metrics::{FinslerMetric, MetricKind};
