//! The circle-field toolkit: Fourier fields on S¹, Lie brackets and their
//! closure, flows, circle-map arithmetic, indicatrix charts and the
//! covariant-derivative fields feeding the generator verification.

pub mod bracket;
pub mod chart;
pub mod fields;
pub mod flow;
pub mod fourier;
pub mod map;
pub mod theorem;

pub use bracket::{
    bracket_closure, lie_bracket, lie_bracket_full, standard_generators, ClosureReport,
};
pub use chart::IndicatrixChart;
pub use fields::{
    berwald_derivative_field, curvature_field, restrict_to_indicatrix, BerwaldDerivative,
    CurvatureField, FiberField, RestrictionInfo, ZeroField,
};
pub use flow::exp_flow;
pub use fourier::{CircleVectorField, SpectrumInfo};
pub use map::CircleMap;
pub use theorem::{
    check_condition_a, check_condition_b, expected_generator_fields, second_berwald_fields,
    verify_theorem, AlgebraReport, ConditionA, ConditionB, FieldComparison, SecondBerwald,
    SpanningReport,
};
