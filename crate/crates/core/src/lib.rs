//! Exact discrete Hardy–Littlewood maximal functions on `ℤ^d` and the
//! variation bounds they satisfy.
//!
//! Everything is generic over a [`Scalar`]: machine integers, big integers,
//! rationals or floats. Certification paths use [`Rational`]; floats are
//! available for exploration.

pub mod battery;
pub mod constants;
pub mod error;
pub mod gridfn;
pub mod lattice;
pub mod maxop;
pub mod oracle;
pub mod scalar;
pub mod strings;
pub mod varanalysis;
pub mod verify;

pub use error::{Error, Result};
pub use gridfn::{line_restriction, lp_norm, total_variation, AxisLine, Exponent, Grid, GridFunction, NormValue};
pub use lattice::{
    admissible_boxes_through, check_gap_monotonicity, check_log_concavity, l1_ball_count, l1_ball_points,
    LatticeBox, LatticePoint, ShellTable,
};
pub use maxop::{
    average, centered_max_1d, centered_max_l1, delta_centered_l1_closed_form, delta_uncentered_cube_closed_form,
    evaluate_on_box, maximal_witness, uncentered_max_1d, uncentered_max_cube, ArgmaxWitness, AveragingSet,
    BallSpec, Geometry, MaximalEvaluator, WitnessSet,
};
pub use constants::{
    centered_1d_sharp_constant, centered_constant_partial, constant_enclosure, uncentered_constant_partial,
    ConstantEnclosure, ConstantKind, CENTERED_1D_SHARP_CONSTANT,
};
pub use scalar::{format_decimal, format_rational, parse_rational, Average, Field, Scalar};
pub use strings::{string_decomposition, StringDecomposition, TailContract};
pub use varanalysis::{
    adaptive_variation, delta_variation_closed_form, line_contribution_cap_cube, line_contribution_cap_l1,
    truncated_variation_maxfn, StopReason, VariationReport,
};
pub use verify::{
    random_gridfn, scan_extremizers, verify_inequality, verify_uncentered_var_bound_1d, ScanFamily,
    SharpnessRecord,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational scalar used for certification.
pub type Rational = BigRational;
/// Finitely supported function with exact rational values.
pub type ExactGridFunction = GridFunction<BigRational>;
/// Finitely supported function with integer values.
pub type IntegerGridFunction = GridFunction<i128>;
/// Finitely supported function with floating-point values.
pub type FloatGridFunction = GridFunction<f64>;
