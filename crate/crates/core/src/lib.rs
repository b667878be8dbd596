//! Verification of the floor-product bound `G(K, ℤᵈ) <= ∏ ⌊2/λ_i(K) + 1⌋`
//! on o-symmetric boxes and Lp-balls, and its stability under rotation.
//!
//! Floating-point types are generic over [`Real`] (`f32` or `f64`); semi-axes
//! are exact [`Rational`]s. The `*64` and `*32` aliases below fix the scalar.

pub mod bhw;
pub mod bodies;
pub mod enumeration;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod minima;
pub mod scalar;
pub mod stability;

pub use bhw::{floor_inequality_check, floor_safe, rhs_functional, verify, Status, Verdict};
pub use bodies::{
    box_gauge_opnorm, AxisBox, Body, Exponent, GaugeValue, LpBall, Membership, RotatedBox, Rotation,
    Transform, TransformedBox,
};
pub use enumeration::{
    bounding_half_widths, count_box_closed_form, count_lattice_points, list_lattice_points, CountMethod,
    CountResult, EnumConfig,
};
pub use error::{Error, Result};
pub use linalg::{euclidean_opnorm, Matrix};
pub use lp::{
    count_lp, empirical_threshold, integer_alpha_exclusion_check, p_threshold, threshold_sufficiency_check,
    ThresholdReport,
};
pub use minima::{box_minima_closed_form, check_minima_sandwich, successive_minima, MinimaResult, SandwichReport};
pub use scalar::{parse_rational, Rational, Real};
pub use stability::{
    basis_gauge_check, corner_exclusion_check, givens_rotation, isolation_distance, random_rotation,
    rotation_sweep, stability_radius, StabilityReport, SweepRecord,
};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Rotation64 = Rotation<f64>;
pub type Rotation32 = Rotation<f32>;
pub type Transform64 = Transform<f64>;
pub type Transform32 = Transform<f32>;
pub type Body64 = Body<f64>;
pub type Body32 = Body<f32>;
pub type Verdict64 = Verdict<f64>;
pub type Verdict32 = Verdict<f32>;
pub type MinimaResult64 = MinimaResult<f64>;
pub type MinimaResult32 = MinimaResult<f32>;
