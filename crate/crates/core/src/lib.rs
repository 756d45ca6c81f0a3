//! Generalized divided differences and convexity with respect to
//! Chebyshev systems.
//!
//! A Chebyshev system `ω = (ω_1, ..., ω_n)` is positive over a set `H` when
//! the collocation determinant `Φ_ω(x_1, ..., x_n) = det[ω_i(x_j)]` is
//! positive for every `x_1 < ... < x_n` in `H`. This crate evaluates those
//! determinants, the divided differences built from them, and the
//! grid-relative convexity and variation checks that depend on them, on an
//! exact rational backend and on `f64`.

pub mod convexity;
pub mod determinant;
pub mod divdiff;
pub mod domain;
pub mod error;
pub mod function;
pub mod induced;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod system;
pub mod systems;
pub mod tuple;
pub mod variation;

pub use convexity::{
    check_convex_direct, check_convex_induced, check_convex_interval, cross_mode_agreement, identity_fid1_check,
    identity_fid_check, is_strictly_convex, AgreementReport, ConvexityVerdict, Mode, Outcome,
};
pub use determinant::{det, is_positive_chebyshev, phi, sylvester_check, sylvester_minor, Matrix, Verdict};
pub use divdiff::{classical_divdiff, complete_homogeneous, omega_divdiff, DividedDifference};
pub use domain::{Domain, Interval};
pub use error::{Error, Result};
pub use induced::{build_induced, identity_id, sign_index, verify_sign_formula, verify_theorem1, InducedSystem, SignIndex};
pub use function::{evaluate, FunctionSpec, ScalarFunction};
pub use sampling::CheckConfig;
pub use scalar::{rat, Backend, Field, Rational, Scalar};
pub use system::{ChebyshevSystem, FunctionSystem};
pub use systems::{
    catalog_entry, one_xsq_system, polynomial_system, trig_even_system, trig_odd_system, SystemCatalogEntry,
};
pub use tuple::{validate_tuple, OrderingClass, PointTuple};
pub use variation::{
    check_theorem3, default_anchors, estimate_variation, variation_bound, variation_sum, Partition, Refinement, VariationEstimate,
};
