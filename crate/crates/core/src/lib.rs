//! Periodic structure of piecewise monotone contracting interval maps.
//!
//! - [`farey`]: rationals, characteristic sequences, the Stern–Brocot tree.
//! - [`linear`]: closed forms for the linear model `S(x) = αx + β mod 1`.
//! - [`piecewise`]: general maps, assumption checks, orbit detection.
//! - [`tongue`]: tongue intervals of one-parameter families.
//! - [`conjugacy`]: numerical conjugacy with the linear model.
//!
//! The numerical code is generic over [`scalar::Real`]; the closed forms also
//! accept exact rationals. The aliases below fix the usual choices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjugacy;
pub mod farey;
pub mod linear;
pub mod numeric;
pub mod piecewise;
pub mod scalar;
pub mod tongue;

pub use num_rational::BigRational;
pub use twofloat::TwoFloat;

pub use conjugacy::{build_homeomorphism, verify_conjugacy, ConjugacyCheck, ConjugacyError, ConjugacyOptions};
pub use farey::{char_seq, mediant_concat, stern_brocot, CharSeq, Fraction, Rational};
pub use linear::{classify, periodic_points, preimage_zero_chain, region_boundaries, Classification, LinearParams};
pub use piecewise::{check_assumptions, detect_period, PiecewiseMap};
pub use tongue::{farey_atlas, solve_in_tree, solve_tongue, FamilySpec, SolveOptions, TongueInterval};

/// Linear parameters in double precision.
pub type Linear = LinearParams<f64>;
/// Linear parameters with exact rational entries.
pub type ExactLinear = LinearParams<BigRational>;
/// Linear parameters in double-double precision.
pub type WideLinear = LinearParams<TwoFloat>;
pub type Map = PiecewiseMap<f64>;
pub type WideMap = PiecewiseMap<TwoFloat>;
pub type Family = FamilySpec<f64>;
pub type Tongue = TongueInterval<f64>;
pub type Conjugacy = conjugacy::ConjugacyMap<f64>;
