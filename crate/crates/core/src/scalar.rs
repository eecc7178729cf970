//! Scalar abstractions.
//!
//! Closed-form formulas (tongue boundaries, periodic points, preimage chains)
//! only need field arithmetic and ordering, so they are written against
//! [`Scalar`] and work for `f32`, `f64`, double-double and exact rationals.
//! Everything that bisects, takes absolute values or iterates to a tolerance
//! needs [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Ordered field elements usable by the closed-form routines.
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    /// Small integer constant.
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("small integers are representable")
    }

    /// Approximate value for diagnostics.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {}

/// Floating point scalars: `f32`, `f64`, [`twofloat::TwoFloat`].
pub trait Real: Scalar + Float + Copy + Send + Sync + 'static {
    /// Converts an `f64` literal (tolerances, grid coordinates).
    fn lit(v: f64) -> Self {
        // `FromPrimitive::from_f64` truncates to an integer for some wrapper types
        <Self as num_traits::NumCast>::from(v).expect("finite literal")
    }
}

impl<T> Real for T where T: Scalar + Float + Copy + Send + Sync + 'static {}

/// Exact rational value of a finite float.
pub fn exact_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

/// Nearest `f64` to an exact rational.
pub fn exact_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Rounds an exact rational into a float type with more than double
/// precision by splitting it into a leading `f64` and the rounded remainder.
pub fn exact_to_real<T: Real>(v: &BigRational) -> T {
    let hi = exact_to_f64(v);
    let rest = v - exact_from_f64(hi);
    T::lit(hi) + T::lit(exact_to_f64(&rest))
}

/// `num/den` as an exact rational.
pub fn exact_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
