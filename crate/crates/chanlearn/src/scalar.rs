//! Scalar abstraction shared by every numeric type in the crate.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Real field usable as the scalar of complex operators.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the docs are for
/// `f64`; for lower precision they are widened by [`tol`].
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + LowerExp + Debug + Default + Send + Sync + 'static
{
    /// Converts a literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    fn machine_eps() -> Self;

    /// Smallest positive normal value.
    fn min_positive() -> Self;
}

impl Real for f32 {
    fn machine_eps() -> Self {
        f32::EPSILON
    }

    fn min_positive() -> Self {
        f32::MIN_POSITIVE
    }
}

impl Real for f64 {
    fn machine_eps() -> Self {
        f64::EPSILON
    }

    fn min_positive() -> Self {
        f64::MIN_POSITIVE
    }
}

/// A tolerance of `t`, or a few thousand ulps when the scalar cannot resolve `t`.
pub fn tol<T: Real>(t: f64) -> T {
    let floor = T::machine_eps() * T::lit(1000.0);
    let t = T::lit(t);
    if t > floor {
        t
    } else {
        floor
    }
}
