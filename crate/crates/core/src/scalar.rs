//! Floating scalar abstraction for the continuous layer.

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// Exact arithmetic (ring elements, ideals, forms) is integer-based and does
/// not go through this trait; only hyperbolic geometry and analytic series do.
pub trait Real: Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static {
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }

    fn from_i64_lossy(x: i64) -> Self {
        Self::from_i64(x).expect("i64 conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an exact rational to the scalar type.
pub fn ratio_to_real<R: Real>(q: num_rational::Ratio<i64>) -> R {
    R::from_i64_lossy(*q.numer()) / R::from_i64_lossy(*q.denom())
}
