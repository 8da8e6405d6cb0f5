//! Scalar abstraction for the numeric kernel.

use std::fmt;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the engine computes with (`f32` or `f64`).
pub trait Real: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn c<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("constant must be representable in the scalar type")
}

/// Lossy view of a scalar for error messages.
pub(crate) fn show<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
