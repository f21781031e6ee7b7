//! Scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Real`] so the same
//! algorithms run in `f32` or `f64`; the stated tolerances assume `f64`,
//! which is the default for every public type.

use core::fmt::{Debug, Display};
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used throughout the crate.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn fp<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("f64 constant must convert to the scalar type")
}

/// Converts a small nonnegative integer (an index or a degree) into the
/// working scalar type.
#[inline]
pub(crate) fn fi<F: Real>(v: usize) -> F {
    F::from_usize(v).expect("index must convert to the scalar type")
}
