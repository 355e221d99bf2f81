//! Scalar abstraction: the solver is generic over the floating-point type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar for all numerical routines in this crate.
///
/// Implemented for `f32` and `f64`. The reference results in
/// [`crate::benchmarks`] assume `f64`; `f32` works but loses accuracy.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn cast(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in scalar type")
    }

    /// Converts a count into `Self`.
    fn cast_usize(value: usize) -> Self {
        Self::from_usize(value).expect("count representable in scalar type")
    }

    /// Lossy view as `f64`, for diagnostics and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Veltkamp splitting constant `2^ceil(p/2) + 1` for a `p`-bit mantissa;
    /// used by the compensated Horner evaluation.
    fn veltkamp_splitter() -> Self;
}

impl Real for f32 {
    fn veltkamp_splitter() -> Self {
        4097.0 // 2^12 + 1
    }
}

impl Real for f64 {
    fn veltkamp_splitter() -> Self {
        134_217_729.0 // 2^27 + 1
    }
}
