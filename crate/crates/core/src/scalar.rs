//! Scalar abstraction shared by every module.
//!
//! All geometry in this crate is rational in its inputs, so the only thing a
//! scalar type has to provide is ordinary floating point arithmetic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type the crate is generic over (`f32`, `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `tol` clamped from below to a small multiple of machine epsilon, so
    /// that f64-calibrated tolerances stay meaningful in lower precision.
    #[inline]
    fn tol(tol: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(tol).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sign of `x` with a dead band of half-width `tol`.
#[inline]
pub(crate) fn sign_with_tol<T: Scalar>(x: T, tol: T) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

#[inline]
pub(crate) fn sq<T: Scalar>(x: T) -> T {
    x * x
}
