//! Scalar abstraction: everything in the library is generic over the working
//! floating-point type, with `f64` as the default for actual runs.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable for grid fields and spectral solves.
///
/// Implemented for `f32` and `f64`. The `FftNum` bound is what allows one
/// [`crate::spectral::SpectralWorkspace`] implementation to serve both widths.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + FftNum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + fmt::Display
    + fmt::LowerExp
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Convert an `f64` constant into the working scalar type.
#[inline]
pub fn cast<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("constant not representable in scalar type")
}
