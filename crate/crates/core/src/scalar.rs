//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the model is evaluated in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn from_count<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// `10^(db/10)`.
#[inline]
pub fn db_to_linear<T: Real>(db: T) -> T {
    lit::<T>(10.0).powf(db / lit(10.0))
}

/// `10·log10(x)`.
#[inline]
pub fn linear_to_db<T: Real>(x: T) -> T {
    lit::<T>(10.0) * x.log10()
}

/// Relative magnitude below which a phasor sum is treated as an exact null.
///
/// Sums that cancel analytically land a few ulps away from zero in floating
/// point; anything within this many multiples of machine epsilon of the
/// fully coherent magnitude is reported as a null.
#[inline]
pub fn null_ratio<T: Real>() -> T {
    T::epsilon() * lit(64.0)
}
