//! Scalar abstraction shared by the linear algebra, boundary and SA code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A relative tolerance that is never tighter than a few ulps of `Self`.
    #[inline]
    fn rel_tol(requested: f64) -> Self {
        let floor = 8.0 * Self::epsilon().to_f64_lossy();
        Self::lit(requested.max(floor))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
