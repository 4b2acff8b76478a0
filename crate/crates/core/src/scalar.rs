use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the solver is generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + Sum + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Default relative tolerance for equality decisions and objective ties.
    fn rel_tol() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(1e4))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `|a - b| <= tol * max(1, |a|, |b|)`.
    fn approx_eq(self, other: Self, tol: Self) -> bool {
        let scale = Self::one().max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for [`Scalar::lit`].
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}
