//! Scalar abstraction shared by every model.
//!
//! All formulas are written once against [`Real`] and instantiated for
//! `f32` and `f64`. The CLI and the sweep machinery use `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the model can be evaluated in: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Nonnegative root of `a·x² − b·x − c = 0` for `a > 0`, `c ≥ 0`.
///
/// Picks whichever of the two algebraically equal forms avoids cancellation:
/// `(b + √(b² + 4ac)) / 2a` when `b ≥ 0`, `2c / (√(b² + 4ac) − b)` otherwise.
pub(crate) fn positive_root<T: Real>(a: T, b: T, c: T) -> T {
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let disc = b.hypot((four * a * c).sqrt());
    if b >= T::zero() {
        (b + disc) / (two * a)
    } else {
        let denom = disc - b;
        if denom == T::zero() {
            T::zero()
        } else {
            two * c / denom
        }
    }
}
