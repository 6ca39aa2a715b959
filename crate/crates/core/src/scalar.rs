use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the collocation machinery is generic over.
///
/// Implemented for `f32` and `f64`. The reference experiments all
/// run in `f64`; `f32` is useful for quick low-accuracy sweeps.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `ln(1 + e^w)` without overflow for large `w`.
#[inline]
pub(crate) fn softplus<T: Real>(w: T) -> T {
    w.max(T::zero()) + (-w.abs()).exp().ln_1p()
}

/// Logistic function `1 / (1 + e^{-w})`, evaluated branch-wise.
#[inline]
pub(crate) fn logistic<T: Real>(w: T) -> T {
    if w >= T::zero() {
        T::one() / (T::one() + (-w).exp())
    } else {
        let e = w.exp();
        e / (T::one() + e)
    }
}
