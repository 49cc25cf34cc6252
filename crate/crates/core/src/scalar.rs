//! Scalar abstraction for the rank-correlation math.
//!
//! Everything numeric in this crate is generic over [`Real`] so the same
//! formulas run in `f32` or `f64`. The dataset and harness layers pin `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the indicator math.
pub trait Real:
    Float + FromPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Converts a compile-time constant; panics only if the target type
    /// cannot represent ordinary literals, which no `Float` impl does.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("float constant")
    }

    /// Converts a count or index into the scalar type.
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize fits in float")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
}
