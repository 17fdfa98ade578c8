//! Scalar abstraction for the model math.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the momentum formulas are evaluated in: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or configuration value.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 is representable")
    }

    /// Conversion from a point or attempt count.
    fn of_count(count: u64) -> Self {
        Self::from_u64(count).expect("count is representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
