//! Floating-point abstraction shared by the scorers and the metrics.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// A real scalar usable for similarity scores: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless for counts below 2^24 (`f32`) or 2^53 (`f64`).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as float")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
