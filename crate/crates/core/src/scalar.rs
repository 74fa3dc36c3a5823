//! Scalar abstraction: the numeric core is generic over the float type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the numeric core: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Sum + Display + Debug + Default + 'static {
    /// Lossy conversion from an `f64` configuration value (tolerances etc).
    fn from_config(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any scalar")
    }

    /// Conversion from a count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to any scalar")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Sum + Display + Debug + Default + 'static {}
