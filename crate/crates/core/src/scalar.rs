//! Scalar abstraction for the closed-form model layer.
//!
//! All analytic formulas in [`crate::models`] and [`crate::latency`] are
//! generic over the floating-point type so they can run in `f32` or `f64`.
//! The geometric and event-driven subsystems ([`crate::windows`],
//! [`crate::sim`]) use exact integer arithmetic and are not generic.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the analytic models.
pub trait Scalar: Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + 'static {
    /// Lossy conversion from an `f64` constant (model fits, table values).
    fn from_const(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }

    /// Lossy conversion from an unsigned count.
    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("count fits in scalar")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + 'static {}
