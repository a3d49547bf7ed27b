//! Unit-tagged wall-clock durations.
//!
//! Every latency in the toolkit crosses an API boundary as a [`Time`], never
//! as a bare float. The unit is fixed at construction (`from_us`, `from_secs`,
//! ...) and re-stated at extraction (`us()`, `secs()`, ...), so mixing
//! microseconds and seconds without an explicit conversion cannot be written.

use crate::scalar::Scalar;
use core::cmp::Ordering;
use core::ops::{Add, AddAssign, Div, Mul, Sub};

/// A non-negative duration, stored internally in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Time<F>(F);

impl<F: Scalar> Time<F> {
    pub fn zero() -> Self {
        Time(F::zero())
    }

    pub fn from_secs(s: F) -> Self {
        Time(s)
    }

    pub fn from_ms(ms: F) -> Self {
        Time(ms * F::from_const(1e-3))
    }

    pub fn from_us(us: F) -> Self {
        Time(us * F::from_const(1e-6))
    }

    pub fn from_ns(ns: F) -> Self {
        Time(ns * F::from_const(1e-9))
    }

    pub fn secs(self) -> F {
        self.0
    }

    pub fn ms(self) -> F {
        self.0 * F::from_const(1e3)
    }

    pub fn us(self) -> F {
        self.0 * F::from_const(1e6)
    }

    pub fn ns(self) -> F {
        self.0 * F::from_const(1e9)
    }

    /// Nearest whole nanosecond; the discrete-event simulator's clock unit.
    pub fn whole_ns(self) -> u64 {
        let ns = self.ns().round();
        ns.to_u64().expect("duration fits in u64 nanoseconds")
    }

    pub fn is_zero(self) -> bool {
        self.0 == F::zero()
    }

    pub fn min(self, other: Self) -> Self {
        Time(self.0.min(other.0))
    }

    pub fn max(self, other: Self) -> Self {
        Time(self.0.max(other.0))
    }
}

impl<F: Scalar> Add for Time<F> {
    type Output = Time<F>;
    fn add(self, rhs: Self) -> Self {
        Time(self.0 + rhs.0)
    }
}

impl<F: Scalar> AddAssign for Time<F> {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0 + rhs.0;
    }
}

impl<F: Scalar> Sub for Time<F> {
    type Output = Time<F>;
    fn sub(self, rhs: Self) -> Self {
        Time(self.0 - rhs.0)
    }
}

impl<F: Scalar> Mul<F> for Time<F> {
    type Output = Time<F>;
    fn mul(self, rhs: F) -> Self {
        Time(self.0 * rhs)
    }
}

impl<F: Scalar> Div<F> for Time<F> {
    type Output = Time<F>;
    fn div(self, rhs: F) -> Self {
        Time(self.0 / rhs)
    }
}

/// Ratio of two durations is a dimensionless scalar.
impl<F: Scalar> Div for Time<F> {
    type Output = F;
    fn div(self, rhs: Self) -> F {
        self.0 / rhs.0
    }
}

impl<F: Scalar> PartialOrd for Time<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}
