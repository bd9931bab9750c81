//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All measures, couplings and solvers are generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Tolerances that depend on the working
//! precision live on the trait so that `f32` instantiations get thresholds
//! they can actually meet.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

use crate::error::{Error, Result};

/// Floating-point scalar used throughout the crate.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Accepted deviation of a weight sum from one before renormalizing.
    const NORMALIZE_TOL: f64;
    /// Mass-conservation slack (sums of probability weights, marginals).
    const MASS_TOL: f64;
    /// Two cumulative breakpoints closer than this are treated as equal.
    const BREAKPOINT_TOL: f64;
    /// Atoms lighter than this are dropped when assembling mixtures.
    const NEGLIGIBLE_MASS: f64;

    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts from a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const NORMALIZE_TOL: f64 = 1e-9;
    const MASS_TOL: f64 = 1e-12;
    const BREAKPOINT_TOL: f64 = 1e-15;
    const NEGLIGIBLE_MASS: f64 = 1e-15;
}

impl Scalar for f32 {
    const NORMALIZE_TOL: f64 = 1e-4;
    const MASS_TOL: f64 = 1e-5;
    const BREAKPOINT_TOL: f64 = 5e-7;
    const NEGLIGIBLE_MASS: f64 = 1e-7;
}

/// Moment / Lebesgue order `p ∈ [1, ∞]`.
///
/// Infinity is its own variant and is never encoded as a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order<T> {
    Finite(T),
    Infinity,
}

impl<T: Scalar> Order<T> {
    /// Validated finite order; rejects `p < 1` and non-finite input.
    pub fn finite(p: T) -> Result<Self> {
        if !p.is_finite() || p < T::one() {
            return Err(Error::InvalidOrder(p.to_f64_lossy()));
        }
        Ok(Order::Finite(p))
    }

    /// Parses a raw float where `+∞` maps to [`Order::Infinity`].
    pub fn from_value(p: T) -> Result<Self> {
        if p == T::infinity() {
            Ok(Order::Infinity)
        } else {
            Self::finite(p)
        }
    }

    /// Conjugate exponent `q = p / (p − 1)` with `1 ↔ ∞`.
    pub fn conjugate(self) -> Self {
        match self {
            Order::Infinity => Order::Finite(T::one()),
            Order::Finite(p) if p == T::one() => Order::Infinity,
            Order::Finite(p) => Order::Finite(p / (p - T::one())),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Order::Infinity)
    }

    /// Re-checks the `p ≥ 1` invariant for orders built directly from the enum.
    pub(crate) fn validated(self) -> Result<Self> {
        match self {
            Order::Infinity => Ok(self),
            Order::Finite(p) => Self::finite(p),
        }
    }
}

impl<T: Scalar> Display for Order<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(p) => write!(f, "{p}"),
            Order::Infinity => f.write_str("inf"),
        }
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(items: I) -> T {
    let mut acc = CompensatedSum::new();
    for x in items {
        acc.add(x);
    }
    acc.value()
}
