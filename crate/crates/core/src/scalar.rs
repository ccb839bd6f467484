//! Floating-point abstraction shared by the probabilistic models.
//!
//! Everything that stores or accumulates probabilities is generic over
//! [`Real`], which is implemented for `f32` and `f64`. The crate root exposes
//! `f64` aliases for the common case.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Scalar used for probabilities and log-probabilities.
pub trait Real:
    Float
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; every constant in the crate goes through this.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in target float")
    }

    /// Conversion from a count.
    fn of_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in target float")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(exp(a) + exp(b))` without overflow; `-inf` is the additive identity.
pub fn log_add<F: Real>(a: F, b: F) -> F {
    if a == F::neg_infinity() {
        return b;
    }
    if b == F::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-sum-exp over an iterator.
pub fn log_sum_exp<F: Real, I: IntoIterator<Item = F>>(xs: I) -> F {
    let xs: Vec<F> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(F::neg_infinity(), F::max);
    if max == F::neg_infinity() {
        return max;
    }
    let sum: F = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Natural log that maps zero to `-inf` and keeps negative input as NaN.
pub fn safe_ln<F: Real>(x: F) -> F {
    if x == F::zero() {
        F::neg_infinity()
    } else {
        x.ln()
    }
}

/// Parses a float written by [`Display`], also accepting `inf`/`-inf`/`NaN`.
pub fn parse_real<F: Real>(s: &str) -> Option<F> {
    match s.trim() {
        "-inf" => Some(F::neg_infinity()),
        "inf" | "+inf" => Some(F::infinity()),
        other => other.parse::<F>().ok(),
    }
}
