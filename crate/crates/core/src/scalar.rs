use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used by metrics and rewards: f32 or f64.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    fn hundred() -> Self {
        Self::from_u8(100).unwrap()
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).unwrap()
    }

    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `part / whole`, with `empty` returned when `whole` is zero.
pub(crate) fn ratio<S: Scalar>(part: usize, whole: usize, empty: S) -> S {
    if whole == 0 {
        empty
    } else {
        S::from_count(part) / S::from_count(whole)
    }
}

/// Harmonic mean with the zero guard.
pub(crate) fn harmonic<S: Scalar>(p: S, r: S) -> S {
    let sum = p + r;
    if sum == S::zero() {
        S::zero()
    } else {
        (S::one() + S::one()) * p * r / sum
    }
}

/// Round to one decimal for fixed-point percentage output.
pub fn round1<S: Scalar>(v: S) -> f64 {
    let v = v.to_f64().unwrap_or(f64::NAN);
    (v * 10.0).round() / 10.0
}
