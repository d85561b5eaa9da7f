//! Scalar abstractions.
//!
//! Polynomial arithmetic is written against [`IntScalar`], so the same code
//! runs on `i64`/`i128` for small fast cases and on `BigInt` when values can
//! grow without bound. Floating routines (exponential sums) are written
//! against [`RealScalar`] and run on `f32` or `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type usable as a polynomial coefficient.
///
/// Fixed-width instantiations do not check for overflow; use `BigInt` when
/// intermediate values are not known to be small.
pub trait IntScalar:
    Clone
    + Debug
    + Display
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Into<BigInt>
    + Send
    + Sync
    + 'static
{
    fn from_bigint(v: &BigInt) -> Option<Self>;

    fn pow_u32(&self, exp: u32) -> Self {
        num_traits::pow::pow(self.clone(), exp as usize)
    }
}

impl IntScalar for BigInt {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

impl IntScalar for i64 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl IntScalar for i128 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

/// Floating-point type for exponential sums and log accumulators.
pub trait RealScalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// `ln |v|` for an arbitrary-precision integer, accurate to double precision
/// even when `v` overflows `f64`.
pub fn ln_abs(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(f64::abs).unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (v.magnitude() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
