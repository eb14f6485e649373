//! Scalar abstraction shared by the `f64` production path and the
//! multiprecision reference path.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::bigfloat::BigFloat;
use crate::ddouble::DoubleF64;

/// Arithmetic needed by every evaluator in this crate.
///
/// `Ctx` carries whatever a constant needs to be materialized at the right
/// precision: nothing for `f64`, a mantissa width for [`BigFloat`].
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Copy + Debug + PartialEq;
    /// The same arithmetic with guard digits, for the few quantities whose
    /// error would otherwise dominate the result.
    type Wide: Real;

    /// Binary exponent beyond which values overflow.
    const MAX_LOG2: f64 = f64::INFINITY;

    fn ctx(&self) -> Self::Ctx;
    fn from_f64(v: f64, ctx: Self::Ctx) -> Self;
    fn from_ratio(num: &BigInt, den: &BigInt, ctx: Self::Ctx) -> Self;
    fn from_bigfloat(v: &BigFloat, ctx: Self::Ctx) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn log10_abs(&self) -> f64;
    /// Significant decimal digits of the arithmetic.
    fn decimal_digits(ctx: Self::Ctx) -> f64;
    /// Mantissa bits of the arithmetic.
    fn mantissa_bits(ctx: Self::Ctx) -> u32;

    fn from_int(v: i64, ctx: Self::Ctx) -> Self {
        Self::from_ratio(&BigInt::from(v), &BigInt::from(1), ctx)
    }

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_f64(0.0, ctx)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_f64(1.0, ctx)
    }

    /// Constant `v` at the precision of `self`.
    fn lit(&self, v: f64) -> Self {
        Self::from_f64(v, self.ctx())
    }

    /// Integer `v` at the precision of `self`.
    fn int(&self, v: i64) -> Self {
        Self::from_int(v, self.ctx())
    }

    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// Exact widening into a [`BigFloat`].
    fn to_bigfloat(&self) -> BigFloat;

    fn widen(&self) -> Self::Wide;
    fn narrow(w: &Self::Wide, ctx: Self::Ctx) -> Self;
}

impl Real for f64 {
    type Ctx = ();
    type Wide = DoubleF64;
    const MAX_LOG2: f64 = 1024.0;

    fn ctx(&self) {}

    fn from_f64(v: f64, _: ()) -> f64 {
        v
    }

    fn from_ratio(num: &BigInt, den: &BigInt, _: ()) -> f64 {
        BigFloat::from_ratio(num, den, 53).to_f64()
    }

    fn from_bigfloat(v: &BigFloat, _: ()) -> f64 {
        v.to_f64()
    }

    fn from_int(v: i64, _: ()) -> f64 {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> f64 {
        f64::abs(*self)
    }

    fn log10_abs(&self) -> f64 {
        f64::abs(*self).log10()
    }

    fn decimal_digits(_: ()) -> f64 {
        53.0 * std::f64::consts::LOG10_2
    }

    fn mantissa_bits(_: ()) -> u32 {
        53
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn to_bigfloat(&self) -> BigFloat {
        BigFloat::from_f64(*self, 53)
    }

    fn widen(&self) -> DoubleF64 {
        DoubleF64::from(*self)
    }

    fn narrow(w: &DoubleF64, _: ()) -> f64 {
        w.hi() + w.lo()
    }
}

/// Double-double, the guard arithmetic of `f64`.
impl Real for DoubleF64 {
    type Ctx = ();
    type Wide = DoubleF64;
    const MAX_LOG2: f64 = 1024.0;

    fn ctx(&self) {}

    fn from_f64(v: f64, _: ()) -> Self {
        DoubleF64::from(v)
    }

    fn from_ratio(num: &BigInt, den: &BigInt, _: ()) -> Self {
        Self::from_bigfloat(&BigFloat::from_ratio(num, den, 128), ())
    }

    fn from_bigfloat(v: &BigFloat, _: ()) -> Self {
        let hi = v.to_f64();
        if !hi.is_finite() {
            return DoubleF64::from(hi);
        }
        let wide = v.with_precision(v.precision().max(128));
        let lo = (wide - BigFloat::from_f64(hi, 128)).to_f64();
        DoubleF64::from_sum(hi, lo)
    }

    fn from_int(v: i64, _: ()) -> Self {
        let hi = v as f64;
        DoubleF64::from_sum(hi, (v - hi as i64) as f64)
    }

    fn to_f64(&self) -> f64 {
        DoubleF64::to_f64(self)
    }

    fn abs(&self) -> Self {
        if self.hi() < 0.0 {
            -*self
        } else {
            *self
        }
    }

    fn log10_abs(&self) -> f64 {
        self.to_bigfloat().log10_abs()
    }

    fn decimal_digits(_: ()) -> f64 {
        106.0 * std::f64::consts::LOG10_2
    }

    fn mantissa_bits(_: ()) -> u32 {
        106
    }

    fn is_zero(&self) -> bool {
        self.hi() == 0.0
    }

    fn is_finite(&self) -> bool {
        self.hi().is_finite()
    }

    fn to_bigfloat(&self) -> BigFloat {
        // hi and lo never overlap, so 2100 bits hold the sum exactly.
        let exact = BigFloat::from_f64(self.hi(), 2100) + BigFloat::from_f64(self.lo(), 2100);
        exact.with_precision(160)
    }

    fn widen(&self) -> DoubleF64 {
        *self
    }

    fn narrow(w: &DoubleF64, _: ()) -> Self {
        *w
    }
}

/// Mantissa width in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bits(pub u32);

/// Guard bits added by [`Real::widen`] for [`BigFloat`].
pub const GUARD_BITS: u32 = 64;

impl Real for BigFloat {
    type Ctx = Bits;
    type Wide = BigFloat;

    fn ctx(&self) -> Bits {
        Bits(self.precision())
    }

    fn from_f64(v: f64, ctx: Bits) -> Self {
        BigFloat::from_f64(v, ctx.0)
    }

    fn from_ratio(num: &BigInt, den: &BigInt, ctx: Bits) -> Self {
        BigFloat::from_ratio(num, den, ctx.0)
    }

    fn from_bigfloat(v: &BigFloat, ctx: Bits) -> Self {
        v.with_precision(ctx.0)
    }

    fn from_int(v: i64, ctx: Bits) -> Self {
        BigFloat::from_i64(v, ctx.0)
    }

    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }

    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }

    fn log10_abs(&self) -> f64 {
        BigFloat::log10_abs(self)
    }

    fn decimal_digits(ctx: Bits) -> f64 {
        f64::from(ctx.0) * std::f64::consts::LOG10_2
    }

    fn mantissa_bits(ctx: Bits) -> u32 {
        ctx.0
    }

    fn is_zero(&self) -> bool {
        BigFloat::is_zero(self)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn to_bigfloat(&self) -> BigFloat {
        self.clone()
    }

    fn widen(&self) -> BigFloat {
        self.with_precision(self.precision() + GUARD_BITS)
    }

    fn narrow(w: &BigFloat, ctx: Bits) -> Self {
        w.with_precision(ctx.0)
    }
}

/// Converts an exact rational into any scalar.
pub fn from_rational<T: Real>(v: &num_rational::BigRational, ctx: T::Ctx) -> T {
    T::from_ratio(v.numer(), v.denom(), ctx)
}
