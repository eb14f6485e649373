//! Binary floating point with a per-value mantissa width.
//!
//! A value is `(-1)^neg * mant * 2^exp` where `mant` is either zero or has
//! exactly `prec` significant bits. Every operation rounds its exact result
//! to nearest, ties to even, at the larger precision of its operands. This is
//! enough arithmetic to rerun the dual Bernstein kernels at hundreds of
//! decimal digits and to compute the few transcendental constants they need.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Number of mantissa bits that carry at least `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32
}

#[derive(Clone)]
pub struct BigFloat {
    neg: bool,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
            prec: prec.max(2),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_parts(false, BigUint::one(), 0, prec, false)
    }

    pub fn with_digits(v: f64, digits: u32) -> Self {
        Self::from_f64(v, bits_for_digits(digits))
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Decimal digits carried by the mantissa.
    pub fn decimal_digits(&self) -> f64 {
        f64::from(self.prec) / LOG2_10
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg && !self.is_zero()
    }

    /// Rounds `(-1)^neg * mant * 2^exp` to `prec` bits. `sticky` marks a
    /// nonzero remainder below the least significant bit of `mant`.
    fn from_parts(neg: bool, mut mant: BigUint, mut exp: i64, prec: u32, sticky: bool) -> Self {
        let prec = prec.max(2);
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let bits = mant.bits();
        let p = u64::from(prec);
        if bits > p {
            let shift = bits - p;
            let half = mant.bit(shift - 1);
            let below = sticky || mant.trailing_zeros().is_some_and(|tz| tz < shift - 1);
            mant >>= shift;
            exp += shift as i64;
            if half && (below || mant.bit(0)) {
                mant += 1u32;
                if mant.bits() > p {
                    mant >>= 1u32;
                    exp += 1;
                }
            }
        } else if bits < p {
            let shift = p - bits;
            mant <<= shift;
            exp -= shift as i64;
        }
        BigFloat {
            neg,
            mant,
            exp,
            prec,
        }
    }

    /// Exact conversion followed by rounding to `prec` bits.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "cannot convert non-finite value {v} to BigFloat");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self::from_parts(neg, BigUint::from(mant), exp, prec, false)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0, prec, false)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.is_negative(), v.magnitude().clone(), 0, prec, false)
    }

    /// Correctly rounded `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let neg = num.is_negative() != den.is_negative();
        Self::div_magnitudes(neg, num.magnitude(), 0, den.magnitude(), 0, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = Self::from_parts(self.neg, self.mant.clone(), self.exp, 53, false);
        let m = r.mant.to_u64().unwrap_or(0) as f64;
        let v = ldexp(m, r.exp);
        if r.neg {
            -v
        } else {
            v
        }
    }

    /// Same value rounded to a different mantissa width.
    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_parts(self.neg, self.mant.clone(), self.exp, prec, false)
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        r.neg = false;
        r
    }

    /// `log10 |self|` as an `f64`; finite even far outside the `f64` range.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let top = (&self.mant >> (bits - keep)).to_u64().unwrap_or(1) as f64;
        let e2 = self.exp + (bits - keep) as i64;
        top.log10() + e2 as f64 * std::f64::consts::LOG10_2
    }

    /// Position of the most significant bit: `2^(top-1) <= |self| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }

    fn add_signed(&self, other: &Self, negate_other: bool, prec: u32) -> Self {
        let other_neg = other.neg ^ negate_other;
        if other.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return Self::from_parts(other_neg, other.mant.clone(), other.exp, prec, false);
        }
        let p = i64::from(prec);
        let (ta, tb) = (self.top(), other.top());
        if ta - tb > p + 2 {
            return self.with_precision(prec);
        }
        if tb - ta > p + 2 {
            return Self::from_parts(other_neg, other.mant.clone(), other.exp, prec, false);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        if self.neg == other_neg {
            Self::from_parts(self.neg, a + b, e, prec, false)
        } else {
            match a.cmp(&b) {
                Ordering::Equal => Self::zero(prec),
                Ordering::Greater => Self::from_parts(self.neg, a - b, e, prec, false),
                Ordering::Less => Self::from_parts(other_neg, b - a, e, prec, false),
            }
        }
    }

    fn mul_to(&self, other: &Self, prec: u32) -> Self {
        Self::from_parts(
            self.neg != other.neg,
            &self.mant * &other.mant,
            self.exp + other.exp,
            prec,
            false,
        )
    }

    fn div_magnitudes(neg: bool, a: &BigUint, ea: i64, b: &BigUint, eb: i64, prec: u32) -> Self {
        if a.is_zero() {
            return Self::zero(prec);
        }
        let want = i64::from(prec) + 2 + b.bits() as i64 - a.bits() as i64;
        let shift = want.max(0) as u64;
        let (q, r) = (a << shift).div_rem(b);
        Self::from_parts(neg, q, ea - eb - shift as i64, prec, !r.is_zero())
    }

    fn div_to(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        Self::div_magnitudes(
            self.neg != other.neg,
            &self.mant,
            self.exp,
            &other.mant,
            other.exp,
            prec,
        )
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        let mut r = self.clone();
        if !r.is_zero() {
            r.exp += k;
        }
        r
    }

    /// `e^self`, reduced by halving and recovered by repeated squaring.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::one(prec);
        }
        let halvings = (f64::from(prec).sqrt() as i64) + self.top().max(0);
        let wp = prec + halvings as u32 + 24;
        let r = self.with_precision(wp).mul_pow2(-halvings);
        let mut sum = Self::one(wp);
        let mut term = Self::one(wp);
        let mut k = 1i64;
        loop {
            term = term.mul_to(&r, wp).div_to(&Self::from_i64(k, wp), wp);
            if term.is_zero() || term.top() < sum.top() - i64::from(wp) - 2 {
                break;
            }
            sum = sum.add_signed(&term, false, wp);
            k += 1;
        }
        for _ in 0..halvings {
            sum = sum.mul_to(&sum, wp);
        }
        sum.with_precision(prec)
    }

    /// Natural logarithm of a positive value by Newton iteration on `exp`.
    pub fn ln(&self) -> Self {
        assert!(
            !self.is_zero() && !self.neg,
            "ln of a non-positive BigFloat"
        );
        let prec = self.prec;
        let wp = prec + 32;
        let guess = self.log10_abs() * std::f64::consts::LN_10;
        let x = self.with_precision(wp);
        let mut y = Self::from_f64(guess, wp);
        for _ in 0..64 {
            let ey = y.exp();
            let num = x.add_signed(&ey, true, wp);
            let den = x.add_signed(&ey, false, wp);
            let step = num.div_to(&den, wp).mul_pow2(1);
            y = y.add_signed(&step, false, wp);
            if step.is_zero() || step.top() < y.top() - i64::from(wp) + 4 {
                break;
            }
        }
        y.with_precision(prec)
    }

    /// `arctan(1/k)` for an integer `k >= 2`.
    fn atan_inv(k: i64, prec: u32) -> Self {
        let k2 = Self::from_i64(k * k, prec);
        let mut power = Self::one(prec).div_to(&Self::from_i64(k, prec), prec);
        let mut sum = power.clone();
        let mut j = 1i64;
        loop {
            power = power.div_to(&k2, prec);
            let term = power.div_to(&Self::from_i64(2 * j + 1, prec), prec);
            if term.is_zero() || term.top() < sum.top() - i64::from(prec) - 2 {
                break;
            }
            sum = sum.add_signed(&term, j % 2 == 1, prec);
            j += 1;
        }
        sum
    }

    /// Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let wp = prec + 16;
        let a = Self::atan_inv(5, wp).mul_to(&Self::from_i64(16, wp), wp);
        let b = Self::atan_inv(239, wp).mul_to(&Self::from_i64(4, wp), wp);
        a.add_signed(&b, true, wp).with_precision(prec)
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = if self.is_zero() { 0 } else if self.neg { -1 } else { 1 };
        let sb = if other.is_zero() { 0 } else if other.neg { -1 } else { 1 };
        if sa != sb {
            return Some(sa.cmp(&sb));
        }
        let ord = self.cmp_abs(other);
        Some(if sa < 0 { ord.reverse() } else { ord })
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({:e}, {} bits)", self.to_f64(), self.prec)
    }
}

impl From<&BigFloat> for BigInt {
    /// Truncates toward zero.
    fn from(v: &BigFloat) -> BigInt {
        let mag = if v.exp >= 0 {
            &v.mant << v.exp as u64
        } else {
            &v.mant >> (-v.exp) as u64
        };
        BigInt::from_biguint(if v.neg { Sign::Minus } else { Sign::Plus }, mag)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident, $p:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                let ($a, $b) = (self, rhs);
                let $p = $a.prec.max($b.prec);
                $body
            }
        }
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b, p| a.add_signed(b, false, p));
forward_binop!(Sub, sub, |a, b, p| a.add_signed(b, true, p));
forward_binop!(Mul, mul, |a, b, p| a.mul_to(b, p));
forward_binop!(Div, div, |a, b, p| a.div_to(b, p));

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        if !self.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, P)
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for v in [1.0, -0.1, 3.5e-300, 1.7e308, 5e-324, 0.37, -123456.789] {
            assert_eq!(BigFloat::from_f64(v, 53).to_f64(), v);
            assert_eq!(bf(v).to_f64(), v);
        }
    }

    #[test]
    fn rounding_to_53_bits_matches_hardware() {
        let pairs = [(0.1, 0.7), (1.0 / 3.0, 2.0 / 7.0), (1e10, 1e-10), (-2.5, 0.3)];
        for (a, b) in pairs {
            let (x, y) = (BigFloat::from_f64(a, 53), BigFloat::from_f64(b, 53));
            assert_eq!((&x + &y).to_f64(), a + b);
            assert_eq!((&x - &y).to_f64(), a - b);
            assert_eq!((&x * &y).to_f64(), a * b);
            assert_eq!((&x / &y).to_f64(), a / b);
        }
    }

    #[test]
    fn ties_round_to_even() {
        // 2^53 + 1 is a tie between 2^53 and 2^53 + 2.
        let v = BigFloat::from_i64((1i64 << 53) + 1, 53);
        assert_eq!(v.to_f64(), 9007199254740992.0);
        let w = BigFloat::from_i64((1i64 << 53) + 3, 53);
        assert_eq!(w.to_f64(), 9007199254740996.0);
    }

    #[test]
    fn cancellation_is_exact() {
        let a = bf(1.0) + BigFloat::from_f64(1e-40, P);
        let d = a - bf(1.0);
        assert!((d.to_f64() - 1e-40).abs() < 1e-55);
        assert!((bf(0.3) - bf(0.3)).is_zero());
    }

    #[test]
    fn ratio_matches_division() {
        let v = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), 53);
        assert_eq!(v.to_f64(), 1.0 / 3.0);
        let w = BigFloat::from_ratio(&BigInt::from(-22), &BigInt::from(7), P);
        assert!((w.to_f64() + 22.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for v in [0.5, 1.0, 2.0, 10.0, 1e-5, 123.25] {
            let x = bf(v);
            let back = x.ln().exp();
            let err = (&back - &x) / x.clone();
            assert!(err.is_zero() || err.log10_abs() < -55.0, "v={v}");
        }
        let e = bf(1.0).exp();
        assert!((e.to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!((bf(2.0).ln().to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((bf(-3.0).exp().to_f64() - (-3.0f64).exp()).abs() < 1e-17);
    }

    #[test]
    fn pi_digits() {
        let pi = BigFloat::pi(400);
        assert_eq!(pi.to_f64(), std::f64::consts::PI);
        // floor(pi * 10^50)
        let scaled = pi * BigFloat::from_bigint(&BigInt::from(10u32).pow(50), 400);
        let digits = BigInt::from(&scaled).to_string();
        assert_eq!(digits, "314159265358979323846264338327950288419716939937510");
    }

    #[test]
    fn log10_beyond_f64_range() {
        let tiny = BigFloat::from_f64(1e-300, P) * BigFloat::from_f64(1e-300, P);
        assert!((tiny.log10_abs() + 600.0).abs() < 1e-9);
    }

    #[test]
    fn ordering() {
        assert!(bf(-2.0) < bf(-1.0));
        assert!(bf(-1.0) < BigFloat::zero(P));
        assert!(bf(1e-30) > BigFloat::zero(P));
        assert!(bf(3.0) > bf(2.999999));
        assert_eq!(bf(0.25), BigFloat::from_f64(0.25, 80));
    }
}
