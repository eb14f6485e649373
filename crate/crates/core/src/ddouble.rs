//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! carrying about 106 bits.
//!
//! The algorithms are the error-free transformations of Joldes, Muller and
//! Popescu, "Tight and rigorous error bounds for basic building blocks of
//! double-word arithmetic" (2017), with FMA for exact products.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleF64 {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let ap = s - b;
    let bp = s - ap;
    (s, (a - ap) + (b - bp))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleF64 {
    pub const ZERO: DoubleF64 = DoubleF64 { hi: 0.0, lo: 0.0 };

    pub fn new(v: f64) -> Self {
        DoubleF64 { hi: v, lo: 0.0 }
    }

    /// Exact `a + b`, normalized.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        DoubleF64 { hi, lo }
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        self.hi + self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let (ch, cl1) = two_prod(self.hi, b);
        let cl3 = self.lo.mul_add(b, cl1);
        let (hi, lo) = fast_two_sum(ch, cl3);
        DoubleF64 { hi, lo }
    }
}

impl From<f64> for DoubleF64 {
    fn from(v: f64) -> Self {
        DoubleF64::new(v)
    }
}

impl Add for DoubleF64 {
    type Output = Self;

    // Both halves summed exactly, then renormalized twice.
    fn add(self, y: Self) -> Self {
        let (sh, sl) = two_sum(self.hi, y.hi);
        let (th, tl) = two_sum(self.lo, y.lo);
        let c = sl + th;
        let (vh, vl) = fast_two_sum(sh, c);
        let w = tl + vl;
        let (hi, lo) = fast_two_sum(vh, w);
        DoubleF64 { hi, lo }
    }
}

impl Neg for DoubleF64 {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleF64 {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleF64 {
    type Output = Self;

    fn sub(self, y: Self) -> Self {
        self + (-y)
    }
}

impl Mul for DoubleF64 {
    type Output = Self;

    // Exact hi*hi product plus fused cross terms.
    fn mul(self, y: Self) -> Self {
        let (ch, cl1) = two_prod(self.hi, y.hi);
        let tl0 = self.lo * y.lo;
        let tl1 = self.hi.mul_add(y.lo, tl0);
        let cl2 = self.lo.mul_add(y.hi, tl1);
        let cl3 = cl1 + cl2;
        let (hi, lo) = fast_two_sum(ch, cl3);
        DoubleF64 { hi, lo }
    }
}

impl Div for DoubleF64 {
    type Output = Self;

    // One Newton-style correction of the leading quotient.
    fn div(self, y: Self) -> Self {
        let th = self.hi / y.hi;
        let r = y.mul_f64(th);
        let pi_h = self.hi - r.hi;
        let delta_l = self.lo - r.lo;
        let delta = pi_h + delta_l;
        let tl = delta / y.hi;
        let (hi, lo) = fast_two_sum(th, tl);
        DoubleF64 { hi, lo }
    }
}

impl PartialOrd for DoubleF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}
