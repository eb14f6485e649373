//! Pochhammer products and the normalization constant of the Jacobi weight.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::bigfloat::BigFloat;
use crate::real::Real;

/// Rising factorial `(c)_l = c (c+1) ... (c+l-1)`, accumulated term by term.
pub fn pochhammer<T: Real>(c: &T, l: usize) -> T {
    (0..l).fold(c.int(1), |acc, j| acc * (c.clone() + c.int(j as i64)))
}

/// `(a)_l / (b)_l` as a running product of ratios, so neither factor is
/// ever formed on its own.
pub fn pochhammer_ratio<T: Real>(a: &T, b: &T, l: usize) -> T {
    (0..l).fold(a.int(1), |acc, j| {
        let j = a.int(j as i64);
        acc * (a.clone() + j.clone()) / (b.clone() + j)
    })
}

/// Tangent numbers `T_1..=T_m` (index 0 unused).
fn tangent_numbers(m: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::from(0); m + 1];
    if m == 0 {
        return t;
    }
    t[1] = BigInt::one();
    for k in 2..=m {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t
}

/// Bernoulli numbers `B_2, B_4, ..., B_2m` as exact `(num, den)` pairs.
pub fn bernoulli_even(m: usize) -> Vec<(BigInt, BigInt)> {
    let t = tangent_numbers(m);
    (1..=m)
        .map(|k| {
            let four_k = BigInt::one() << (2 * k);
            let mut num = &t[k] * (2 * k);
            if k % 2 == 0 {
                num = -num;
            }
            let den = &four_k * (&four_k - 1);
            let g = num_integer::Integer::gcd(&num, &den);
            (num / &g, den / g)
        })
        .collect()
}

/// `ln Γ(z)` for `z > 0`, via upward shifting and the Stirling series.
pub fn ln_gamma(z: &BigFloat) -> BigFloat {
    assert!(z.to_f64() > 0.0, "ln_gamma needs a positive argument");
    let prec = z.precision();
    let wp = prec + 32;
    let digits = f64::from(wp) * std::f64::consts::LOG10_2;
    let z = z.with_precision(wp);
    let shift = (2.0 * digits + 10.0 - z.to_f64()).ceil().max(0.0) as i64;

    let mut prod = BigFloat::one(wp);
    for j in 0..shift {
        prod = prod * (&z + &BigFloat::from_i64(j, wp));
    }
    let w = &z + &BigFloat::from_i64(shift, wp);
    let half = BigFloat::from_f64(0.5, wp);
    let two_pi = BigFloat::pi(wp).mul_pow2(1);
    let mut sum = (&w - &half) * w.ln() - w.clone() + half * two_pi.ln();

    let m_max = (0.6 * digits).ceil() as usize + 10;
    let w2 = &w * &w;
    let mut wpow = w.clone();
    for (k, (num, den)) in bernoulli_even(m_max).iter().enumerate() {
        let k = k as i64 + 1;
        let den = den * BigInt::from(2 * k * (2 * k - 1));
        let term = BigFloat::from_ratio(num, &den, wp) / wpow.clone();
        sum = sum + term.clone();
        if term.log10_abs() < sum.log10_abs() - digits - 5.0 {
            break;
        }
        wpow = wpow * w2.clone();
    }
    if shift > 0 {
        sum = sum - prod.ln();
    }
    sum.with_precision(prec)
}

/// Returns `v` as a small non-negative integer when it is exactly one.
fn as_small_uint<T: Real>(v: &T) -> Option<u32> {
    let f = v.to_f64();
    if (0.0..=150.0).contains(&f) && f.fract() == 0.0 && *v == v.lit(f) {
        f.to_u32()
    } else {
        None
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `Γ(α+β+2) / (Γ(α+1) Γ(β+1))`, the reciprocal of the weight's total mass.
///
/// Integer parameters use the exact factorial ratio. Everything else goes
/// through `exp(ln Γ - ln Γ - ln Γ)` evaluated with at least 20 extra decimal
/// digits and then rounded into `T`.
pub fn weight_mass_inverse<T: Real>(alpha: &T, beta: &T) -> T {
    let ctx = alpha.ctx();
    if let (Some(a), Some(b)) = (as_small_uint(alpha), as_small_uint(beta)) {
        let num = factorial(a + b + 1);
        let den = factorial(a) * factorial(b);
        return T::from_ratio(&num, &den, ctx);
    }
    let bits = T::mantissa_bits(ctx).max(130) + 70;
    let a = alpha.to_bigfloat().with_precision(bits);
    let b = beta.to_bigfloat().with_precision(bits);
    let one = BigFloat::one(bits);
    let two = BigFloat::from_i64(2, bits);
    let l = ln_gamma(&(&(&a + &b) + &two)) - ln_gamma(&(&a + &one)) - ln_gamma(&(&b + &one));
    T::from_bigfloat(&l.exp(), ctx)
}
