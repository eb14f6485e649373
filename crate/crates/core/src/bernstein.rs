//! Bernstein basis of degree n and the Jacobi weight function.

use crate::error::{Error, Result};
use crate::jacobi::WeightParams;
use crate::real::Real;

/// `B^n_0(x) .. B^n_n(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinRow<T> {
    pub n: usize,
    pub x: T,
    pub values: Vec<T>,
}

/// All Bernstein basis polynomials of degree `n` at `x ∈ [0,1]`.
///
/// The ratio `B_{i+1}/B_i = (n-i) x / ((i+1)(1-x))` is run outward from the
/// mode, where the basis peaks, and the row is then normalized by its sum
/// (the basis is a partition of unity). Nothing overflows and only values
/// far below the peak can underflow, for any `n`.
///
/// Points above `1/2` are evaluated as the mirror image of `1-x`, which is
/// exact there, so `B^n_i(x)` and `B^n_{n-i}(1-x)` come out bitwise equal
/// whenever `1-(1-x) == x`.
pub fn bernstein_all<T: Real>(n: usize, x: &T) -> Result<BernsteinRow<T>> {
    let zero = x.lit(0.0);
    let one = x.lit(1.0);
    let half = x.lit(0.5);
    if !(x.is_finite() && *x >= zero && *x <= one) {
        return Err(Error::Domain {
            x: x.to_f64(),
            domain: "[0,1]",
        });
    }
    let values = if *x > half {
        let mut v = bernstein_canonical(n, &(one - x.clone()));
        v.reverse();
        v
    } else {
        bernstein_canonical(n, x)
    };
    Ok(BernsteinRow {
        n,
        x: x.clone(),
        values,
    })
}

/// `x ∈ [0, 1/2]`.
fn bernstein_canonical<T: Real>(n: usize, x: &T) -> Vec<T> {
    let zero = x.lit(0.0);
    let mut v = vec![zero.clone(); n + 1];
    if x.is_zero() {
        v[0] = x.lit(1.0);
        return v;
    }
    let y = x.lit(1.0) - x.clone();
    let mode = ((n + 1) as f64 * x.to_f64()).floor().min(n as f64) as usize;
    v[mode] = x.lit(1.0);
    for i in mode..n {
        // B_{i+1} = B_i (n-i) x / ((i+1) y)
        v[i + 1] = v[i].clone() * (x.int((n - i) as i64) * x.clone()) / (x.int(i as i64 + 1) * y.clone());
    }
    for i in (1..=mode).rev() {
        // B_{i-1} = B_i i y / ((n-i+1) x)
        v[i - 1] = v[i].clone() * (x.int(i as i64) * y.clone()) / (x.int((n - i + 1) as i64) * x.clone());
    }
    if *x == x.lit(0.5) {
        for i in 0..n / 2 + 1 {
            v[n - i] = v[i].clone();
        }
    }
    // Pairs (i, n-i) are summed first so that a mirrored row sums identically.
    let mut sum = zero;
    for i in 0..=n / 2 {
        let j = n - i;
        sum = sum + if i == j { v[i].clone() } else { v[i].clone() + v[j].clone() };
    }
    v.into_iter().map(|b| b / sum.clone()).collect()
}

/// `(1-x)^α x^β`.
pub fn weight(params: &WeightParams<f64>, x: f64) -> Result<f64> {
    let (a, b) = (params.alpha, params.beta);
    let ok = x.is_finite()
        && (0.0..=1.0).contains(&x)
        && !(x == 0.0 && b < 0.0)
        && !(x == 1.0 && a < 0.0);
    if !ok {
        return Err(Error::Domain {
            x,
            domain: "the support of the weight",
        });
    }
    Ok(pow_or_one(1.0 - x, a) * pow_or_one(x, b))
}

fn pow_or_one(base: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        base.powf(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn endpoints_and_midpoint() {
        assert_eq!(bernstein_all(3, &0.0).unwrap().values, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(bernstein_all(3, &1.0).unwrap().values, vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(bernstein_all(2, &0.5).unwrap().values, vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn degree_five_sums_to_one() {
        let s: f64 = bernstein_all(5, &0.3).unwrap().values.iter().sum();
        assert!((s - 1.0).abs() <= 5.0 * f64::EPSILON);
    }

    #[test]
    fn rejects_points_outside() {
        assert!(bernstein_all(2, &1.5).is_err());
        assert!(bernstein_all(2, &-0.1).is_err());
        assert!(bernstein_all(2, &f64::NAN).is_err());
    }

    #[test]
    fn large_degree_stays_finite() {
        let row = bernstein_all(10_000, &0.5).unwrap();
        assert!(row.values.iter().all(|v| v.is_finite() && *v >= 0.0));
        let s: f64 = row.values.iter().sum();
        assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weight_values() {
        let legendre = WeightParams::legendre();
        assert_eq!(weight(&legendre, 0.42).unwrap(), 1.0);
        assert_eq!(weight(&legendre, 0.0).unwrap(), 1.0);
        let p = WeightParams::new(1.0, 2.0).unwrap();
        assert_eq!(weight(&p, 0.5).unwrap(), 0.125);
        let cheb = WeightParams::chebyshev();
        assert!((weight(&cheb, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(weight(&cheb, 0.0).is_err());
        assert!(weight(&cheb, 1.0).is_err());
        assert!(weight(&WeightParams::new(-0.5, 0.0).unwrap(), 0.0).is_ok());
    }

    proptest! {
        #[test]
        fn partition_of_unity(n in 0usize..2000, x in 0.0f64..=1.0) {
            let row = bernstein_all(n, &x).unwrap();
            let s: f64 = row.values.iter().sum();
            prop_assert!(row.values.iter().all(|v| *v >= 0.0));
            prop_assert!((s - 1.0).abs() <= (n.max(1) as f64) * f64::EPSILON, "sum={}", s);
        }

        #[test]
        fn mirror_symmetry(n in 0usize..300, x in 0.0f64..=1.0) {
            prop_assume!(1.0 - (1.0 - x) == x);
            let a = bernstein_all(n, &x).unwrap().values;
            let b = bernstein_all(n, &(1.0 - x)).unwrap().values;
            for i in 0..=n {
                let (u, v) = (a[i], b[n - i]);
                prop_assert!((u - v).abs() <= 2.0 * f64::EPSILON * u.abs().max(v.abs()) + 1e-300,
                    "i={} {} vs {}", i, u, v);
            }
        }
    }
}
