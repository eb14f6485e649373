//! Dual Bernstein polynomials `D^n_i(x; α, β)`.
//!
//! The production path evaluates all `n+1` of them at a point in `O(n)`
//! operations with the first-order non-homogeneous relation
//!
//! ```text
//! (x-1)(i+1) D_i + x(n-i) D_{i+1} = -C_{n,i+1} / (2n+σ+2) · T_{ni}(x)
//! ```
//!
//! run forward from `D_0` up to a split index `J(n,x)`, and forward again
//! from the mirrored end (parameters swapped, `x -> 1-x`) for the rest.
//! The second- and third-order homogeneous recurrences, the closed
//! closed-form sum and the short Jacobi sums are kept as independent
//! evaluators for cross-checking.

use std::cell::RefCell;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};
use crate::jacobi::{jacobi_explicit, jacobi_value_guarded, JacobiRecurrence, WeightParams};
use crate::real::Real;
use crate::special::{pochhammer, pochhammer_ratio};

/// `D^n_0(x) .. D^n_n(x)` at one point.
#[derive(Clone, Debug)]
pub struct DualTable<T> {
    pub n: usize,
    pub params: WeightParams<T>,
    pub x: T,
    pub values: Vec<T>,
    /// Last index produced by the forward pass. Equal to `n` at the
    /// endpoints, where every value comes from the closed form.
    pub split: usize,
}

/// Nodes and values that define the split-point cubic.
const SPLIT_NODES: [(i128, i128); 4] = [(1, 100), (3, 10), (7, 10), (99, 100)];
const SPLIT_VALUES: [(i128, i128); 4] = [(1, 10), (4, 10), (6, 10), (9, 10)];

/// Monomial coefficients `[c0, c1, c2, c3]` of the cubic through the four
/// split conditions, obtained by exact rational Lagrange interpolation.
pub fn split_cubic_coefficients() -> [f64; 4] {
    static COEFFS: OnceLock<[f64; 4]> = OnceLock::new();
    *COEFFS.get_or_init(|| {
        let nodes: Vec<Ratio<i128>> = SPLIT_NODES.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
        let vals: Vec<Ratio<i128>> = SPLIT_VALUES.iter().map(|&(p, q)| Ratio::new(p, q)).collect();
        let mut coeffs = [Ratio::<i128>::zero(); 4];
        for k in 0..4 {
            // basis polynomial l_k as monomial coefficients
            let mut poly = vec![Ratio::from_integer(1)];
            let mut denom = Ratio::from_integer(1);
            for (m, node) in nodes.iter().enumerate() {
                if m == k {
                    continue;
                }
                let mut next = vec![Ratio::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += *c;
                    next[d] -= *c * *node;
                }
                poly = next;
                denom *= nodes[k] - *node;
            }
            for (d, c) in poly.iter().enumerate() {
                coeffs[d] += *c * vals[k] / denom;
            }
        }
        coeffs.map(|c| c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap())
    })
}

/// The split cubic `p(x)`.
pub fn split_poly(x: f64) -> f64 {
    let [c0, c1, c2, c3] = split_cubic_coefficients();
    ((c3 * x + c2) * x + c1) * x + c0
}

/// `J(n,x) = round(n p(x))`, ties away from zero, clamped into `[0,n]`.
pub fn split_point(n: usize, x: f64) -> usize {
    let j = (n as f64 * split_poly(x)).round();
    j.clamp(0.0, n as f64) as usize
}

/// x-independent data for one `(n, α, β)`: the recurrence multipliers `q`,
/// the scaled coefficients `C`, and the two Jacobi recurrences needed for
/// `R_n^(α,β+1)` and `R_n^(α+1,β)`.
///
/// `kinv` is `1/K` with `K = Γ(α+1)Γ(β+1)/Γ(σ+1)`. It is the quantity the
/// evaluation loop multiplies by.
#[derive(Clone, Debug)]
pub struct PrecomputedCoeffs<T: Real> {
    pub n: usize,
    pub params: WeightParams<T>,
    /// `q[i] = (i+1)/(i-n)`, `0 <= i < n`.
    pub q: Vec<T>,
    /// `C[0]` seeds `D_0`; for `i >= 1`, `C[i] = C_{n,i}/(2n+σ+2)`. All
    /// entries are stored multiplied by `2^-scale_log2`.
    pub c: Vec<T>,
    /// Zero unless the plain table comes near the overflow threshold of
    /// the arithmetic, which happens in `f64` for large `n` and `σ`. The
    /// recurrence is linear, so the scale is undone exactly on its output.
    pub scale_log2: i32,
    pub kinv: T,
    // Run in guard arithmetic; see `jacobi_value_guarded`.
    jacobi_beta1: JacobiRecurrence<T::Wide>,
    jacobi_alpha1: JacobiRecurrence<T::Wide>,
}

impl<T: Real> PrecomputedCoeffs<T> {
    fn matches(&self, n: usize, params: &WeightParams<T>) -> bool {
        self.n == n && self.params.alpha == params.alpha && self.params.beta == params.beta
    }

    /// `R_n^(α,β+1)(x)` and `R_n^(α+1,β)(x)`.
    fn jacobi_pair(&self, x: &T) -> (T, T) {
        let w = x.widen();
        let ctx = x.ctx();
        (
            T::narrow(&self.jacobi_beta1.value(&w), ctx),
            T::narrow(&self.jacobi_alpha1.value(&w), ctx),
        )
    }
}

/// Builds the coefficient tables for `(n, α, β)`.
///
/// `n = 0` is accepted and yields `q = []`, `C = [1/K]`.
pub fn precompute<T: Real>(n: usize, params: &WeightParams<T>) -> Result<PrecomputedCoeffs<T>> {
    let one = params.alpha.lit(1.0);
    let a1 = params.alpha.clone() + one.clone();
    let b1 = params.beta.clone() + one.clone();

    let scale_log2 = if T::MAX_LOG2.is_finite() {
        coeff_scale(n, params, T::MAX_LOG2 - COEFF_HEADROOM_LOG2)
    } else {
        0
    };
    let seed = if scale_log2 == 0 {
        params.kinv.clone()
    } else {
        params.kinv.clone() * one.lit((-f64::from(scale_log2)).exp2())
    };
    let (q, c) = coeff_table(n, params, &seed);

    let jacobi_beta1 = JacobiRecurrence::new(n, &params.alpha.widen(), &b1.widen())?;
    let jacobi_alpha1 = JacobiRecurrence::new(n, &a1.widen(), &params.beta.widen())?;
    Ok(PrecomputedCoeffs {
        n,
        params: params.clone(),
        q,
        c,
        scale_log2,
        kinv: params.kinv.clone(),
        jacobi_beta1,
        jacobi_alpha1,
    })
}

/// `q` and `C` with `C[0]` built from `seed` in place of `1/K`.
fn coeff_table<T: Real>(n: usize, params: &WeightParams<T>, seed: &T) -> (Vec<T>, Vec<T>) {
    let one = params.alpha.lit(1.0);
    let a1 = params.alpha.clone() + one.clone();
    let b1 = params.beta.clone() + one.clone();

    let mut c0 = seed.clone();
    for j in 0..n {
        c0 = c0 * (one.clone() + b1.clone() / (one.int(j as i64) + a1.clone()));
    }
    if n % 2 == 1 {
        c0 = -c0;
    }

    let mut q = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n + 1);
    c.push(c0.clone());
    if n >= 1 {
        q.push(-(one.clone() / one.int(n as i64)));
        c.push(c0 / b1.clone());
    }
    for i in 1..n {
        let p = one.int(i as i64 - n as i64);
        q.push(one.int(i as i64 + 1) / p.clone());
        let next = c[i].clone() * (p - a1.clone()) / (one.int(i as i64) + b1.clone());
        c.push(next);
    }
    (q, c)
}

/// Room left above the largest `|C[i]|` for the Jacobi factors it meets in
/// the evaluation loop, which grow like a power of `n` near the endpoints.
const COEFF_HEADROOM_LOG2: f64 = 256.0;

/// Power of two that brings the largest `|C[i]|` down to at most
/// `2^limit`, estimated from the same ratios in logarithmic form.
fn coeff_scale<T: Real>(n: usize, params: &WeightParams<T>, limit: f64) -> i32 {
    let (a1, b1) = (params.alpha_f64() + 1.0, params.beta_f64() + 1.0);
    let mut l = params.kinv.log10_abs() / std::f64::consts::LOG10_2;
    for j in 0..n {
        l += (1.0 + b1 / (j as f64 + a1)).log2();
    }
    let mut top = l;
    l -= b1.log2();
    top = top.max(l);
    for i in 1..n {
        let p = i as f64 - n as f64;
        l += ((p - a1) / (i as f64 + b1)).abs().log2();
        top = top.max(l);
    }
    (top - limit).ceil().max(0.0) as i32
}

/// The two i-independent Jacobi terms of the evaluation loop:
/// `r1 = (n+α+1) R_n^(α,β+1)(x)` and
/// `r2 = ((x-1)/x) (n+β+1) R_n^(α+1,β)(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TPair<T> {
    pub r1: T,
    pub r2: T,
}

impl<T: Real> TPair<T> {
    fn assemble(n: usize, params: &WeightParams<T>, x: &T, r_beta1: T, r_alpha1: T) -> Self {
        let one = x.lit(1.0);
        let nn = x.int(n as i64);
        let n1 = nn.clone() + params.alpha.clone() + one.clone();
        let x1x = (x.clone() - one.clone()) / x.clone();
        TPair {
            r1: n1 * r_beta1,
            r2: x1x * (nn + params.beta.clone() + one) * r_alpha1,
        }
    }

    pub fn new(n: usize, params: &WeightParams<T>, x: &T) -> Result<Self> {
        let one = x.lit(1.0);
        let b1 = params.beta.clone() + one.clone();
        let a1 = params.alpha.clone() + one;
        let rb = jacobi_value_guarded(n, &params.alpha, &b1, x)?;
        let ra = jacobi_value_guarded(n, &a1, &params.beta, x)?;
        Ok(Self::assemble(n, params, x, rb, ra))
    }

    /// Same values, reusing the recurrences stored in `coeffs`.
    pub fn from_coeffs(coeffs: &PrecomputedCoeffs<T>, x: &T) -> Self {
        let (rb, ra) = coeffs.jacobi_pair(x);
        Self::assemble(coeffs.n, &coeffs.params, x, rb, ra)
    }
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i > n {
        Err(Error::Index { n, i })
    } else {
        Ok(())
    }
}

fn check_open(x: &impl Real) -> Result<()> {
    let ok = x.is_finite() && x.to_f64() > 0.0 && x.to_f64() < 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            x: x.to_f64(),
            domain: "(0,1)",
        })
    }
}

fn check_closed(x: &impl Real) -> Result<()> {
    let ok = x.is_finite() && x.to_f64() >= 0.0 && x.to_f64() <= 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            x: x.to_f64(),
            domain: "[0,1]",
        })
    }
}

/// `T_{ni}(x) = (n-i)(n+α+1) x R_n^(α,β+1)(x) + (i+1)(n+β+1)(1-x) R_n^(α+1,β)(x)`.
pub fn t_poly<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> Result<T> {
    check_index(n, i)?;
    let one = x.lit(1.0);
    let rb = jacobi_value_guarded(n, &params.alpha, &(params.beta.clone() + one.clone()), x)?;
    let ra = jacobi_value_guarded(n, &(params.alpha.clone() + one), &params.beta, x)?;
    Ok(t_from_parts(n, i, params, x, &rb, &ra))
}

fn t_from_parts<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T, rb: &T, ra: &T) -> T {
    let one = x.lit(1.0);
    let nn = x.int(n as i64);
    x.int((n - i) as i64) * (nn.clone() + params.alpha.clone() + one.clone()) * x.clone() * rb.clone()
        + x.int(i as i64 + 1) * (nn + params.beta.clone() + one.clone()) * (one - x.clone()) * ra.clone()
}

/// `T_{ni}(x)` in terms of `R_n^(α,β)` and `R_{n+1}^(α,β)`:
/// `(n+1)/(2n+σ+1) [(n+α+1)(n+β+1) R_n + ((n-i)(n+α+1) - (i+1)(n+β+1)) R_{n+1}]`.
pub fn t_poly_connection<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> Result<T> {
    check_index(n, i)?;
    let one = x.lit(1.0);
    let nn = x.int(n as i64);
    let seq = crate::jacobi::jacobi_sequence(n + 1, &params.alpha, &params.beta, x)?;
    let (rn, rn1) = (seq.values[n].clone(), seq.values[n + 1].clone());
    let na1 = nn.clone() + params.alpha.clone() + one.clone();
    let nb1 = nn.clone() + params.beta.clone() + one.clone();
    let lead = x.int(n as i64 + 1) / (x.lit(2.0) * nn + params.sigma.clone() + one);
    let mix = x.int((n - i) as i64) * na1.clone() - x.int(i as i64 + 1) * nb1.clone();
    Ok(lead * (na1 * nb1 * rn + mix * rn1))
}

/// `C^(α,β)_{ni} = (-1)^{n-i+1} (2n+σ+2)(σ+1)_n / (K (α+1)_{n-i+1} (β+1)_i)`,
/// the coefficient of `R_{n+1}` in the degree-elevation relation.
pub fn elevation_coeff<T: Real>(n: usize, i: usize, params: &WeightParams<T>) -> T {
    let one = params.alpha.lit(1.0);
    let s1 = params.sigma.clone() + one.clone();
    let a1 = params.alpha.clone() + one.clone();
    let b1 = params.beta.clone() + one.clone();
    let m = n + 1 - i;
    // (σ+1)_n / ((α+1)_m (β+1)_i), interleaved to keep magnitudes moderate
    let mut v = params.kinv.clone() * (one.lit(2.0) * one.int(n as i64) + params.sigma.clone() + one.lit(2.0));
    let (mut ja, mut jb) = (0usize, 0usize);
    for j in 0..n {
        v = v * (s1.clone() + one.int(j as i64));
        if ja < m {
            v = v / (a1.clone() + one.int(ja as i64));
            ja += 1;
        } else if jb < i {
            v = v / (b1.clone() + one.int(jb as i64));
            jb += 1;
        }
    }
    for j in ja..m {
        v = v / (a1.clone() + one.int(j as i64));
    }
    for j in jb..i {
        v = v / (b1.clone() + one.int(j as i64));
    }
    if (n + 1 - i) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Closed form of `D^n_i` at `x = 1` (`at_one`) or `x = 0`.
pub fn dual_endpoint<T: Real>(n: usize, i: usize, params: &WeightParams<T>, at_one: bool) -> Result<T> {
    check_index(n, i)?;
    let one = params.alpha.lit(1.0);
    let s1 = params.sigma.clone() + one.clone();
    // (σ+1)_n / n!
    let lead = params.kinv.clone() * pochhammer_ratio(&s1, &one, n);
    let (v, sign_odd) = if at_one {
        let top = one.int((n - i) as i64) + params.alpha.clone() + one.lit(2.0);
        let bottom = params.beta.clone() + one.clone();
        (lead * pochhammer_ratio(&top, &bottom, i), (n - i) % 2 == 1)
    } else {
        let top = one.int(i as i64) + params.beta.clone() + one.lit(2.0);
        let bottom = params.alpha.clone() + one.clone();
        (lead * pochhammer_ratio(&top, &bottom, n - i), i % 2 == 1)
    };
    Ok(if sign_odd { -v } else { v })
}

/// `D^n_0 .. D^n_j` at `x ∈ (0,1)` by the first-order relation, run
/// forward from the closed form of `D^n_0`.
pub fn forward_eval<T: Real>(
    n: usize,
    params: &WeightParams<T>,
    x: &T,
    j: usize,
    coeffs: &PrecomputedCoeffs<T>,
    tpair: &TPair<T>,
) -> Result<Vec<T>> {
    if !coeffs.matches(n, params) {
        return Err(Error::CoeffMismatch);
    }
    check_open(x)?;
    check_index(n, j)?;
    let x1x = (x.clone() - x.lit(1.0)) / x.clone();
    Ok(forward_kernel(n, params, &x1x, j, coeffs, tpair))
}

/// The loop of the first-order relation; `x1x = (x-1)/x`.
fn forward_kernel<T: Real>(
    n: usize,
    params: &WeightParams<T>,
    x1x: &T,
    j: usize,
    coeffs: &PrecomputedCoeffs<T>,
    tpair: &TPair<T>,
) -> Vec<T> {
    let n1 = x1x.int(n as i64) + params.alpha.clone() + x1x.lit(1.0);
    let (r1, r2) = (&tpair.r1, &tpair.r2);
    let mut d = Vec::with_capacity(j + 1);
    d.push(coeffs.c[0].clone() * r1.clone() / n1);
    for i in 1..=j {
        let q = coeffs.q[i - 1].clone();
        let next = q.clone() * x1x.clone() * d[i - 1].clone() - coeffs.c[i].clone() * (r1.clone() + q * r2.clone());
        d.push(next);
    }
    if coeffs.scale_log2 != 0 {
        let up = x1x.lit(f64::from(coeffs.scale_log2).exp2());
        d = d.into_iter().map(|v| v * up.clone()).collect();
    }
    d
}

/// Coefficient tables for `(α, β)` and for `(β, α)`.
#[derive(Clone, Debug)]
struct Tables<T: Real> {
    forward: PrecomputedCoeffs<T>,
    backward: PrecomputedCoeffs<T>,
}

impl<T: Real> Tables<T> {
    fn new(n: usize, params: &WeightParams<T>) -> Result<Self> {
        Ok(Tables {
            forward: precompute(n, params)?,
            backward: precompute(n, &params.swapped())?,
        })
    }

    /// Forward run up to `J(n,x)`, mirrored run for the rest; `x ∈ (0,1)`.
    fn interior(&self, n: usize, x: &T) -> (Vec<T>, usize) {
        let params = &self.forward.params;
        let one = x.lit(1.0);
        let split = split_point(n, x.to_f64());
        let (rb, ra) = self.forward.jacobi_pair(x);
        let y = one.clone() - x.clone();
        let x1x = (x.clone() - one.clone()) / x.clone();
        let tpair = TPair::assemble(n, params, x, rb.clone(), ra.clone());
        let mut values = forward_kernel(n, params, &x1x, split, &self.forward, &tpair);
        if split < n {
            // The mirrored run needs R_n^(β,α+1) and R_n^(β+1,α) at 1-x, which
            // are ±R_n^(α+1,β) and ±R_n^(α,β+1) at x. Reusing them also keeps
            // the rounding of 1-x out of the Jacobi values.
            let swapped = &self.backward.params;
            let y1y = -(x.clone() / y);
            let nn = x.int(n as i64);
            let (mut r1, mut r2) = (
                (nn.clone() + params.beta.clone() + one.clone()) * ra,
                y1y.clone() * (nn + params.alpha.clone() + one) * rb,
            );
            if n % 2 == 1 {
                r1 = -r1;
                r2 = -r2;
            }
            let tpair = TPair { r1, r2 };
            let tail = forward_kernel(n, swapped, &y1y, n - split - 1, &self.backward, &tpair);
            values.extend(tail.into_iter().rev());
        }
        (values, split)
    }
}

/// Below this distance from an endpoint the recurrence runs in guard
/// arithmetic.
///
/// Each step of the first-order relation multiplies by `(x-1)/x` (or
/// `-x/(1-x)` in the mirrored run) and then cancels back down, so the
/// rounding errors of every input grow by roughly that factor per step.
/// On the experiment grid `[0.01, 0.99]` this costs at most two digits and
/// the working precision is kept; closer to the ends it would cost many.
pub const NEAR_END: f64 = 1.0 / 1024.0;

/// Reusable state for evaluating all dual polynomials of one `(n, α, β)`
/// at many points: coefficient tables for `(α, β)` and for `(β, α)`, and
/// their guard-arithmetic counterparts, built on first use near an end.
#[derive(Clone, Debug)]
pub struct DualEvaluator<T: Real> {
    n: usize,
    tables: Tables<T>,
    wide: OnceLock<Result<Box<Tables<T::Wide>>>>,
}

impl<T: Real> DualEvaluator<T> {
    pub fn new(n: usize, params: &WeightParams<T>) -> Result<Self> {
        Ok(DualEvaluator {
            n,
            tables: Tables::new(n, params)?,
            wide: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &WeightParams<T> {
        &self.tables.forward.params
    }

    pub fn eval(&self, x: &T) -> Result<DualTable<T>> {
        check_closed(x)?;
        let n = self.n;
        let params = self.params();
        let zero = x.lit(0.0);
        let one = x.lit(1.0);
        if *x == zero || *x == one {
            let at_one = *x == one;
            let values = (0..=n)
                .map(|i| dual_endpoint(n, i, params, at_one))
                .collect::<Result<Vec<_>>>()?;
            return Ok(DualTable {
                n,
                params: params.clone(),
                x: x.clone(),
                values,
                split: n,
            });
        }

        let xf = x.to_f64();
        let (values, split) = if !(NEAR_END..=1.0 - NEAR_END).contains(&xf) {
            let wide = self
                .wide
                .get_or_init(|| {
                    let p = WeightParams::from_values(params.alpha.widen(), params.beta.widen())?;
                    Ok(Box::new(Tables::new(n, &p)?))
                })
                .as_ref()
                .map_err(Clone::clone)?;
            let (v, split) = wide.interior(n, &x.widen());
            (v.iter().map(|v| T::narrow(v, x.ctx())).collect(), split)
        } else {
            self.tables.interior(n, x)
        };
        Ok(DualTable {
            n,
            params: params.clone(),
            x: x.clone(),
            values,
            split,
        })
    }
}

/// All `n+1` dual Bernstein polynomials at one point of `[0,1]`.
pub fn dual_all_at_point<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<DualTable<T>> {
    check_closed(x)?;
    DualEvaluator::new(n, params)?.eval(x)
}

/// All `n+1` dual Bernstein polynomials at each of `xs`, sharing one pair of
/// coefficient tables.
pub fn dual_all_multi<T: Real>(n: usize, params: &WeightParams<T>, xs: &[T]) -> Result<Vec<DualTable<T>>> {
    if let Some((index, x)) = xs.iter().enumerate().find(|(_, x)| check_closed(*x).is_err()) {
        return Err(Error::DomainAt {
            index,
            x: x.to_f64(),
        });
    }
    let eval = DualEvaluator::new(n, params)?;
    xs.iter().map(|x| eval.eval(x)).collect()
}

/// Values of `R_n^(α,β+1)(x)` and `R_n^(α+1,β)(x)` and the `T_{ni}` they build.
struct TSource<'a, T> {
    n: usize,
    params: &'a WeightParams<T>,
    x: &'a T,
    rb: T,
    ra: T,
}

impl<'a, T: Real> TSource<'a, T> {
    fn new(n: usize, params: &'a WeightParams<T>, x: &'a T) -> Result<Self> {
        let one = x.lit(1.0);
        let rb = jacobi_value_guarded(n, &params.alpha, &(params.beta.clone() + one.clone()), x)?;
        let ra = jacobi_value_guarded(n, &(params.alpha.clone() + one), &params.beta, x)?;
        Ok(TSource { n, params, x, rb, ra })
    }

    fn t(&self, i: usize) -> T {
        t_from_parts(self.n, i, self.params, self.x, &self.rb, &self.ra)
    }
}

fn seeds<T: Real>(n: usize, params: &WeightParams<T>, x: &T, upto: usize) -> Result<Vec<T>> {
    let coeffs = precompute(n, params)?;
    let tpair = TPair::from_coeffs(&coeffs, x);
    forward_eval(n, params, x, upto, &coeffs, &tpair)
}

/// Extra mantissa bits per degree for the cross-check evaluators below.
///
/// Run forward in the working precision, the homogeneous recurrences and
/// the closed formulas lose close to two decimal digits per degree (at
/// `n = 30` nothing is left even of 50 digits), so they are evaluated with
/// `64 + 16n` guard bits and rounded once at the end.
pub const CROSS_CHECK_BITS_PER_DEGREE: u32 = 16;

/// Working precision of the cross-check evaluators for degree `n`.
pub fn cross_check_bits<T: Real>(n: usize, ctx: T::Ctx) -> u32 {
    T::mantissa_bits(ctx) + 64 + CROSS_CHECK_BITS_PER_DEGREE * n as u32
}

/// `params` and `x` carried over exactly into `BigFloat` at the
/// cross-check precision.
///
/// The lifted parameters are cached per thread: building them evaluates
/// `1/K` through log-gamma at full precision, which would otherwise
/// dominate the per-index evaluators.
fn lift<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<(WeightParams<BigFloat>, BigFloat)> {
    thread_local! {
        static LIFTED: RefCell<Vec<WeightParams<BigFloat>>> = const { RefCell::new(Vec::new()) };
    }
    let bits = cross_check_bits::<T>(n, x.ctx());
    let up = |v: &T| v.to_bigfloat().with_precision(bits);
    let (a, b) = (up(&params.alpha), up(&params.beta));
    let hit = |p: &WeightParams<BigFloat>| p.alpha == a && p.beta == b && p.alpha.precision() == bits;
    let cached = LIFTED.with(|c| c.borrow().iter().find(|p| hit(p)).cloned());
    let p = match cached {
        Some(p) => p,
        None => {
            let p = WeightParams::from_values(a.clone(), b.clone())?;
            LIFTED.with(|c| {
                let mut c = c.borrow_mut();
                if c.len() >= 16 {
                    c.remove(0);
                }
                c.push(p.clone());
            });
            p
        }
    };
    Ok((p, up(x)))
}

/// `D^n_0 .. D^n_n` by the homogeneous second-order recurrence
/// `u0 D_i + u1 D_{i+1} + u2 D_{i+2} = 0`, in cross-check precision.
pub fn dual_via_rec2<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<Vec<T>> {
    check_open(x)?;
    if n < 1 {
        return Err(Error::Degree { n, min: 1 });
    }
    let (p, xw) = lift(n, params, x)?;
    Ok(rec2_kernel(n, &p, &xw)?.iter().map(|v| T::from_bigfloat(v, x.ctx())).collect())
}

fn rec2_kernel<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<Vec<T>> {
    let mut d = seeds(n, params, x, 1)?;
    let src = TSource::new(n, params, x)?;
    let one = x.lit(1.0);
    let xm1 = x.clone() - one;
    let (alpha, beta) = (&params.alpha, &params.beta);
    for i in 0..n.saturating_sub(1) {
        let t_i = src.t(i);
        let t_i1 = src.t(i + 1);
        let n_i_a = x.int((n - i) as i64) + alpha.clone();
        let i_b_2 = x.int(i as i64 + 2) + beta.clone();
        let u0 = xm1.clone() * x.int(i as i64 + 1) * n_i_a.clone() * t_i1.clone();
        let u1 = x.clone() * x.int((n - i) as i64) * n_i_a * t_i1
            + xm1.clone() * x.int(i as i64 + 2) * i_b_2.clone() * t_i.clone();
        let u2 = x.clone() * x.int((n - i - 1) as i64) * i_b_2 * t_i;
        if u2.is_zero() {
            return Err(Error::SingularCoefficient { i });
        }
        let next = -(u0 * d[i].clone() + u1 * d[i + 1].clone()) / u2;
        d.push(next);
    }
    Ok(d)
}

/// `D^n_0 .. D^n_n` by the homogeneous third-order recurrence
/// `w0 D_i + w1 D_{i+1} + w2 D_{i+2} + w3 D_{i+3} = 0`, in cross-check
/// precision.
pub fn dual_via_rec3<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<Vec<T>> {
    check_open(x)?;
    if n < 2 {
        return Err(Error::Degree { n, min: 2 });
    }
    let (p, xw) = lift(n, params, x)?;
    Ok(rec3_kernel(n, &p, &xw)?.iter().map(|v| T::from_bigfloat(v, x.ctx())).collect())
}

fn rec3_kernel<T: Real>(n: usize, params: &WeightParams<T>, x: &T) -> Result<Vec<T>> {
    let mut d = seeds(n, params, x, 2)?;
    let one = x.lit(1.0);
    let xm1 = x.clone() - one.clone();
    let (alpha, beta) = (&params.alpha, &params.beta);
    for i in 0..n.saturating_sub(2) {
        let int = |v: i64| x.int(v);
        let (ii, nn) = (i as i64, n as i64);
        // (n-i+α-1)_2 and (i+β+2)_2
        let a_m1 = int(nn - ii - 1) + alpha.clone();
        let a_0 = int(nn - ii) + alpha.clone();
        let b_2 = int(ii + 2) + beta.clone();
        let b_3 = int(ii + 3) + beta.clone();
        let w0 = xm1.clone() * int(ii + 1) * a_m1.clone() * a_0.clone();
        let w1 = a_m1.clone()
            * (x.clone() * int(nn - ii) * a_0
                + x.lit(2.0) * xm1.clone() * int(ii + 2) * b_2.clone());
        let w2 = b_2.clone()
            * (xm1.clone() * int(ii + 3) * b_3.clone()
                + x.lit(2.0) * x.clone() * int(nn - ii - 1) * a_m1);
        let w3 = x.clone() * int(nn - ii - 2) * b_2 * b_3;
        if w3.is_zero() {
            return Err(Error::SingularCoefficient { i });
        }
        let next = -(w0 * d[i].clone() + w1 * d[i + 1].clone() + w2 * d[i + 2].clone()) / w3;
        d.push(next);
    }
    Ok(d)
}

/// `S^(a,b)_{mk}(z) = (b+1)_m Σ_{j=0..k} (-m)_j (-m-a)_j / (j! (b+1)_j) z^j`;
/// zero for `k < 0`.
fn s_sum<T: Real>(a: &T, b: &T, m: usize, k: Option<usize>, z: &T) -> T {
    let Some(k) = k else {
        return z.lit(0.0);
    };
    let one = z.lit(1.0);
    let b1 = b.clone() + one.clone();
    let mut term = one.clone();
    let mut sum = one.clone();
    for j in 0..k {
        let jj = z.int(j as i64);
        let mm = z.int(m as i64);
        term = term * (jj.clone() - mm.clone()) * (jj.clone() - mm - a.clone())
            / (z.int(j as i64 + 1) * (b1.clone() + jj))
            * z.clone();
        sum = sum + term.clone();
    }
    pochhammer(&b1, m) * sum
}

/// `D^n_i(x)` from the closed formula obtained by solving the first-order
/// relation:
///
/// ```text
/// D_i = C(n,i)^-1 (-1)^{n-i} (σ+1)_n / (K (α+1)_n (β+1)_n) ((x-1)/x)^i
///       · [R_n^(α,β+1) S^(α+1,β)_{n,i}(z) - R_n^(α+1,β) S^(α,β+1)_{n,i-1}(z)]
/// ```
///
/// with `z = x/(x-1)`, in cross-check precision.
pub fn dual_explicit<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> Result<T> {
    check_open(x)?;
    check_index(n, i)?;
    let (p, xw) = lift(n, params, x)?;
    Ok(T::from_bigfloat(&explicit_kernel(n, i, &p, &xw), x.ctx()))
}

fn explicit_kernel<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> T {
    let one = x.lit(1.0);
    let (alpha, beta) = (&params.alpha, &params.beta);
    let a1 = alpha.clone() + one.clone();
    let b1 = beta.clone() + one.clone();
    let rb = jacobi_explicit(n, alpha, &b1, x);
    let ra = jacobi_explicit(n, &a1, beta, x);
    let z = x.clone() / (x.clone() - one.clone());
    let x1x = (x.clone() - one.clone()) / x.clone();

    let bracket = rb * s_sum(&a1, beta, n, Some(i), &z) - ra * s_sum(alpha, &b1, n, i.checked_sub(1), &z);

    let mut pref = params.kinv.clone() * pochhammer_ratio(&(params.sigma.clone() + one.clone()), &a1, n)
        / pochhammer(&b1, n);
    // C(n,i)^-1
    for j in 0..i {
        pref = pref * x.int(j as i64 + 1) / x.int((n - j) as i64);
    }
    for _ in 0..i {
        pref = pref * x1x.clone();
    }
    if (n - i) % 2 == 1 {
        pref = -pref;
    }
    pref * bracket
}

/// `D^n_i(x)` as a combination of `min(i, n-i) + 1` Jacobi polynomials with
/// shifted parameters, each evaluated by its explicit sum, in cross-check
/// precision.
pub fn dual_short_sum<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> Result<T> {
    check_closed(x)?;
    check_index(n, i)?;
    let (p, xw) = lift(n, params, x)?;
    Ok(T::from_bigfloat(&short_sum_kernel(n, i, &p, &xw), x.ctx()))
}

fn short_sum_kernel<T: Real>(n: usize, i: usize, params: &WeightParams<T>, x: &T) -> T {
    let one = x.lit(1.0);
    let (alpha, beta) = (&params.alpha, &params.beta);
    let a1 = alpha.clone() + one.clone();
    let b1 = beta.clone() + one.clone();
    let s1 = params.sigma.clone() + one.clone();
    let lower = i <= n - i;
    let m = if lower { i } else { n - i };

    // (-m)_k / (-n)_k, built up one factor per step
    let mut ratio = one.clone();
    let mut sum = x.lit(0.0);
    for k in 0..=m {
        let shift = x.int(k as i64 + 1);
        let r = if lower {
            jacobi_explicit(n - k, alpha, &(beta.clone() + shift), x)
        } else {
            let v = jacobi_explicit(n - k, &(alpha.clone() + shift), beta, x);
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        };
        sum = sum + ratio.clone() * r;
        if k < m {
            ratio = ratio * x.int(k as i64 - m as i64) / x.int(k as i64 - n as i64);
        }
    }

    // (σ+1)_n / (K (α+1)_{n-i} (β+1)_i)
    let (pa, pb) = (n - i, i);
    let mut pref = params.kinv.clone();
    let denoms: Vec<T> = (0..pa)
        .map(|j| a1.clone() + x.int(j as i64))
        .chain((0..pb).map(|j| b1.clone() + x.int(j as i64)))
        .collect();
    for (j, den) in denoms.into_iter().enumerate() {
        pref = pref * (s1.clone() + x.int(j as i64)) / den;
    }
    let sign_odd = if lower { (n - i) % 2 == 1 } else { m % 2 == 1 };
    if sign_odd {
        pref = -pref;
    }
    pref * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn split_cubic_matches_printed_coefficients() {
        let [c0, c1, c2, c3] = split_cubic_coefficients();
        assert!(close(c3, 1.5808422319452519, 1e-15));
        assert!(close(c2, -2.3712633479178778, 1e-15));
        assert!(close(c1, 1.6223979846811288, 1e-15));
        assert!(close(c0, 0.08401156564574855, 1e-15));
        for (x, p) in [(0.01, 0.1), (0.3, 0.4), (0.7, 0.6), (0.99, 0.9)] {
            assert!((split_poly(x) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn split_point_examples() {
        assert_eq!(split_point(10, 0.3), 4);
        assert_eq!(split_point(100, 0.5), 50);
        for x in [0.001, 0.4, 0.999] {
            assert_eq!(split_point(0, x), 0);
        }
        for n in 0..200 {
            for x in [1e-9, 0.2, 0.8, 1.0 - 1e-9] {
                assert!(split_point(n, x) <= n);
            }
        }
    }

    #[test]
    fn precompute_small_legendre() {
        let p = WeightParams::legendre();
        let c1 = precompute(1, &p).unwrap();
        assert_eq!(c1.c[0], -2.0);
        assert_eq!(c1.q, vec![-1.0]);
        let c2 = precompute(2, &p).unwrap();
        assert!((c2.c[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn precompute_ratio_invariant() {
        let p = WeightParams::new(-0.33, 5.6).unwrap();
        let n = 40;
        let c = precompute(n, &p).unwrap();
        assert_eq!(c.q.len(), n);
        assert_eq!(c.c.len(), n + 1);
        assert!(close(c.c[1], c.c[0] / 6.6, 1e-15));
        for i in 1..n {
            let want = (i as f64 - n as f64 - p.alpha - 1.0) / (i as f64 + p.beta + 1.0);
            assert!(close(c.c[i + 1] / c.c[i], want, 1e-14), "i={i}");
            assert!(close(c.q[i], (i as f64 + 1.0) / (i as f64 - n as f64), 1e-15));
        }
    }

    #[test]
    fn endpoint_small_cases() {
        let p = WeightParams::legendre();
        assert_eq!(dual_endpoint(1, 1, &p, true).unwrap(), 4.0);
        assert_eq!(dual_endpoint(1, 0, &p, true).unwrap(), -2.0);
        assert_eq!(dual_endpoint(1, 0, &p, false).unwrap(), 4.0);
        assert_eq!(dual_endpoint(1, 1, &p, false).unwrap(), -2.0);
        let q = WeightParams::new(0.7, -0.4).unwrap();
        for at_one in [false, true] {
            assert!(close(dual_endpoint(0, 0, &q, at_one).unwrap(), q.kinv, 1e-15));
        }
        assert!(dual_endpoint(3, 4, &q, true).is_err());
    }

    #[test]
    fn t_poly_small_cases() {
        let p = WeightParams::legendre();
        for x in [0.0, 0.2, 0.9] {
            assert!((t_poly(0, 0, &p, &x).unwrap() - (1.0 - x)).abs() < 1e-15);
        }
        assert_eq!(t_poly(1, 1, &p, &1.0).unwrap(), 0.0);
    }

    #[test]
    fn t_poly_forms_agree() {
        let p = WeightParams::new(0.3, -0.2).unwrap();
        let a = t_poly(3, 1, &p, &0.6).unwrap();
        let b = t_poly_connection(3, 1, &p, &0.6).unwrap();
        assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn tpair_loop_identity() {
        let p = WeightParams::new(0.3, -0.2).unwrap();
        let (n, x) = (7usize, 0.35);
        let c = precompute(n, &p).unwrap();
        let tp = TPair::new(n, &p, &x).unwrap();
        assert_eq!(tp, TPair::from_coeffs(&c, &x));
        for i in 1..=n {
            let lhs = t_poly(n, i - 1, &p, &x).unwrap() / (x * (n - i + 1) as f64);
            let rhs = tp.r1 + c.q[i - 1] * tp.r2;
            assert!(close(lhs, rhs, 1e-12), "i={i}");
        }
    }

    #[test]
    fn forward_small_cases() {
        let p = WeightParams::legendre();
        let c0 = precompute(0, &p).unwrap();
        let t0 = TPair::new(0, &p, &0.4).unwrap();
        assert_eq!(forward_eval(0, &p, &0.4, 0, &c0, &t0).unwrap(), vec![1.0]);
        let c1 = precompute(1, &p).unwrap();
        let t1 = TPair::new(1, &p, &0.5).unwrap();
        assert_eq!(forward_eval(1, &p, &0.5, 1, &c1, &t1).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn forward_rejects_mismatched_tables() {
        let p = WeightParams::legendre();
        let c = precompute(4, &p).unwrap();
        let t = TPair::new(5, &p, &0.5).unwrap();
        assert_eq!(forward_eval(5, &p, &0.5, 2, &c, &t), Err(Error::CoeffMismatch));
        let q = WeightParams::chebyshev();
        assert_eq!(forward_eval(4, &q, &0.5, 2, &c, &t), Err(Error::CoeffMismatch));
    }

    #[test]
    fn all_at_point_small_cases() {
        let p = WeightParams::legendre();
        assert_eq!(dual_all_at_point(1, &p, &0.5).unwrap().values, vec![1.0, 1.0]);
        let t = dual_all_at_point(4, &p, &0.5).unwrap();
        for i in 0..=4 {
            assert!(close(t.values[i], t.values[4 - i], 1e-13));
        }
        assert!(matches!(dual_all_at_point(2, &p, &1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn endpoints_use_closed_forms() {
        let p = WeightParams::new(-0.33, 5.6).unwrap();
        for (x, at_one) in [(0.0, false), (1.0, true)] {
            let t = dual_all_at_point(6, &p, &x).unwrap();
            for i in 0..=6 {
                assert_eq!(t.values[i], dual_endpoint(6, i, &p, at_one).unwrap());
            }
        }
    }

    #[test]
    fn multi_matches_single_point_bitwise() {
        let p = WeightParams::chebyshev();
        let xs: Vec<f64> = (1..100).map(|k| k as f64 / 100.0).collect();
        let tables = dual_all_multi(10, &p, &xs).unwrap();
        assert_eq!(tables.len(), 99);
        for (t, x) in tables.iter().zip(&xs) {
            assert_eq!(t.values, dual_all_at_point(10, &p, x).unwrap().values);
        }
        let one = dual_all_multi(5, &WeightParams::legendre(), &[0.5]).unwrap();
        assert_eq!(one[0].values, dual_all_at_point(5, &WeightParams::legendre(), &0.5).unwrap().values);
    }

    #[test]
    fn multi_reports_offending_index() {
        let p = WeightParams::legendre();
        let err = dual_all_multi(3, &p, &[0.1, 0.2, 1.2, -1.0]).unwrap_err();
        assert_eq!(err, Error::DomainAt { index: 2, x: 1.2 });
    }

    #[test]
    fn recurrence_evaluators_small_cases() {
        let p = WeightParams::legendre();
        let r2 = dual_via_rec2(2, &p, &0.5).unwrap();
        let r3 = dual_via_rec3(3, &p, &0.5).unwrap();
        let d2 = dual_all_at_point(2, &p, &0.5).unwrap().values;
        let d3 = dual_all_at_point(3, &p, &0.5).unwrap().values;
        for i in 0..=2 {
            assert!(close(r2[i], d2[i], 1e-12));
        }
        for i in 0..=3 {
            assert!(close(r3[i], d3[i], 1e-12));
        }
        // seeds only
        assert_eq!(dual_via_rec2(1, &p, &0.3).unwrap().len(), 2);
        assert_eq!(dual_via_rec3(2, &WeightParams::new(0.4, 1.5).unwrap(), &0.3).unwrap().len(), 3);
        assert!(matches!(dual_via_rec2(0, &p, &0.3), Err(Error::Degree { .. })));
        assert!(matches!(dual_via_rec3(1, &p, &0.3), Err(Error::Degree { .. })));
    }

    #[test]
    fn explicit_small_cases() {
        let p = WeightParams::legendre();
        assert!(close(dual_explicit(0, 0, &p, &0.3).unwrap(), 1.0, 1e-15));
        assert!(close(dual_explicit(1, 1, &p, &0.5).unwrap(), 1.0, 1e-14));
        let c = WeightParams::chebyshev();
        let direct = dual_all_at_point(8, &c, &0.6).unwrap().values[3];
        assert!(close(dual_explicit(8, 3, &c, &0.6).unwrap(), direct, 1e-10));
    }

    #[test]
    fn short_sum_reduces_to_end_formulas() {
        let p = WeightParams::new(0.25, 1.5).unwrap();
        let (n, x) = (9usize, 0.42);
        let one = 1.0;
        let rb = jacobi_value_guarded(n, &p.alpha, &(p.beta + one), &x).unwrap();
        let ra = jacobi_value_guarded(n, &(p.alpha + one), &p.beta, &x).unwrap();
        let s1 = p.sigma + 1.0;
        let d0 = if n % 2 == 1 { -1.0 } else { 1.0 } * p.kinv * pochhammer_ratio(&s1, &(p.alpha + 1.0), n) * rb;
        let dn = p.kinv * pochhammer_ratio(&s1, &(p.beta + 1.0), n) * ra;
        assert!(close(dual_short_sum(n, 0, &p, &x).unwrap(), d0, 1e-13));
        assert!(close(dual_short_sum(n, n, &p, &x).unwrap(), dn, 1e-13));
    }
}
