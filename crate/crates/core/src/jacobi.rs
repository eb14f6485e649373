//! Shifted Jacobi polynomials `R_n^(α,β)` on `[0,1]`.
//!
//! These are orthogonal under `<f,g> = ∫ (1-x)^α x^β f(x) g(x) dx` and
//! normalized so that `R_n(1) = (α+1)_n / n!`.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{pochhammer_ratio, weight_mass_inverse};

/// Exponents of the weight `(1-x)^α x^β`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams<T> {
    pub alpha: T,
    pub beta: T,
    /// `α + β + 1`
    pub sigma: T,
    /// `Γ(α+1) Γ(β+1) / Γ(σ+1)`, the total mass of the weight.
    pub k: T,
    /// `1 / k`
    pub kinv: T,
}

impl WeightParams<f64> {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_ctx(alpha, beta, ())
    }

    /// Legendre weight, `α = β = 0`.
    pub fn legendre() -> Self {
        Self::new(0.0, 0.0).expect("valid")
    }

    /// Chebyshev weight, `α = β = -1/2`.
    pub fn chebyshev() -> Self {
        Self::new(-0.5, -0.5).expect("valid")
    }
}

impl<T: Real> WeightParams<T> {
    /// Builds parameters at the precision `ctx` from `f64` exponents, which
    /// are converted exactly.
    pub fn with_ctx(alpha: f64, beta: f64, ctx: T::Ctx) -> Result<Self> {
        Self::from_values(T::from_f64(alpha, ctx), T::from_f64(beta, ctx))
    }

    pub fn from_values(alpha: T, beta: T) -> Result<Self> {
        let (a, b) = (alpha.to_f64(), beta.to_f64());
        let minus_one = alpha.lit(-1.0);
        if !(alpha.is_finite() && beta.is_finite() && alpha > minus_one && beta > minus_one) {
            return Err(Error::InvalidParams { alpha: a, beta: b });
        }
        let sigma = alpha.clone() + beta.clone() + alpha.lit(1.0);
        let kinv = weight_mass_inverse(&alpha, &beta);
        let k = alpha.lit(1.0) / kinv.clone();
        Ok(WeightParams {
            alpha,
            beta,
            sigma,
            k,
            kinv,
        })
    }

    /// Parameters `(β, α)`; the weight mass is symmetric and reused.
    pub fn swapped(&self) -> Self {
        WeightParams {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            sigma: self.sigma.clone(),
            k: self.k.clone(),
            kinv: self.kinv.clone(),
        }
    }

    pub fn ctx(&self) -> T::Ctx {
        self.alpha.ctx()
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta.to_f64()
    }
}

/// `R_n^(α,β)(x)` by its terminating hypergeometric sum in powers of `1-x`.
///
/// Each term is obtained from the previous one by a single ratio, so no
/// Pochhammer symbol or Γ value is ever formed explicitly.
pub fn jacobi_explicit<T: Real>(n: usize, alpha: &T, beta: &T, x: &T) -> T {
    let one = x.lit(1.0);
    let y = one.clone() - x.clone();
    let n_sigma = x.int(n as i64) + alpha.clone() + beta.clone() + x.lit(1.0);
    let alpha1 = alpha.clone() + one.clone();
    let mut term = one.clone();
    let mut sum = one;
    for k in 0..n {
        let kk = x.int(k as i64);
        term = term * x.int(k as i64 - n as i64) * (n_sigma.clone() + kk.clone())
            / (x.int(k as i64 + 1) * (alpha1.clone() + kk))
            * y.clone();
        sum = sum + term.clone();
    }
    let lead = (0..n).fold(x.lit(1.0), |acc, j| {
        acc * (alpha1.clone() + x.int(j as i64)) / x.int(j as i64 + 1)
    });
    lead * sum
}

/// `R_0 .. R_N` at one point.
#[derive(Clone, Debug)]
pub struct JacobiSequence<T> {
    pub alpha: T,
    pub beta: T,
    pub x: T,
    pub values: Vec<T>,
}

/// x-independent part of `ξ0 R_m + ξ1 R_{m+1} + ξ2 R_{m+2} = 0` for
/// `m < N-1`, with `ξ1` split as `ξ1 = a_m (2x-1) + b_m`.
#[derive(Clone, Debug)]
pub struct JacobiRecurrence<T> {
    pub alpha: T,
    pub beta: T,
    max_n: usize,
    xi0: Vec<T>,
    xi1_slope: Vec<T>,
    xi1_offset: Vec<T>,
    xi2: Vec<T>,
}

impl<T: Real> JacobiRecurrence<T> {
    pub fn new(max_n: usize, alpha: &T, beta: &T) -> Result<Self> {
        let steps = max_n.saturating_sub(1);
        let mut rec = JacobiRecurrence {
            alpha: alpha.clone(),
            beta: beta.clone(),
            max_n,
            xi0: Vec::with_capacity(steps),
            xi1_slope: Vec::with_capacity(steps),
            xi1_offset: Vec::with_capacity(steps),
            xi2: Vec::with_capacity(steps),
        };
        let one = alpha.lit(1.0);
        let two = alpha.lit(2.0);
        let three = alpha.lit(3.0);
        let sigma = alpha.clone() + beta.clone() + one.clone();
        let a2_b2 = alpha.clone() * alpha.clone() - beta.clone() * beta.clone();
        for m in 0..steps {
            let mm = alpha.int(m as i64);
            // s = 2m + σ
            let s = two.clone() * mm.clone() + sigma.clone();
            let xi0 = -(two.clone()
                * (mm.clone() + alpha.clone() + one.clone())
                * (mm.clone() + beta.clone() + one.clone())
                * (s.clone() + three.clone()));
            let s2 = s.clone() + two.clone();
            let slope = s2.clone() * (s.clone() + one.clone()) * (s.clone() + three.clone());
            let offset = s2 * a2_b2.clone();
            let xi2 = -(two.clone() * (mm.clone() + two.clone()) * (mm + sigma.clone() + one.clone()) * (s + one.clone()));
            if xi2.is_zero() {
                return Err(Error::DegenerateRecurrence { n: m });
            }
            rec.xi0.push(xi0);
            rec.xi1_slope.push(slope);
            rec.xi1_offset.push(offset);
            rec.xi2.push(xi2);
        }
        Ok(rec)
    }

    pub fn max_degree(&self) -> usize {
        self.max_n
    }

    /// Runs the recurrence at `x`, calling `visit` with `R_0 .. R_N` in
    /// order, and returns `R_N`. `R_1` comes from the explicit sum.
    pub fn run(&self, x: &T, mut visit: impl FnMut(&T)) -> T {
        let r0 = x.lit(1.0);
        visit(&r0);
        if self.max_n == 0 {
            return r0;
        }
        let t = x.lit(2.0) * x.clone() - x.lit(1.0);
        let mut prev = r0;
        let mut cur = jacobi_explicit(1, &self.alpha, &self.beta, x);
        visit(&cur);
        for m in 0..self.max_n - 1 {
            let xi1 = self.xi1_slope[m].clone() * t.clone() + self.xi1_offset[m].clone();
            let next = -(self.xi0[m].clone() * prev + xi1 * cur.clone()) / self.xi2[m].clone();
            visit(&next);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `R_N(x)`.
    pub fn value(&self, x: &T) -> T {
        self.run(x, |_| {})
    }
}

/// All of `R_0 .. R_N` in `O(N)` operations.
pub fn jacobi_sequence<T: Real>(max_n: usize, alpha: &T, beta: &T, x: &T) -> Result<JacobiSequence<T>> {
    let rec = JacobiRecurrence::new(max_n, alpha, beta)?;
    let mut values = Vec::with_capacity(max_n + 1);
    rec.run(x, |v| values.push(v.clone()));
    Ok(JacobiSequence {
        alpha: alpha.clone(),
        beta: beta.clone(),
        x: x.clone(),
        values,
    })
}

/// `R_n(x)` alone, by the recurrence.
pub fn jacobi_value<T: Real>(n: usize, alpha: &T, beta: &T, x: &T) -> Result<T> {
    Ok(JacobiRecurrence::new(n, alpha, beta)?.value(x))
}

/// `R_n(x)` by the recurrence run in the guard arithmetic of `T`, then
/// rounded back. The recurrence loses a digit or two at large `n`; this keeps
/// that loss out of everything built on the value.
pub fn jacobi_value_guarded<T: Real>(n: usize, alpha: &T, beta: &T, x: &T) -> Result<T> {
    let v = jacobi_value(n, &alpha.widen(), &beta.widen(), &x.widen())?;
    Ok(T::narrow(&v, x.ctx()))
}

/// `h_k = <R_k, R_k>`.
pub fn jacobi_norm<T: Real>(k: usize, params: &WeightParams<T>) -> T {
    let one = params.alpha.lit(1.0);
    if k == 0 {
        return params.k.clone();
    }
    let a1 = params.alpha.clone() + one.clone();
    let b1 = params.beta.clone() + one.clone();
    // (α+1)_k (β+1)_k / (k! (2k+σ) (σ+1)_{k-1}), which equals the usual
    // form with (2k/σ+1)(σ)_k and stays finite at σ = 0.
    let mut ratio = one.clone();
    for j in 0..k {
        let jj = one.int(j as i64);
        ratio = ratio * (a1.clone() + jj.clone()) / one.int(j as i64 + 1) * (b1.clone() + jj.clone());
        if j + 1 < k {
            ratio = ratio / (params.sigma.clone() + one.clone() + jj);
        }
    }
    params.k.clone() * ratio / (one.int(2 * k as i64) + params.sigma.clone())
}

/// `(α+1)_n / n!`, the value of `R_n` at `x = 1`.
pub fn jacobi_at_one<T: Real>(n: usize, alpha: &T) -> T {
    let a1 = alpha.clone() + alpha.lit(1.0);
    pochhammer_ratio(&a1, &alpha.lit(1.0), n)
}
