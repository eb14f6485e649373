//! Ground truth for the dual basis.
//!
//! Two independent oracles live here. For small `n` and non-negative integer
//! parameters the dual basis is obtained exactly by inverting the Gram
//! matrix of the Bernstein basis over the rationals. For everything else the
//! production algorithm is rerun in wide [`BigFloat`] arithmetic. The `acc`
//! metric and the accuracy experiment harness sit on top of both.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::dual::{DualEvaluator, DualTable};
use crate::error::{Error, Result};
use crate::jacobi::WeightParams;
use crate::real::{Bits, Real};

/// Largest degree accepted by the exact Gram path.
pub const MAX_EXACT_DEGREE: usize = 12;

/// Default precision of the reference evaluation, in decimal digits.
pub const DEFAULT_REFERENCE_DIGITS: u32 = 512;

/// Square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    pub n: usize,
    /// `(n+1) x (n+1)` row-major entries.
    pub entries: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        RationalMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let d = self.dim();
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(BigRational::zero(), |acc, k| acc + &self.entries[i][k] * &other.entries[k][j]))
                    .collect()
            })
            .collect();
        RationalMatrix { n: self.n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Leading principal minors, in order of size.
    pub fn leading_minors(&self) -> Vec<BigRational> {
        let (scale, ints) = self.to_integer_matrix();
        let d = self.dim();
        let mut pivots = Vec::with_capacity(d);
        let _ = bareiss_gauss_jordan(ints, |k, p| pivots.push((k, p.clone())));
        // The k-th Bareiss pivot is the (k+1)-th leading minor of the scaled matrix.
        pivots
            .into_iter()
            .map(|(k, p)| BigRational::new(p, scale.pow(k as u32 + 1)))
            .collect()
    }

    /// All leading principal minors are positive.
    pub fn is_positive_definite(&self) -> bool {
        let minors = self.leading_minors();
        self.is_symmetric() && minors.len() == self.dim() && minors.iter().all(|m| m.is_positive())
    }

    /// Exact inverse by fraction-free Gauss-Jordan elimination, or `None`
    /// if a pivot vanishes.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        let (scale, ints) = self.to_integer_matrix();
        let d = self.dim();
        let (det, adj) = bareiss_gauss_jordan(ints, |_, _| {})?;
        // A = G * scale, so G^-1 = scale * A^-1 = scale * adj / det.
        let entries = (0..d)
            .map(|i| (0..d).map(|j| BigRational::new(&adj[i][j] * &scale, det.clone())).collect())
            .collect();
        Some(RationalMatrix { n: self.n, entries })
    }

    /// `(L, L * self)` with `L` the lcm of all denominators.
    fn to_integer_matrix(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let scale = self
            .entries
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| v.numer() * (&scale / v.denom())).collect())
            .collect();
        (scale, ints)
    }
}

/// Fraction-free Gauss-Jordan on `[A | I]` without pivoting. Returns
/// `(det A, det A * A^-1)`; `on_pivot(k, p)` sees each pivot, which is the
/// `(k+1)`-th leading principal minor of `A`.
fn bareiss_gauss_jordan(
    a: Vec<Vec<BigInt>>,
    mut on_pivot: impl FnMut(usize, &BigInt),
) -> Option<(BigInt, Vec<Vec<BigInt>>)> {
    let d = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..d {
        let p = m[k][k].clone();
        on_pivot(k, &p);
        if p.is_zero() {
            return None;
        }
        for i in 0..d {
            if i == k {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..2 * d {
                let num = &p * &m[i][j] - &f * &m[k][j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                m[i][j] = num / &prev;
            }
        }
        prev = p;
    }
    let det = prev;
    let adj = m.into_iter().map(|row| row[d..].to_vec()).collect();
    Some((det, adj))
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * j)
}

fn binomial(n: u64, k: u64) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `Beta(a, b) = (a-1)! (b-1)! / (a+b-1)!` for positive integers.
fn beta_int(a: u64, b: u64) -> BigRational {
    BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
}

/// Exponents as non-negative integers, or `UnsupportedParams`.
pub fn integer_params(alpha: f64, beta: f64) -> Result<(u64, u64)> {
    let ok = |v: f64| v >= 0.0 && v.fract() == 0.0 && v <= 64.0;
    if ok(alpha) && ok(beta) {
        Ok((alpha as u64, beta as u64))
    } else {
        Err(Error::UnsupportedParams(format!(
            "exact arithmetic needs non-negative integer alpha, beta (got {alpha}, {beta})"
        )))
    }
}

fn check_exact_degree(n: usize) -> Result<()> {
    if n > MAX_EXACT_DEGREE {
        Err(Error::UnsupportedParams(format!(
            "exact Gram path supports n <= {MAX_EXACT_DEGREE} (got {n})"
        )))
    } else {
        Ok(())
    }
}

/// `<B^n_i, B^n_j>` for all `i, j`, exactly.
pub fn gram_matrix(n: usize, params: &WeightParams<f64>) -> Result<RationalMatrix> {
    let (a, b) = integer_params(params.alpha, params.beta)?;
    check_exact_degree(n)?;
    let nn = n as u64;
    let entries = (0..=nn)
        .map(|i| {
            (0..=nn)
                .map(|j| {
                    let c = BigRational::from_integer(binomial(nn, i) * binomial(nn, j));
                    c * beta_int(i + j + b + 1, 2 * nn - i - j + a + 1)
                })
                .collect()
        })
        .collect();
    Ok(RationalMatrix { n, entries })
}

/// Matrix `M` with `D^n_j = Σ_i M[j][i] B^n_i`, i.e. the inverse Gram matrix.
pub fn dual_coeffs_exact(n: usize, params: &WeightParams<f64>) -> Result<RationalMatrix> {
    let g = gram_matrix(n, params)?;
    g.inverse()
        .ok_or_else(|| Error::UnsupportedParams("Gram matrix is singular".into()))
}

/// `B^n_0(x) .. B^n_n(x)` at a rational point.
pub fn bernstein_exact(n: usize, x: &BigRational) -> Vec<BigRational> {
    let y = BigRational::one() - x;
    (0..=n)
        .map(|i| {
            BigRational::from_integer(binomial(n as u64, i as u64))
                * num_traits::pow(x.clone(), i)
                * num_traits::pow(y.clone(), n - i)
        })
        .collect()
}

/// Exact `D^n_0(x) .. D^n_n(x)` from the dual coefficient matrix.
pub fn dual_values_exact(m: &RationalMatrix, x: &BigRational) -> Vec<BigRational> {
    let b = bernstein_exact(m.n, x);
    m.entries
        .iter()
        .map(|row| row.iter().zip(&b).fold(BigRational::zero(), |acc, (c, bi)| acc + c * bi))
        .collect()
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

/// Monomial coefficients of `R_n^(α,β)` for integer parameters.
pub fn jacobi_poly_exact(n: usize, alpha: u64, beta: u64) -> Vec<BigRational> {
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let (a, b) = (alpha as i64, beta as i64);
    let nn = n as i64;
    // Coefficients of the sum in powers of y = 1-x.
    let mut lead = BigRational::one();
    for j in 0..nn {
        lead = lead * q(a + 1 + j) / q(j + 1);
    }
    let mut ycoef = Vec::with_capacity(n + 1);
    let mut term = BigRational::one();
    for k in 0..=nn {
        ycoef.push(&lead * &term);
        if k < nn {
            term = term * q(k - nn) * q(nn + a + b + 1 + k) / (q(k + 1) * q(a + 1 + k));
        }
    }
    // (1-x)^k expanded in powers of x.
    let mut coef = vec![BigRational::zero(); n + 1];
    for (k, c) in ycoef.iter().enumerate() {
        for m in 0..=k {
            let sign = if m % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            coef[m] += c * BigRational::from_integer(sign * binomial(k as u64, m as u64));
        }
    }
    coef
}

/// `∫_0^1 (1-x)^α x^β p(x) q(x) dx` for monomial coefficient vectors.
pub fn weighted_inner_exact(p: &[BigRational], q: &[BigRational], alpha: u64, beta: u64) -> BigRational {
    let mut prod = vec![BigRational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    // ∫ (1-x)^α x^(m+β) = Beta(m+β+1, α+1)
    prod.iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (m, c)| acc + c * beta_int(m as u64 + beta + 1, alpha + 1))
}

/// `h_k` for integer parameters, exactly.
pub fn jacobi_norm_exact(k: usize, alpha: u64, beta: u64) -> BigRational {
    let q = |v: u64| BigRational::from_integer(BigInt::from(v));
    let kk = k as u64;
    let big_k = beta_int(alpha + 1, beta + 1);
    let sigma = alpha + beta + 1;
    // same σ=0-safe arrangement as the floating version
    let mut ratio = BigRational::one();
    for j in 0..kk {
        ratio = ratio * q(alpha + 1 + j) * q(beta + 1 + j) / q(j + 1);
        if j + 1 < kk {
            ratio /= q(sigma + 1 + j);
        }
    }
    if k == 0 {
        return big_k;
    }
    big_k * ratio / q(2 * kk + sigma)
}

/// Working precision of an accuracy experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Binary64,
    /// Decimal digits, emulated by a binary mantissa carrying at least that
    /// many digits.
    Digits(u32),
}

impl Precision {
    /// Digit count that caps `acc`.
    pub fn digits(&self) -> f64 {
        match self {
            Precision::Binary64 => f64::decimal_digits(()),
            Precision::Digits(d) => f64::from(*d),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Binary64 => write!(f, "binary64"),
            Precision::Digits(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "f64" | "binary64" | "double" => Ok(Precision::Binary64),
            t => match t.parse::<u32>() {
                Ok(d) if d >= 2 => Ok(Precision::Digits(d)),
                _ => Err(Error::Config(format!("unknown precision '{s}' (use f64 or a digit count >= 2)"))),
            },
        }
    }
}

/// `-log10 |1 - approx/exact|`, clamped to `[0, cap]`.
///
/// A non-finite `approx` counts as total loss.
pub fn acc<T: Real>(approx: &T, exact: &BigFloat, cap: f64) -> Result<f64> {
    if exact.is_zero() {
        return Err(Error::UndefinedAcc);
    }
    if !approx.is_finite() {
        return Ok(0.0);
    }
    let prec = exact.precision().max(approx.to_bigfloat().precision()) + 64;
    let a = approx.to_bigfloat().with_precision(prec);
    let one = BigFloat::one(prec);
    let rel = one - a / exact.with_precision(prec);
    if rel.is_zero() {
        return Ok(cap);
    }
    Ok((-rel.log10_abs()).clamp(0.0, cap))
}

/// [`acc`] on plain `f64` values, capped at binary64 precision.
pub fn acc_f64(approx: f64, exact: f64) -> Result<f64> {
    acc(&approx, &BigFloat::from_f64(exact, 53), Precision::Binary64.digits())
}

/// `D^n_0(x) .. D^n_n(x)` by the production algorithm in `digits`-digit
/// arithmetic. `x` and the parameters enter exactly.
pub fn highprec_dual_all(n: usize, alpha: f64, beta: f64, x: f64, digits: u32) -> Result<DualTable<BigFloat>> {
    Ok(highprec_dual_multi(n, alpha, beta, &[x], digits)?.pop().expect("one point"))
}

/// [`highprec_dual_all`] at many points with one pair of coefficient tables.
pub fn highprec_dual_multi(n: usize, alpha: f64, beta: f64, xs: &[f64], digits: u32) -> Result<Vec<DualTable<BigFloat>>> {
    let bits = Bits(bits_for_digits(digits));
    let params = WeightParams::<BigFloat>::with_ctx(alpha, beta, bits)?;
    let points: Vec<BigFloat> = xs
        .iter()
        .enumerate()
        .map(|(index, &x)| {
            if x.is_finite() && (0.0..=1.0).contains(&x) {
                Ok(BigFloat::from_f64(x, bits.0))
            } else {
                Err(Error::DomainAt { index, x })
            }
        })
        .collect::<Result<_>>()?;
    crate::dual::dual_all_multi(n, &params, &points)
}

/// The grid `{0.01, 0.02, ..., 0.99}`.
pub fn percent_grid() -> Vec<f64> {
    (1..100).map(|k| k as f64 / 100.0).collect()
}

/// Accuracy statistics of one `(n, α, β, precision)` run.
#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub precision: Precision,
    pub mean_acc: f64,
    /// Nearest-rank first percentile.
    pub p1_acc: f64,
    pub min_acc: f64,
    pub grid: String,
    /// Number of values that entered the statistics.
    pub compared: usize,
    /// Number of values skipped because the reference is (numerically) zero.
    pub skipped: usize,
    /// Number of compared values whose working-precision result was not finite.
    pub non_finite: usize,
}

/// Experiment set-up shared by every run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub grid: Vec<f64>,
    pub grid_label: String,
    pub reference_digits: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid: percent_grid(),
            grid_label: "0.01:0.99:0.01".into(),
            reference_digits: DEFAULT_REFERENCE_DIGITS,
        }
    }
}

/// Reference tables for one `(n, α, β)`, reusable across working precisions.
pub struct ReferenceRun {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub tables: Vec<DualTable<BigFloat>>,
    digits: u32,
}

impl ReferenceRun {
    pub fn new(n: usize, alpha: f64, beta: f64, config: &ExperimentConfig) -> Result<Self> {
        if let Some((index, &x)) = config.grid.iter().enumerate().find(|(_, x)| !(**x > 0.0 && **x < 1.0)) {
            return Err(Error::DomainAt { index, x });
        }
        let tables = highprec_dual_multi(n, alpha, beta, &config.grid, config.reference_digits)?;
        Ok(ReferenceRun {
            n,
            alpha,
            beta,
            tables,
            digits: config.reference_digits,
        })
    }

    /// Evaluates the grid at `precision` and compares against the reference.
    pub fn report(&self, precision: Precision, config: &ExperimentConfig) -> Result<AccuracyReport> {
        if f64::from(self.digits) <= 2.0 * precision.digits() {
            return Err(Error::Config(format!(
                "reference digits ({}) must exceed twice the working precision ({})",
                self.digits,
                precision.digits()
            )));
        }
        let samples = match precision {
            Precision::Binary64 => {
                let params = WeightParams::new(self.alpha, self.beta)?;
                self.samples(&params, &config.grid, precision.digits(), |x| x)?
            }
            Precision::Digits(d) => {
                let bits = Bits(bits_for_digits(d));
                let params = WeightParams::<BigFloat>::with_ctx(self.alpha, self.beta, bits)?;
                self.samples(&params, &config.grid, precision.digits(), |x| BigFloat::from_f64(x, bits.0))?
            }
        };
        let Samples {
            mut accs,
            skipped,
            non_finite,
        } = samples;
        if accs.is_empty() {
            return Err(Error::Config("no comparable values in the grid".into()));
        }
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        accs.sort_by(f64::total_cmp);
        let rank = (accs.len() as f64 * 0.01).ceil().max(1.0) as usize;
        Ok(AccuracyReport {
            n: self.n,
            alpha: self.alpha,
            beta: self.beta,
            precision,
            mean_acc: mean,
            p1_acc: accs[rank - 1],
            min_acc: accs[0],
            grid: config.grid_label.clone(),
            compared: accs.len(),
            skipped,
            non_finite,
        })
    }

    fn samples<T: Real>(
        &self,
        params: &WeightParams<T>,
        grid: &[f64],
        cap: f64,
        lift: impl Fn(f64) -> T,
    ) -> Result<Samples> {
        let eval = DualEvaluator::new(self.n, params)?;
        // |exact| below this is treated as a zero of the polynomial.
        let tiny = -f64::from(self.digits) / 2.0;
        let mut out = Samples::default();
        for (x, reference) in grid.iter().zip(&self.tables) {
            let table = eval.eval(&lift(*x))?;
            for (approx, exact) in table.values.iter().zip(&reference.values) {
                if exact.is_zero() || exact.log10_abs() < tiny {
                    out.skipped += 1;
                    continue;
                }
                if !approx.is_finite() {
                    out.non_finite += 1;
                }
                out.accs.push(acc(approx, exact, cap)?);
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Samples {
    accs: Vec<f64>,
    skipped: usize,
    non_finite: usize,
}

/// One report per `(n, params, precision)`, in that nesting order.
pub fn run_experiment(
    n_list: &[usize],
    params_list: &[(f64, f64)],
    precisions: &[Precision],
    config: &ExperimentConfig,
) -> Result<Vec<AccuracyReport>> {
    let max_digits = precisions.iter().map(Precision::digits).fold(0.0, f64::max);
    if f64::from(config.reference_digits) <= 2.0 * max_digits {
        return Err(Error::Config(format!(
            "reference digits ({}) must exceed twice the largest working precision ({max_digits})",
            config.reference_digits
        )));
    }
    let mut out = Vec::new();
    for &n in n_list {
        for &(alpha, beta) in params_list {
            let reference = ReferenceRun::new(n, alpha, beta, config)?;
            for &p in precisions {
                out.push(reference.report(p, config)?);
            }
        }
    }
    Ok(out)
}
