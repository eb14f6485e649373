//! Weighted least-squares approximation in Bernstein-Bézier form.
//!
//! The best approximation `p*_n = Σ I_k B^n_k` of `f` in the weighted `L²`
//! norm has coefficients `I_k = <f, D^n_k>`, so one multi-point dual
//! evaluation at the quadrature nodes yields all of them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::bernstein::{bernstein_all, weight};
use crate::dual::dual_all_multi;
use crate::error::{Error, Result};
use crate::jacobi::WeightParams;

/// Largest supported quadrature rule.
pub const MAX_NODES: usize = 256;

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub n: usize,
    pub params: WeightParams<f64>,
    /// `I_0 .. I_n`.
    pub coeffs: Vec<f64>,
    /// Weighted `L²` error `||f - p*_n||²`.
    pub error_sq: f64,
    pub quad_nodes: usize,
}

impl ProjectionResult {
    /// `p*_n(x)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let b = bernstein_all(self.n, &x)?;
        Ok(b.values.iter().zip(&self.coeffs).map(|(b, c)| b * c).sum())
    }
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[0,1]`.
///
/// Nodes come in increasing order. Roots of `P_m` on `[-1,1]` are found by
/// Newton's method from the usual cosine guesses; only the lower half is
/// computed and mirrored, so the rule is exactly symmetric.
///
/// # Panics
///
/// If `m` is outside `1..=MAX_NODES`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!((1..=MAX_NODES).contains(&m), "node count {m} outside 1..={MAX_NODES}");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut t = -(PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, t);
        if d != 0.0 {
            dp = d;
        }
        let w = 1.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = 0.5 * (1.0 + t);
        nodes[m - 1 - i] = 0.5 * (1.0 - t);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.5;
    }
    (nodes, weights)
}

/// `P_m(t)` and `P'_m(t)` on `[-1,1]`.
fn legendre_with_derivative(m: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Node count used when the caller does not choose one.
pub fn default_nodes(n: usize) -> usize {
    (2 * n + 16).clamp(64, MAX_NODES)
}

/// Projects `f` onto polynomials of degree `n` in the norm weighted by
/// `(1-x)^α x^β`, using an `m`-point Gauss-Legendre rule.
///
/// Only `α, β >= 0` are accepted: the weight is folded into the integrand,
/// which must stay bounded for the rule to converge.
pub fn project(f: impl Fn(f64) -> f64, n: usize, params: &WeightParams<f64>, m: usize) -> Result<ProjectionResult> {
    if params.alpha < 0.0 || params.beta < 0.0 {
        return Err(Error::UnsupportedParams(format!(
            "projection needs alpha, beta >= 0 (got {}, {})",
            params.alpha, params.beta
        )));
    }
    if !(1..=MAX_NODES).contains(&m) {
        return Err(Error::Config(format!("node count {m} outside 1..={MAX_NODES}")));
    }
    let (nodes, weights) = gauss_legendre(m);
    let mut fw = Vec::with_capacity(m);
    let mut fx = Vec::with_capacity(m);
    for (&x, &w) in nodes.iter().zip(&weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Config(format!("integrand is not finite at x={x}")));
        }
        fx.push(v);
        fw.push(w * weight(params, x)?);
    }

    let tables = dual_all_multi(n, params, &nodes)?;
    let mut coeffs = vec![0.0; n + 1];
    for ((t, v), w) in tables.iter().zip(&fx).zip(&fw) {
        for (c, d) in coeffs.iter_mut().zip(&t.values) {
            *c += w * v * d;
        }
    }

    let mut error_sq = 0.0;
    for ((&x, v), w) in nodes.iter().zip(&fx).zip(&fw) {
        let b = bernstein_all(n, &x)?;
        let p: f64 = b.values.iter().zip(&coeffs).map(|(b, c)| b * c).sum();
        error_sq += w * (v - p) * (v - p);
    }

    Ok(ProjectionResult {
        n,
        params: params.clone(),
        coeffs,
        error_sq,
        quad_nodes: m,
    })
}

/// Test integrands addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    One,
    X,
    Exp,
    Sin2Pi,
    /// `1/(1+25(2x-1)²)`.
    Runge,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::One, Builtin::X, Builtin::Exp, Builtin::Sin2Pi, Builtin::Runge];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Builtin::One => 1.0,
            Builtin::X => x,
            Builtin::Exp => x.exp(),
            Builtin::Sin2Pi => (2.0 * PI * x).sin(),
            Builtin::Runge => {
                let t = 2.0 * x - 1.0;
                1.0 / (1.0 + 25.0 * t * t)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::One => "one",
            Builtin::X => "x",
            Builtin::Exp => "exp",
            Builtin::Sin2Pi => "sin2pi",
            Builtin::Runge => "runge",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown function '{s}' (expected one, x, exp, sin2pi or runge)")))
    }
}
