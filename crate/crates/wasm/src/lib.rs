//! Browser bindings: sample dual curves, profile their accuracy against
//! the multiprecision reference, and project a built-in function.

use dualbern::projection::{default_nodes, project, Builtin};
use dualbern::reference::{acc, highprec_dual_multi, percent_grid};
use dualbern::{dual_all_multi, WeightParams};
use wasm_bindgen::prelude::*;

/// Degrees above this make the reference too slow for an interactive page.
pub const MAX_PROFILE_DEGREE: usize = 200;

fn params(alpha: f64, beta: f64) -> Result<WeightParams<f64>, JsError> {
    WeightParams::new(alpha, beta).map_err(|e| JsError::new(&e.to_string()))
}

fn js(e: dualbern::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `samples` equally spaced points on `[0,1]`, ends included.
fn uniform(samples: usize) -> Vec<f64> {
    match samples {
        0 => vec![],
        1 => vec![0.5],
        _ => (0..samples).map(|k| k as f64 / (samples - 1) as f64).collect(),
    }
}

/// All `D^n_i` on a uniform grid, row-major: `samples` rows of `n+1`.
#[wasm_bindgen(js_name = dualCurves)]
pub fn dual_curves(n: usize, alpha: f64, beta: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    let p = params(alpha, beta)?;
    let tables = dual_all_multi(n, &p, &uniform(samples)).map_err(js)?;
    Ok(tables.into_iter().flat_map(|t| t.values).collect())
}

/// Per-point accuracy of the binary64 evaluation on `0.01, 0.02, .., 0.99`.
///
/// Returns triples `x, min, mean` in decimal digits, capped at 17.
#[wasm_bindgen(js_name = accuracyProfile)]
pub fn accuracy_profile(n: usize, alpha: f64, beta: f64, ref_digits: u32) -> Result<Vec<f64>, JsError> {
    if n > MAX_PROFILE_DEGREE {
        return Err(JsError::new(&format!("degree {n} above {MAX_PROFILE_DEGREE}")));
    }
    let p = params(alpha, beta)?;
    let xs = percent_grid();
    let exact = highprec_dual_multi(n, alpha, beta, &xs, ref_digits).map_err(js)?;
    let got = dual_all_multi(n, &p, &xs).map_err(js)?;
    // tiny exact values carry no relative information
    let floor = -f64::from(ref_digits) / 2.0;
    let mut out = Vec::with_capacity(3 * xs.len());
    for ((x, e), g) in xs.iter().zip(&exact).zip(&got) {
        let mut digits = Vec::with_capacity(n + 1);
        for (v, e) in g.values.iter().zip(&e.values) {
            if e.log10_abs() >= floor {
                digits.push(acc(v, e, 17.0).map_err(js)?);
            }
        }
        let min = digits.iter().copied().fold(17.0, f64::min);
        let mean = if digits.is_empty() { 17.0 } else { digits.iter().sum::<f64>() / digits.len() as f64 };
        out.extend([*x, min, mean]);
    }
    Ok(out)
}

/// Least-squares approximation of a named function.
#[wasm_bindgen]
pub struct Projection {
    function: Builtin,
    inner: dualbern::projection::ProjectionResult,
}

#[wasm_bindgen]
impl Projection {
    #[wasm_bindgen(constructor)]
    pub fn new(function: &str, n: usize, alpha: f64, beta: f64) -> Result<Projection, JsError> {
        let f: Builtin = function.parse().map_err(js)?;
        let p = params(alpha, beta)?;
        let inner = project(|x| f.eval(x), n, &p, default_nodes(n)).map_err(js)?;
        Ok(Projection { function: f, inner })
    }

    /// Bézier coefficients `I_0 .. I_n`.
    pub fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs.clone()
    }

    #[wasm_bindgen(getter, js_name = errorSq)]
    pub fn error_sq(&self) -> f64 {
        self.inner.error_sq
    }

    /// Approximant and target on a uniform grid, as pairs.
    pub fn sample(&self, samples: usize) -> Result<Vec<f64>, JsError> {
        let mut out = Vec::with_capacity(2 * samples);
        for x in uniform(samples) {
            out.push(self.inner.eval(x).map_err(js)?);
            out.push(self.function.eval(x));
        }
        Ok(out)
    }
}
