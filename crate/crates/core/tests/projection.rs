use dualbern::bernstein::{bernstein_all, weight};
use dualbern::projection::{default_nodes, gauss_legendre, project, Builtin};
use dualbern::WeightParams;

fn basis(n: usize, j: usize) -> impl Fn(f64) -> f64 {
    move |x| bernstein_all(n, &x).unwrap().values[j]
}

#[test]
fn basis_functions_project_to_unit_vectors() {
    for (a, b) in [(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)] {
        let p = WeightParams::new(a, b).unwrap();
        let n = 7;
        for j in 0..=n {
            let r = project(basis(n, j), n, &p, 64).unwrap();
            for (k, c) in r.coeffs.iter().enumerate() {
                let want = if k == j { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-10, "({a},{b}) j={j} k={k}: {c}");
            }
            assert!(r.error_sq < 1e-20);
        }
    }
}

#[test]
fn residual_is_orthogonal_to_the_basis() {
    let n = 9;
    let m = 128;
    let (nodes, weights) = gauss_legendre(m);
    for (a, b) in [(0.0, 0.0), (2.0, 1.0)] {
        let p = WeightParams::new(a, b).unwrap();
        for f in [Builtin::Exp, Builtin::Sin2Pi, Builtin::Runge] {
            let r = project(|x| f.eval(x), n, &p, m).unwrap();
            for i in 0..=n {
                let mut s = 0.0;
                for (&x, &w) in nodes.iter().zip(&weights) {
                    let bi = bernstein_all(n, &x).unwrap().values[i];
                    s += w * weight(&p, x).unwrap() * (f.eval(x) - r.eval(x).unwrap()) * bi;
                }
                assert!(s.abs() < 1e-12, "({a},{b}) {f} i={i}: {s:e}");
            }
        }
    }
}

#[test]
fn polynomials_of_lower_degree_are_reproduced() {
    let cubic = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
    for (a, b) in [(0.0, 0.0), (1.0, 3.0), (4.0, 2.0)] {
        let p = WeightParams::new(a, b).unwrap();
        for n in [3, 6, 12] {
            let r = project(cubic, n, &p, default_nodes(n)).unwrap();
            for x in [0.0, 0.2, 0.55, 1.0] {
                assert!((r.eval(x).unwrap() - cubic(x)).abs() < 1e-11, "({a},{b}) n={n} x={x}");
            }
            assert!(r.error_sq < 1e-22, "({a},{b}) n={n}: {:e}", r.error_sq);
        }
    }
}

#[test]
fn error_decreases_for_smooth_functions() {
    let p = WeightParams::new(1.0, 1.0).unwrap();
    let errs: Vec<f64> = [2, 4, 6, 8].iter().map(|&n| project(f64::exp, n, &p, 64).unwrap().error_sq).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}
