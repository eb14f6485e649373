use dualbern::bernstein::bernstein_all;
use dualbern::bigfloat::bits_for_digits;
use dualbern::dual::{
    dual_endpoint, dual_explicit, dual_short_sum, dual_via_rec2, dual_via_rec3, elevation_coeff, t_poly,
    t_poly_connection,
};
use dualbern::jacobi::jacobi_value;
use dualbern::projection::gauss_legendre;
use dualbern::reference::{acc, highprec_dual_all};
use dualbern::{dual_all_at_point, dual_all_multi, BigFloat, Bits, WeightParams};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn params() -> impl Strategy<Value = WeightParams<f64>> {
    (-0.95f64..6.0, -0.95f64..6.0).prop_map(|(a, b)| WeightParams::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetry_under_reflection(n in 1usize..120, p in params(), x in 0.01f64..0.99) {
        let u = dual_all_at_point(n, &p, &x).unwrap().values;
        let v = dual_all_at_point(n, &p.swapped(), &(1.0 - x)).unwrap().values;
        for i in 0..=n {
            prop_assert!(rel(u[i], v[n - i]) < 1e-10, "i={} {} vs {}", i, u[i], v[n - i]);
        }
    }

    #[test]
    fn degree_elevation(n in 0usize..=30, p in params(), x in 0.02f64..0.98) {
        let lo = dual_all_at_point(n, &p, &x).unwrap().values;
        let hi = dual_all_at_point(n + 1, &p, &x).unwrap().values;
        let r = jacobi_value(n + 1, &p.alpha, &p.beta, &x).unwrap();
        let m = (n + 1) as f64;
        for i in 0..=n + 1 {
            let t = [
                if i <= n { (1.0 - i as f64 / m) * lo[i] } else { 0.0 },
                if i >= 1 { i as f64 / m * lo[i - 1] } else { 0.0 },
                elevation_coeff(n, i, &p) * r,
            ];
            let scale = t.iter().fold(hi[i].abs(), |s, v| s.max(v.abs()));
            let err = (hi[i] - t.iter().sum::<f64>()).abs() / scale;
            prop_assert!(err < 1e-8, "i={} err={:e}", i, err);
        }
    }

    #[test]
    fn t_poly_two_forms_agree(n in 0usize..=40, p in params(), x in 0.0f64..=1.0, frac in 0.0f64..=1.0) {
        let i = ((n as f64) * frac).round() as usize;
        let a = t_poly(n, i, &p, &x).unwrap();
        let b = t_poly_connection(n, i, &p, &x).unwrap();
        let scale = t_poly(n, 0, &p, &x).unwrap().abs().max(t_poly(n, n, &p, &x).unwrap().abs()).max(a.abs());
        prop_assert!((a - b).abs() <= 1e-10 * scale.max(1e-300), "{} vs {}", a, b);
    }

    #[test]
    fn multi_point_matches_single_point(n in 0usize..60, p in params(), xs in prop::collection::vec(0.0f64..=1.0, 1..8)) {
        let tables = dual_all_multi(n, &p, &xs).unwrap();
        for (t, x) in tables.iter().zip(&xs) {
            let single = dual_all_at_point(n, &p, x).unwrap();
            prop_assert_eq!(&t.values, &single.values);
        }
    }
}

#[test]
fn endpoint_continuity() {
    for (a, b) in [(0.0, 0.0), (-0.5, -0.5), (-0.33, 5.6), (2.0, 1.0)] {
        let p = WeightParams::new(a, b).unwrap();
        for n in 0..=20 {
            let near0 = dual_all_at_point(n, &p, &1e-8).unwrap().values;
            let near1 = dual_all_at_point(n, &p, &(1.0 - 1e-8)).unwrap().values;
            for i in 0..=n {
                let e0 = dual_endpoint(n, i, &p, false).unwrap();
                let e1 = dual_endpoint(n, i, &p, true).unwrap();
                assert!(rel(near0[i], e0) < 1e-4, "n={n} i={i} ({a},{b}) at 0: {} vs {e0}", near0[i]);
                assert!(rel(near1[i], e1) < 1e-4, "n={n} i={i} ({a},{b}) at 1: {} vs {e1}", near1[i]);
            }
        }
    }
}

#[test]
fn duality_under_quadrature() {
    // ∫ w B_i D_j = δ_ij; the integrand is a polynomial of degree 2n for
    // integer parameters, which 32 Gauss points integrate exactly.
    let (nodes, weights) = gauss_legendre(32);
    for (a, b) in [(0.0, 0.0), (1.0, 2.0), (3.0, 0.0)] {
        let p = WeightParams::new(a, b).unwrap();
        let n = 12;
        let tables = dual_all_multi(n, &p, &nodes).unwrap();
        for i in 0..=n {
            for j in 0..=n {
                let mut s = 0.0;
                for ((x, w), t) in nodes.iter().zip(&weights).zip(&tables) {
                    let bx = bernstein_all(n, x).unwrap().values;
                    s += w * (1.0 - x).powf(a) * x.powf(b) * bx[i] * t.values[j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-9, "({a},{b}) i={i} j={j}: {s}");
            }
        }
    }
}

#[test]
fn cross_methods_at_fifty_digits() {
    let bits = Bits(bits_for_digits(50));
    for (n, a, b, x) in [(12, 0.0, 0.0, 0.3), (30, -0.5, -0.5, 0.7), (30, -0.33, 5.6, 0.25), (20, 1.5, 0.5, 0.85)] {
        let p = WeightParams::<BigFloat>::with_ctx(a, b, bits).unwrap();
        let xb = BigFloat::from_f64(x, bits.0);
        let exact = highprec_dual_all(n, a, b, x, 120).unwrap().values;
        let methods: [Vec<BigFloat>; 5] = [
            dual_all_at_point(n, &p, &xb).unwrap().values,
            dual_via_rec2(n, &p, &xb).unwrap(),
            dual_via_rec3(n, &p, &xb).unwrap(),
            (0..=n).map(|i| dual_explicit(n, i, &p, &xb).unwrap()).collect(),
            (0..=n).map(|i| dual_short_sum(n, i, &p, &xb).unwrap()).collect(),
        ];
        for (k, m) in methods.iter().enumerate() {
            for (v, e) in m.iter().zip(&exact) {
                let d = acc(v, e, 50.0).unwrap();
                assert!(d >= 40.0, "method {k} n={n} ({a},{b}) x={x}: {d:.1} digits");
            }
        }
    }
}

#[test]
fn cross_methods_in_binary64_examples() {
    let check = |n: usize, a: f64, b: f64, x: f64, rec: fn(usize, &WeightParams<f64>, &f64) -> dualbern::Result<Vec<f64>>| {
        let p = WeightParams::new(a, b).unwrap();
        let main = dual_all_at_point(n, &p, &x).unwrap().values;
        let other = rec(n, &p, &x).unwrap();
        for i in 0..=n {
            assert!(rel(main[i], other[i]) < 1e-8, "n={n} ({a},{b}) x={x} i={i}");
        }
    };
    check(2, 0.0, 0.0, 0.5, dual_via_rec2);
    check(30, -0.5, -0.5, 0.7, dual_via_rec2);
    check(3, 0.0, 0.0, 0.5, dual_via_rec3);
    check(30, -0.33, 5.6, 0.25, dual_via_rec3);
}

#[test]
fn second_order_reports_vanishing_leading_coefficient() {
    // T_{3,1}(1/2) = 0 for symmetric weights, so u2(1) vanishes.
    let r = dual_via_rec2(3, &WeightParams::legendre(), &0.5);
    assert!(matches!(r, Err(dualbern::Error::SingularCoefficient { i: 1 })), "{r:?}");
}

#[test]
fn large_degree_matches_reference_where_representable() {
    let n = 1000;
    for (a, b) in [(0.0, 0.0), (-0.5, -0.5)] {
        let p = WeightParams::new(a, b).unwrap();
        for x in [0.01, 0.5, 0.99] {
            let got = dual_all_at_point(n, &p, &x).unwrap().values;
            let exact = highprec_dual_all(n, a, b, x, 40).unwrap().values;
            for (i, (v, e)) in got.iter().zip(&exact).enumerate() {
                if e.log10_abs() < 300.0 {
                    let d = acc(v, e, 17.0).unwrap();
                    assert!(d >= 10.0, "({a},{b}) x={x} i={i}: {d:.1} digits");
                }
            }
        }
    }
}
