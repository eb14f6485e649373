// Success paths only: building a JsError needs a JS host.
use dualbern_wasm::{accuracy_profile, dual_curves, Projection};

#[test]
fn curves_are_row_major() {
    let v = dual_curves(1, 0.0, 0.0, 3).unwrap();
    assert_eq!(v.len(), 3 * 2);
    // D_0 = 4 - 6x, D_1 = 6x - 2
    let want = [4.0, -2.0, 1.0, 1.0, -2.0, 4.0];
    for (a, b) in v.iter().zip(want) {
        assert!((a - b).abs() < 1e-13, "{v:?}");
    }
}

#[test]
fn profile_covers_percent_grid() {
    let v = accuracy_profile(10, 0.0, 0.0, 60).unwrap();
    assert_eq!(v.len(), 3 * 99);
    for t in v.chunks(3) {
        assert!(t[1] >= 12.0 && t[1] <= t[2] && t[2] <= 17.0, "{t:?}");
    }
}

#[test]
fn projection_reproduces_x() {
    let p = Projection::new("x", 3, 1.0, 2.0).unwrap();
    let c = p.coeffs();
    for (k, c) in c.iter().enumerate() {
        assert!((c - k as f64 / 3.0).abs() < 1e-12, "{k}: {c}");
    }
    assert!(p.error_sq() < 1e-24);
    let s = p.sample(5).unwrap();
    for pair in s.chunks(2) {
        assert!((pair[0] - pair[1]).abs() < 1e-12);
    }
}
