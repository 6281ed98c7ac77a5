use gneiting_web_demo::{covariance_curve, cf_check, demo_model, simulate};

#[test]
fn slice_has_grid_size_and_is_reproducible() {
    let a = simulate("linear", 1.0, 0.01, false, 200, 5, 30, 20, 2, 0.2).unwrap();
    assert_eq!(a.len(), 1200);
    assert_eq!(a, simulate("linear", 1.0, 0.01, false, 200, 5, 30, 20, 2, 0.2).unwrap());
    let b = simulate("cauchy_class", 0.5, 0.01, true, 200, 5, 30, 20, 2, 0.2).unwrap();
    assert_eq!(b.len(), 1200);
    assert!(b.iter().all(|v| v.is_finite()));
}

#[test]
fn hole_effect_curve() {
    let c = covariance_curve("cauchy_class", 0.5, 0.01, 10.0, 10.0, 5.0, 0.01).unwrap();
    let n = c.len() - 2;
    assert_eq!(n, 501);
    assert_eq!(c[n], 1.0);
    assert!((c[n + 1] - 3.0).abs() < 1e-9);
    let g = (1.0f64 + 3.0).sqrt();
    assert!((c[300] - (-2.0 / g).exp() / g).abs() < 1e-12);
    let flat = covariance_curve("cauchy_class", 0.5, 0.01, 0.1, 0.1, 5.0, 0.01).unwrap();
    assert_eq!(flat[flat.len() - 2], 0.0);
}

#[test]
fn cf_check_agrees_within_tolerance() {
    let out = cf_check("linear", 1.0, 1.0, 100_000, 3).unwrap();
    let tol = *out.last().unwrap();
    for t in out[..out.len() - 1].chunks(3) {
        assert!((t[1] - (-t[0]).exp()).abs() < tol);
        assert!((t[2] - (-t[0]).exp()).abs() < 1e-15);
    }
}

#[test]
fn bad_inputs_are_errors() {
    assert!(demo_model("spline", 1.0, 0.01).is_err());
    assert!(demo_model("logarithmic", 0.5, 0.01).is_err());
    assert!(covariance_curve("linear", 1.0, 0.01, 0.0, 0.0, 1.0, 0.0).is_err());
    assert!(simulate("linear", 1.0, 0.0, false, 10, 1, 2, 2, 1, 0.2).is_err());
}
