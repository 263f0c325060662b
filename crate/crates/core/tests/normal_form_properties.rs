use cubic_rds::normal_form::{
    composed_map, composed_quadratic, conjugacy, conjugacy_inverse, extract_quadratic, from_saddle_coordinates,
    log_log_slope, reduced_map, saddle_coordinates, saddle_correction_factors, saddle_recursion, slope_drift,
    slope_drift_prediction, ReducedPoint, FD_STEP,
};
use cubic_rds::simplex::{apply_operator, to_g1};
use cubic_rds::{Error, SimplexPoint, Theta};
use proptest::prelude::*;

fn th(v: f64) -> Theta {
    Theta::new(v).unwrap()
}

fn theta() -> impl Strategy<Value = Theta> {
    (0.0..=1.0f64).prop_map(th)
}

fn non_identity_theta() -> impl Strategy<Value = Theta> {
    theta().prop_filter("conjugacy is undefined at 2/3", |t| !t.is_identity())
}

fn small_point(radius: f64) -> impl Strategy<Value = ReducedPoint> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| ReducedPoint::new(r * a.cos(), r * a.sin()))
}

fn g1_point() -> impl Strategy<Value = SimplexPoint> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        to_g1(&SimplexPoint::new(lo, hi - lo, 1.0 - hi).unwrap()).0
    })
}

proptest! {
    #[test]
    fn chart_conjugacy(t in theta(), x in g1_point()) {
        let p = ReducedPoint::chart(&x);
        let a = reduced_map(t, &p).unwrap();
        let b = ReducedPoint::chart(&apply_operator(t, &x));
        prop_assert!((a.x - b.x).abs() <= 1e-14 && (a.y - b.y).abs() <= 1e-14);
    }

    #[test]
    fn conjugacy_inverts(t in non_identity_theta(), p in small_point(0.05)) {
        let back = conjugacy_inverse(t, &conjugacy(t, &p).unwrap()).unwrap();
        prop_assert!((back.x - p.x).abs() <= 1e-12 && (back.y - p.y).abs() <= 1e-12);
    }

    #[test]
    fn composed_map_with_equal_parameters_is_linear_to_second_order(t in non_identity_theta(), p in small_point(1e-3)) {
        // the remainder after the linear part is cubic in |p|
        let q = composed_map(t, t, &p).unwrap();
        let lambda = 1.0 / 3.0 + t.value();
        let r = p.norm();
        prop_assert!((q.x - lambda * p.x).abs() <= 100.0 * r * r * r + 1e-16);
        prop_assert!((q.y - lambda * p.y).abs() <= 100.0 * r * r * r + 1e-16);
    }

    #[test]
    fn saddle_recursions_hold(t in theta(), x in g1_point()) {
        let (u1, u2) = saddle_coordinates(&x);
        prop_assert!(u1 >= -1e-15 && u2 >= -1e-15);
        let (r1, r2) = saddle_recursion(t, u1, u2);
        let (d1, d2) = saddle_coordinates(&apply_operator(t, &x));
        prop_assert!((r1 - d1).abs() <= 1e-12 && (r2 - d2).abs() <= 1e-12);
    }

    #[test]
    fn correction_factor_structure(t in 0.05..0.95f64, u1 in 1e-3..0.05f64, u2 in 1e-3..0.05f64) {
        let (g1, g2) = (1.5 * t, 2.0 - 1.5 * t);
        let x = from_saddle_coordinates(u1, u2).unwrap();
        let (s1, s2) = saddle_correction_factors(th(t), &x);
        // s1 - 1 is quadratic in (u1, u2) while s2 - 1 has a term linear in u2
        let e1 = (u1 * u1 + 3.0 * u2 * u2) * (1.0 / g1 - 1.0);
        let e2 = (4.0 * u2 - u1 * u1 - 3.0 * u2 * u2) * (1.0 / g2 - 1.0);
        prop_assert!((s1 - 1.0 - e1).abs() <= 1e-9, "{} {}", s1 - 1.0, e1);
        prop_assert!((s2 - 1.0 - e2).abs() <= 1e-9, "{} {}", s2 - 1.0, e2);
    }
}

#[test]
fn correction_factor_envelopes() {
    let radii = [1e-2, 5e-3, 2e-3, 1e-3];
    for t in [0.2, 0.3, 0.5, 0.9] {
        let s: Vec<(f64, f64, f64)> = radii
            .iter()
            .map(|&r| {
                let (s1, s2) = saddle_correction_factors(th(t), &from_saddle_coordinates(r, r).unwrap());
                (r, s1 - 1.0, s2 - 1.0)
            })
            .collect();
        let slope1 = log_log_slope(&s.iter().map(|v| (v.0, v.1)).collect::<Vec<_>>());
        let slope2 = log_log_slope(&s.iter().map(|v| (v.0, v.2)).collect::<Vec<_>>());
        assert!(slope1 >= 1.9, "θ={t}: s1 slope {slope1}");
        assert!((slope2 - 1.0).abs() <= 0.1, "θ={t}: s2 slope {slope2}");
    }
}

#[test]
fn conjugacy_is_undefined_at_identity() {
    let p = ReducedPoint::new(0.01, 0.01);
    assert_eq!(conjugacy(th(2.0 / 3.0), &p), Err(Error::SingularConjugacy));
    assert_eq!(conjugacy_inverse(th(2.0 / 3.0), &p), Err(Error::SingularConjugacy));
    assert!(composed_quadratic(th(2.0 / 3.0), th(0.2)).is_err());
}

#[test]
fn slope_drift_grid() {
    let (t, n) = (th(0.8), th(0.4));
    for k in [-0.4, -0.2, 0.0, 0.2, 0.5, 0.8, 0.99] {
        for x in [1e-4, 1e-3] {
            assert!(slope_drift(t, n, k, x).unwrap() > k, "k={k} x={x}");
        }
    }
    for k in [-0.5, 1.0] {
        for x in [1e-4, 1e-3] {
            assert!((slope_drift(t, n, k, x).unwrap() - k).abs() <= 1e-12);
        }
    }
    // the drift has the sign of (2 - 3ν)(θ - ν)
    assert!(slope_drift(th(0.4), th(0.5), 0.2, 1e-3).unwrap() < 0.2);
    assert!(slope_drift(th(0.4), th(0.8), 0.2, 1e-3).unwrap() > 0.2);
}

#[test]
fn slope_prediction_error_is_second_order() {
    let (t, n) = (th(0.8), th(0.4));
    for k in [-0.4, 0.0, 0.5, 0.8] {
        let err = |x: f64| (slope_drift(t, n, k, x).unwrap() - slope_drift_prediction(t, n, k, x)).abs();
        let slope = log_log_slope(&[(1e-3, err(1e-3)), (5e-4, err(5e-4)), (2.5e-4, err(2.5e-4))]);
        assert!((slope - 2.0).abs() <= 0.2, "k={k}: {slope}");
    }
}

#[test]
fn composed_quadratic_against_extraction() {
    for (t, n) in [(0.0, 1.0), (0.1, 0.9), (0.8, 0.4), (1.0, 0.0), (0.5, 0.5)] {
        let an = composed_quadratic(th(t), th(n)).unwrap();
        let fd = extract_quadratic(|p| composed_map(th(t), th(n), p), FD_STEP).unwrap();
        assert!((an.linear - fd.linear).abs() <= 1e-6);
        for c in 0..2 {
            for m in 0..3 {
                assert!((an.quad[c][m] - fd.quad[c][m]).abs() <= 1e-6, "({t}, {n})");
            }
        }
    }
}
