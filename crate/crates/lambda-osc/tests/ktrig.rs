use std::f64::consts::PI;

use lambda_osc::ktrig::{cos_k, from_geodesic, sin_k, tan_k, to_geodesic, Curvature};
use lambda_osc::Error;
use proptest::prelude::*;

// Reference values computed with mpmath at 30 digits.
const COS_1: f64 = 0.540302305868139717;
const SINH_1: f64 = 1.17520119364380146;
const TWO_SINH_1: f64 = 2.35040238728760291;

const KAPPAS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

#[test]
fn reference_values() {
    assert!((cos_k(4.0, 0.5) - COS_1).abs() < 1e-15);
    assert!((sin_k(-1.0, 1.0) - SINH_1).abs() < 1e-15);
    assert!((from_geodesic(0.25, 2.0) - TWO_SINH_1).abs() < 1e-14);
    assert_eq!(cos_k(0.0, 7.3), 1.0);
    assert_eq!(sin_k(0.0, 2.5), 2.5);
    assert!((cos_k(1.0, PI) + 1.0).abs() < 1e-15);
    assert!((sin_k(1.0, PI / 2.0) - 1.0).abs() < 1e-15);
    assert!((from_geodesic(-1.0, PI / 2.0) - 1.0).abs() < 1e-15);
}

#[test]
fn tangent_pole() {
    assert!(matches!(tan_k(1.0, PI / 2.0), Err(Error::Pole { .. })));
    assert!(tan_k(-1.0, 10.0).is_ok());
    let c = Curvature::from_deformation(-0.5).unwrap();
    assert_eq!(c.kappa(), 0.5);
    assert!((c.tan(0.3).unwrap() - sin_k(0.5, 0.3) / cos_k(0.5, 0.3)).abs() < 1e-16);
}

#[test]
fn sampled_identities() {
    for &k in &KAPPAS {
        for i in 0..=600 {
            let x = -3.0 + 0.01 * i as f64;
            let (c, s) = (cos_k(k, x), sin_k(k, x));
            let scale = 1.0 + (k * s * s).abs();
            assert!(
                (c * c + k * s * s - 1.0).abs() < 1e-12 * scale,
                "k={k} x={x}"
            );
            let c2 = cos_k(k, 2.0 * x);
            let s2 = sin_k(k, 2.0 * x);
            assert!((c2 - (c * c - k * s * s)).abs() < 1e-12 * scale.max(c2.abs()));
            assert!((s2 - 2.0 * s * c).abs() < 1e-12 * (1.0 + s2.abs()));
        }
    }
}

proptest! {
    #[test]
    fn fundamental_identity(k in -2.0f64..2.0, x in -3.0f64..3.0) {
        let (c, s) = (cos_k(k, x), sin_k(k, x));
        let scale = 1.0 + (k * s * s).abs();
        prop_assert!((c * c + k * s * s - 1.0).abs() < 1e-12 * scale);
    }

    #[test]
    fn double_angle(k in -2.0f64..2.0, x in -1.5f64..1.5) {
        let (c, s) = (cos_k(k, x), sin_k(k, x));
        let c2 = cos_k(k, 2.0 * x);
        let s2 = sin_k(k, 2.0 * x);
        prop_assert!((s2 - 2.0 * s * c).abs() < 1e-12 * (1.0 + s2.abs()));
        prop_assert!((c2 - (c * c - k * s * s)).abs() < 1e-12 * (1.0 + c2.abs()));
    }

    #[test]
    fn derivatives_match_finite_differences(k in -2.0f64..2.0, x in -3.0f64..3.0) {
        let h = 1e-5;
        let ds = (sin_k(k, x + h) - sin_k(k, x - h)) / (2.0 * h);
        let dc = (cos_k(k, x + h) - cos_k(k, x - h)) / (2.0 * h);
        let scale = 1.0 + cos_k(k, x).abs().max(sin_k(k, x).abs());
        prop_assert!((ds - cos_k(k, x)).abs() < 1e-8 * scale);
        prop_assert!((dc + k * sin_k(k, x)).abs() < 1e-8 * scale);
    }

    #[test]
    fn continuity_at_zero_curvature(x in -3.0f64..3.0) {
        for k in [1e-10, -1e-10] {
            prop_assert!((sin_k(k, x) - x).abs() <= 1e-9);
            prop_assert!((cos_k(k, x) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn geodesic_round_trip(lambda in -2.0f64..2.0, t in -0.999f64..0.999) {
        // t scales x into the chart when lambda < 0
        let x = if lambda < 0.0 { t / (-lambda).sqrt() } else { 3.0 * t };
        let u = to_geodesic(lambda, x).unwrap();
        prop_assert!((from_geodesic(lambda, u) - x).abs() < 1e-12 * (1.0 + x.abs()));
        prop_assert!(u * x >= 0.0);
    }
}

#[test]
fn geodesic_chart_edge() {
    assert!(to_geodesic(-1.0, 1.0).is_err());
    assert!(to_geodesic(-1.0, 0.999999).is_ok());
}
