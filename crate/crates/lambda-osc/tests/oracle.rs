use std::f64::consts::PI;

use lambda_osc::grid::Grid1D;
use lambda_osc::oracle::*;
use lambda_osc::quantum1d::{energy_ladder, envelope, QuantumParams};
use lambda_osc::Error;

#[test]
fn harmonic_spectrum() {
    let qp = QuantumParams::new(0.0, 1.0).unwrap();
    let g = GridSpec::for_params(&qp, 2000);
    assert_eq!((g.a, g.b), (-12.0, 12.0));
    let r = sturm_liouville_eigen(&qp, &g, 4).unwrap();
    for (n, e) in r.eigenvalues.iter().enumerate() {
        assert!((e - (n as f64 + 0.5)).abs() < 1e-6, "{n}: {e}");
        assert!(r.converged[n]);
    }
}

#[test]
fn sphere_spectrum() {
    let qp = QuantumParams::new(-0.3, 1.0).unwrap();
    let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, 2000), 3).unwrap();
    for (e, want) in r.eigenvalues.iter().zip([0.5, 1.65, 3.1]) {
        assert!((e - want).abs() < 1e-4, "{e} vs {want}");
    }
    assert_eq!(r.grid.boundary, Boundary::Dirichlet);
}

#[test]
fn continuum_levels_are_flagged() {
    let qp = QuantumParams::new(0.4, 1.0).unwrap();
    let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, 2000), 8).unwrap();
    assert!((continuum_threshold(&qp) - 1.75).abs() < 1e-15);
    for n in 0..3 {
        assert!(r.converged[n]);
        assert!((r.eigenvalues[n] - energy_ladder(1.0, 0.4, n as u64).unwrap()).abs() < 1e-4);
    }
    // n >= beta / lambda = 2.5 has no square-integrable partner in the box
    for n in 3..8 {
        assert!(!r.converged[n], "{n}: {}", r.eigenvalues[n]);
    }
}

#[test]
fn error_estimate_bounds_the_error() {
    for &lambda in &[-0.4, -0.1, 0.0, 0.1, 0.4] {
        let qp = QuantumParams::new(lambda, 1.0).unwrap();
        let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, 1000), 7).unwrap();
        for n in 0..7 {
            if !r.converged[n] {
                continue;
            }
            let e = energy_ladder(1.0, lambda, n as u64).unwrap();
            assert!(
                (r.eigenvalues[n] - e).abs() < 5.0 * r.two_grid_error[n],
                "{lambda} {n}"
            );
        }
    }
}

#[test]
fn richardson_values_converge_at_fourth_order() {
    let qp = QuantumParams::new(-0.3, 1.0).unwrap();
    let exact = energy_ladder(1.0, -0.3, 2).unwrap();
    let err = |points: usize| {
        let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, points), 3).unwrap();
        (r.eigenvalues[2] - exact).abs()
    };
    let (e1, e2) = (err(128), err(256));
    let order = (e1 / e2).log2();
    assert!((3.5..=4.5).contains(&order), "{order}: {e1} {e2}");
}

#[test]
fn eigenvectors_are_orthonormal() {
    for &lambda in &[-0.3, 0.1] {
        let qp = QuantumParams::new(lambda, 1.0).unwrap();
        let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, 2000), 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((r.overlap(i, j) - expect).abs() < 1e-8);
            }
        }
        assert_eq!(r.u.len(), r.x.len());
    }
}

#[test]
fn bad_requests() {
    let qp = QuantumParams::new(0.1, 1.0).unwrap();
    let mut g = GridSpec::for_params(&qp, 100);
    assert!(sturm_liouville_eigen(&qp, &g, 11).is_err());
    g.points = 63;
    assert!(sturm_liouville_eigen(&qp, &g, 2).is_err());
    let qp = QuantumParams::new(-1.0, 1.0).unwrap();
    let g = GridSpec {
        a: -2.0,
        b: 2.0,
        points: 200,
        boundary: Boundary::Dirichlet,
        tolerance: 1e-2,
    };
    assert!(sturm_liouville_eigen(&qp, &g, 2).is_err());
    let mut g = GridSpec::for_params(&qp, 64);
    g.tolerance = 1e-12;
    assert!(matches!(
        sturm_liouville_eigen(&qp, &g, 3),
        Err(Error::Convergence { .. })
    ));
}

#[test]
fn csv_export() {
    let qp = QuantumParams::new(0.0, 1.0).unwrap();
    let r = sturm_liouville_eigen(&qp, &GridSpec::for_params(&qp, 200), 2).unwrap();
    let mut out = Vec::new();
    r.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "index,eigenvalue,two_grid_error");
    assert_eq!(lines.len(), 3);
    let cells: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 0.0);
    assert!((cells[1] - 0.5).abs() < 1e-3);
    assert!(lines[1].split(',').nth(1).unwrap().contains('e'));
}

#[test]
fn quadrature_examples() {
    let mut last = 0.0;
    for eps in [1e-1, 1e-2, 1e-3] {
        let grid = Grid1D::symmetric(1.0 - eps, 40001).unwrap();
        let q = quadrature_mu(&grid.sample(|_| 1.0), -1.0);
        assert!((q - 2.0 * (1.0 - eps).asin()).abs() < 1e-6, "{eps}: {q}");
        assert!(q > last && q < PI);
        last = q;
    }
    let grid = Grid1D::symmetric(10.0, 2001).unwrap();
    let psi = grid.sample(|x| envelope(1.0, 0.5, x).unwrap().powi(2));
    let mass = quadrature_mu(&psi, 0.5);
    assert!(mass.is_finite() && mass > 0.0);
    let odd = grid.sample(|x| x * x * x * (-x * x).exp());
    assert!(quadrature_mu(&odd, 0.5).abs() < 1e-14);
}

#[test]
fn adaptive_integrals() {
    assert!((integrate_dmu(-1.0, |_| 1.0).unwrap() - PI).abs() < 1e-12);
    assert!((integrate_dx(-1.0, |_| 1.0).unwrap() - 2.0).abs() < 1e-12);
    let g = integrate_dx(0.0, |x| (-x * x).exp()).unwrap();
    assert!((g - PI.sqrt()).abs() < 1e-12);
    // (1 + x^2)^(-3/2) integrated against dmu gives int (1 + x^2)^(-2) dx = pi / 2
    let v = integrate_dmu(1.0, |x| (1.0 + x * x).powf(-1.5)).unwrap();
    assert!((v - PI / 2.0).abs() < 1e-9, "{v}");
}
