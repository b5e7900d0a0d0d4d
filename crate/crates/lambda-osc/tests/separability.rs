use lambda_osc::classical::{hamiltonian_2d, to_momentum_kind, ModelParams2D, PhaseState};
use lambda_osc::dynamics::{integrate, IntegratorConfig, Model};
use lambda_osc::ktrig::{cos_k, sin_k, tan_k};
use lambda_osc::separability::*;
use lambda_osc::Error;
use proptest::prelude::*;

const LAMBDAS: [f64; 4] = [-0.4, 0.0, 0.3, 1.2];

fn sw_params(lambda: f64, alpha: f64, k2: f64, k3: f64) -> ModelParams2D {
    ModelParams2D::new(lambda, alpha)
        .unwrap()
        .with_barriers(k2, k3)
        .unwrap()
}

#[test]
fn chart_round_trips() {
    for &l in &LAMBDAS {
        for kind in [
            ChartKind::ZxY,
            ChartKind::XZy,
            ChartKind::Polar,
            ChartKind::Cartesian,
        ] {
            let chart = Chart::new(kind, l);
            for &(x, y) in &[(0.3, -0.5), (-0.8, 0.2), (0.1, 0.9)] {
                let (u1, u2) = chart.forward(x, y).unwrap();
                let (bx, by) = chart.inverse(u1, u2).unwrap();
                assert!(
                    (bx - x).abs() < 1e-13 && (by - y).abs() < 1e-13,
                    "{kind:?} {l}"
                );
            }
        }
    }
    assert!(matches!(
        Chart::new(ChartKind::Polar, 0.2).forward(0.0, 0.0),
        Err(Error::Origin)
    ));
    for name in [
        "zx_y",
        "x_zy",
        "polar",
        "cartesian",
        "geodesic_polar",
        "gnomonic",
    ] {
        assert_eq!(name.parse::<ChartKind>().unwrap().name(), name);
    }
}

#[test]
fn templates_agree_with_the_potential() {
    for &l in &LAMBDAS {
        let a = 1.3;
        for kind in [ChartKind::ZxY, ChartKind::XZy, ChartKind::Polar] {
            let sp = SeparablePotential::smorodinsky_winternitz(Chart::new(kind, l), a, 0.2, 0.1)
                .unwrap();
            for &(x, y) in &[(0.3, -0.5), (-0.6, 0.2)] {
                let c = 1.0 + l * (x * x + y * y);
                let v = 0.5 * a * a * (x * x + y * y) / c + 0.2 / (x * x) + 0.1 / (y * y);
                let t = 0.5 * a * a * sp.template(x, y).unwrap();
                assert!((t - v).abs() < 1e-12 * v, "{kind:?} {l}: {t} vs {v}");
            }
        }
    }
}

#[test]
fn three_forms_agree() {
    for &l in &LAMBDAS {
        for &(x, y) in &[(0.3, -0.5), (-0.7, 0.4)] {
            let (a, b, c) = sw_potential_three_forms(l, 1.1, 0.15, 0.25, x, y).unwrap();
            let v = 0.5 * 1.21 * (x * x + y * y) / (1.0 + l * (x * x + y * y))
                + 0.15 / (x * x)
                + 0.25 / (y * y);
            for w in [a, b, c] {
                assert!((w - v).abs() < 1e-12 * v);
            }
            let (a, b, c) = oscillator_potential_three_forms(l, 1.1, x, y).unwrap();
            assert!((a - b).abs() < 1e-14 && (a - c).abs() < 1e-14);
        }
    }
}

proptest! {
    #[test]
    fn chart_integrals_sum_to_twice_the_energy(
        li in 0usize..4, kind in 0usize..3,
        x in 0.1f64..0.6, y in 0.1f64..0.6, vx in -1.0f64..1.0, vy in -1.0f64..1.0,
    ) {
        let l = LAMBDAS[li];
        let kind = [ChartKind::ZxY, ChartKind::XZy, ChartKind::Polar][kind];
        let (a, k2, k3) = (0.9, 0.05, 0.08);
        let sp = SeparablePotential::smorodinsky_winternitz(Chart::new(kind, l), a, k2, k3).unwrap();
        let s = PhaseState::velocity_2d(x, -y, vx, vy);
        let (i1, i2) = chart_integrals(&sp, &s, a).unwrap();
        let h = hamiltonian_2d(&sw_params(l, a, k2, k3), &s).unwrap();
        prop_assert!((0.5 * (i1 + i2) - h).abs() < 1e-12 * (1.0 + h.abs()));
    }

    #[test]
    fn decomposition_sums(li in 0usize..4, x in 0.1f64..0.6, y in 0.1f64..0.6,
                          vx in -1.0f64..1.0, vy in -1.0f64..1.0) {
        let l = LAMBDAS[li];
        let s = PhaseState::velocity_2d(x, y, vx, vy);
        let (h1, h2, h3) = decompose_oscillator(l, 1.2, &s).unwrap();
        let h = hamiltonian_2d(&ModelParams2D::new(l, 1.2).unwrap(), &s).unwrap();
        prop_assert!((h1 + h2 - l * h3 - h).abs() < 1e-12 * (1.0 + h.abs()));
        let (p, q, r) = decompose_sw(l, 1.2, 0.1, 0.2, &s).unwrap();
        let h = hamiltonian_2d(&sw_params(l, 1.2, 0.1, 0.2), &s).unwrap();
        prop_assert!((p + q - l * r - h).abs() < 1e-12 * (1.0 + h.abs()));
    }
}

fn max_drift(values: &[f64]) -> f64 {
    let scale = values[0].abs().max(1.0);
    values
        .iter()
        .map(|v| (v - values[0]).abs() / scale)
        .fold(0.0, f64::max)
}

#[test]
fn chart_integrals_are_conserved() {
    let (a, k2, k3) = (1.0, 0.04, 0.06);
    let cfg = IntegratorConfig::rk45(1e-12, 20.0);
    for &l in &[-0.4, 0.3] {
        let model = Model::Plane(sw_params(l, a, k2, k3));
        let tr = integrate(&model, &PhaseState::velocity_2d(0.4, 0.3, 0.2, -0.3), &cfg).unwrap();
        for kind in [ChartKind::ZxY, ChartKind::XZy, ChartKind::Polar] {
            let sp =
                SeparablePotential::smorodinsky_winternitz(Chart::new(kind, l), a, k2, k3).unwrap();
            let (mut i1, mut i2) = (Vec::new(), Vec::new());
            for s in tr.states() {
                let (p, q) = chart_integrals(&sp, &s, a).unwrap();
                i1.push(p);
                i2.push(q);
            }
            assert!(max_drift(&i1) < 1e-8, "{kind:?} {l}");
            assert!(max_drift(&i2) < 1e-8, "{kind:?} {l}");
        }
        let (mut a1, mut a2, mut a3) = (Vec::new(), Vec::new(), Vec::new());
        for s in tr.states() {
            let (p, q, r) = decompose_sw(l, a, k2, k3, &s).unwrap();
            a1.push(p);
            a2.push(q);
            a3.push(r);
        }
        for v in [a1, a2, a3] {
            assert!(max_drift(&v) < 1e-8);
        }
    }
}

#[test]
fn momentum_kind_state_gives_same_integrals() {
    let sp = SeparablePotential::oscillator(Chart::new(ChartKind::Polar, 0.3)).unwrap();
    let s = PhaseState::velocity_2d(0.4, 0.2, 0.3, -0.1);
    let m = to_momentum_kind(0.3, &s).unwrap();
    let (a, b) = chart_integrals(&sp, &s, 1.0).unwrap();
    let (c, d) = chart_integrals(&sp, &m, 1.0).unwrap();
    assert!((a - c).abs() < 1e-15 && (b - d).abs() < 1e-15);
}

#[test]
fn three_lagrangians_coincide() {
    for &kappa in &[-0.5, 0.4, 1.0] {
        let lambda = -kappa;
        for &(rho, phi, v_rho, v_phi) in &[(0.5, 0.3, 0.7, -0.2), (0.9, 2.0, -0.4, 0.6)] {
            let a = 1.3;
            let lk = geodesic_polar_lagrangian(kappa, rho, v_rho, v_phi, a).unwrap();
            let [x, y, vx, vy] = geodesic_to_gnomonic(kappa, rho, phi, v_rho, v_phi).unwrap();
            let lh = higgs_lagrangian(kappa, x, y, vx, vy, a).unwrap();
            let (r, v_r) = geodesic_to_lambda_polar(kappa, rho, v_rho);
            let ll = lambda_polar_lagrangian(lambda, r, v_r, v_phi, a).unwrap();
            assert!(
                (lk - lh).abs() < 1e-12 * (1.0 + lk.abs()),
                "{kappa}: {lk} {lh}"
            );
            assert!(
                (lk - ll).abs() < 1e-12 * (1.0 + lk.abs()),
                "{kappa}: {lk} {ll}"
            );
            assert!((r - sin_k(kappa, rho)).abs() < 1e-16);
            assert!((x.hypot(y) - tan_k(kappa, rho).unwrap()).abs() < 1e-14);
            let [cx, cy, _, _] = polar_to_cartesian(r, phi, v_r, v_phi);
            let p = ModelParams2D::new(lambda, a).unwrap();
            let s = PhaseState::velocity_2d(cx, cy, 0.0, 0.0);
            let v = -hamiltonian_2d(&p, &s).unwrap();
            let t = tan_k(kappa, rho).unwrap();
            assert!(
                (v + 0.5 * a * a * t * t).abs() < 1e-12,
                "{}",
                cos_k(kappa, rho)
            );
        }
    }
}
