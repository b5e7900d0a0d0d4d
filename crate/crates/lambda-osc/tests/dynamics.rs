use std::f64::consts::PI;

use lambda_osc::classical::{
    self, ml_exact_solution, ModelParams1D, ModelParams2D, PhaseState, StateKind,
};
use lambda_osc::dynamics::{
    conservation_drift, integrate, measure_period, IntegratorConfig, Model,
};
use lambda_osc::Error;

fn ml(lambda: f64, alpha: f64) -> Model {
    Model::Ml1d(ModelParams1D::new(lambda, alpha, 0.0).unwrap())
}

#[test]
fn ml_matches_exact_solution() {
    let model = ml(1.0, 2f64.sqrt());
    let p = ModelParams1D::new(1.0, 2f64.sqrt(), 0.0).unwrap();
    let tr = integrate(
        &model,
        &PhaseState::velocity_1d(1.0, 0.0),
        &IntegratorConfig::rk4(1e-3, 20.0),
    )
    .unwrap();
    let mut worst = 0.0f64;
    for s in tr.states() {
        let (x, v) = ml_exact_solution(&p, 1.0, PI / 2.0, s.t).unwrap();
        worst = worst.max((s.q[0] - x).abs()).max((s.v_or_p[0] - v).abs());
    }
    assert!(worst < 1e-7, "{worst}");
}

#[test]
fn period_follows_amplitude_law() {
    let model = ml(0.3, 1.0);
    let tr = integrate(
        &model,
        &PhaseState::velocity_1d(1.0, 0.0),
        &IntegratorConfig::rk4(1e-3, 40.0),
    )
    .unwrap();
    let t = measure_period(&tr, 0).unwrap();
    assert!((t - 2.0 * PI * 1.3f64.sqrt()).abs() < 1e-6, "{t}");

    let tr = integrate(
        &ml(0.0, 1.0),
        &PhaseState::velocity_1d(1.0, 0.0),
        &IntegratorConfig::rk4(1e-3, 30.0),
    )
    .unwrap();
    assert!((measure_period(&tr, 0).unwrap() - 2.0 * PI).abs() < 1e-8);
}

#[test]
fn exact_trajectory_conserves_energy() {
    let p = ModelParams1D::new(0.6, 1.3, 0.0).unwrap();
    let h = classical::energy_1d(p);
    let e0 = h
        .eval(&{
            let (x, v) = ml_exact_solution(&p, 0.8, 0.2, 0.0).unwrap();
            PhaseState::velocity_1d(x, v)
        })
        .unwrap();
    for i in 0..500 {
        let (x, v) = ml_exact_solution(&p, 0.8, 0.2, 0.05 * i as f64).unwrap();
        let e = h.eval(&PhaseState::velocity_1d(x, v)).unwrap();
        assert!((e - e0).abs() / e0.abs().max(1.0) < 1e-12);
    }
}

#[test]
fn rk4_energy_drift_is_fourth_order() {
    let model = ml(0.5, 1.0);
    let h = model.energy();
    let drift = |dt: f64| {
        let tr = integrate(
            &model,
            &PhaseState::velocity_1d(1.2, 0.3),
            &IntegratorConfig::rk4(dt, 30.0),
        )
        .unwrap();
        conservation_drift(&tr, &h).unwrap()
    };
    let ratio = drift(0.1) / drift(0.05);
    assert!((8.0..=32.0).contains(&ratio), "{ratio}");
}

#[test]
fn coarse_steps_drift_more() {
    let model = Model::Plane(ModelParams2D::new(0.5, 1.0).unwrap());
    let s0 = PhaseState::velocity_2d(0.5, 0.2, 0.1, 0.6);
    let i3 = &model.conserved_quantities()[3];
    let fine = integrate(&model, &s0, &IntegratorConfig::rk4(1e-3, 20.0)).unwrap();
    let coarse = integrate(&model, &s0, &IntegratorConfig::rk4(0.2, 20.0)).unwrap();
    assert!(conservation_drift(&coarse, i3).unwrap() > conservation_drift(&fine, i3).unwrap());
}

#[test]
fn momentum_and_velocity_flows_agree() {
    for model in [
        Model::Plane(ModelParams2D::new(0.7, 1.1).unwrap()),
        Model::Plane(
            ModelParams2D::new(-0.2, 1.0)
                .unwrap()
                .with_barriers(0.1, 0.05)
                .unwrap(),
        ),
        ml(-0.4, 1.0),
    ] {
        let sv = if model.dim() == 1 {
            PhaseState::velocity_1d(0.6, 0.4)
        } else {
            PhaseState::velocity_2d(0.6, 0.5, 0.3, -0.2)
        };
        let sp = model.to_momentum(&sv).unwrap();
        let cfg = IntegratorConfig::rk4(1e-3, 2.0 * PI);
        let a = integrate(&model, &sv, &cfg).unwrap().last();
        let b = model
            .to_velocity(&integrate(&model, &sp, &cfg).unwrap().last())
            .unwrap();
        for (u, w) in a.q.iter().chain(&a.v_or_p).zip(b.q.iter().chain(&b.v_or_p)) {
            assert!((u - w).abs() < 1e-7, "{model:?}: {u} vs {w}");
        }
    }
}

#[test]
fn integrals_are_conserved_along_flows() {
    let cases: Vec<(Model, PhaseState, f64)> = vec![
        (
            Model::Plane(ModelParams2D::new(0.5, 1.0).unwrap()),
            PhaseState::velocity_2d(0.5, 0.2, 0.1, 0.6),
            1e-9,
        ),
        (
            Model::Plane(
                ModelParams2D::new(0.3, 1.0)
                    .unwrap()
                    .with_barriers(0.1, 0.2)
                    .unwrap(),
            ),
            PhaseState::velocity_2d(0.6, 0.5, 0.2, -0.3),
            1e-9,
        ),
        (
            Model::Rational(
                ModelParams2D::new(0.0, 1.0)
                    .unwrap()
                    .with_rational(1.0, 1, 2)
                    .unwrap(),
            ),
            PhaseState::momentum_2d(0.4, -0.3, 0.2, 0.5),
            1e-9,
        ),
        (
            Model::CurvedSw {
                kappa: -1.0,
                params: ModelParams2D::new(0.0, 1.0)
                    .unwrap()
                    .with_barriers(0.1, 0.1)
                    .unwrap(),
            },
            PhaseState::velocity_2d(0.6, 0.7, 0.1, 0.4),
            1e-8,
        ),
        (
            Model::CurvedSw {
                kappa: 1.0,
                params: ModelParams2D::new(0.0, 1.0)
                    .unwrap()
                    .with_barriers(0.1, 0.1)
                    .unwrap(),
            },
            PhaseState::velocity_2d(0.6, 0.7, 0.1, 0.4),
            1e-8,
        ),
    ];
    for (model, s0, tol) in cases {
        let tr = integrate(&model, &s0, &IntegratorConfig::rk4(1e-3, 60.0).every(10)).unwrap();
        for q in model.conserved_quantities() {
            let d = conservation_drift(&tr, &q).unwrap();
            assert!(d < tol, "{model:?} {}: {d:e}", q.name);
        }
    }
}

#[test]
fn boundary_guard_stops_the_flow() {
    // Outward speed large enough to bring 1 - x^2 below the guard band.
    let tr = integrate(
        &ml(-1.0, 1.0),
        &PhaseState::velocity_1d(0.999, 100.0),
        &IntegratorConfig::rk4(1e-4, 5.0),
    );
    assert!(matches!(tr, Err(Error::DomainExit { .. })), "{tr:?}");
    // Free motion on the sphere reaches the boundary in finite time.
    let tr = integrate(
        &ml(-1.0, 0.0),
        &PhaseState::velocity_1d(0.999, 1.0),
        &IntegratorConfig::rk4(1e-3, 5.0),
    );
    assert!(matches!(tr, Err(Error::DomainExit { .. })), "{tr:?}");
    // At rest, the potential wall keeps the motion inside.
    assert!(integrate(
        &ml(-1.0, 1.0),
        &PhaseState::velocity_1d(0.999, 0.0),
        &IntegratorConfig::rk4(1e-4, 1.0)
    )
    .is_ok());
}

#[test]
fn adaptive_integrator_handles_barriers() {
    let model = Model::Ml1d(ModelParams1D::new(0.2, 1.0, 0.5).unwrap());
    let tr = integrate(
        &model,
        &PhaseState::velocity_1d(1.0, 0.9),
        &IntegratorConfig::rk45(1e-11, 40.0),
    )
    .unwrap();
    assert!(tr.stats.steps > 0);
    assert!(conservation_drift(&tr, &model.energy()).unwrap() < 1e-8);
    let closest = tr.states().map(|s| s.q[0]).fold(f64::INFINITY, f64::min);
    assert!(closest > 0.0);
    assert_eq!(tr.kind, StateKind::Velocity);
}

#[test]
fn max_steps_is_enforced() {
    let mut cfg = IntegratorConfig::rk4(1e-3, 10.0);
    cfg.max_steps = 100;
    let r = integrate(&ml(0.0, 1.0), &PhaseState::velocity_1d(1.0, 0.0), &cfg);
    assert!(matches!(r, Err(Error::MaxStepsExceeded(100))));
}
