use std::io::Write;

use lambda_osc::classical::{ModelParams1D, ModelParams2D, PhaseState};
use lambda_osc::dynamics::{conservation_drift, integrate, IntegratorConfig, Model, Trajectory};
use lambda_osc::oracle::{sturm_liouville_eigen, GridSpec};
use lambda_osc::quantum1d::{
    energy_ladder, energy_physical, max_bound_index, max_normalizable_index, QuantumParams,
};
use lambda_osc::quantum2d::{deformed_hermite, g_quantized, spectrum_2d};
use lambda_osc::separability::{chart_integrals, Chart, ChartKind, SeparablePotential};
use lambda_osc::verify::{registry, Settings};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{emit, Cell, Table};
use crate::CliError;

/// `failed` carries a description when a check of the command did not pass.
pub struct Report {
    pub failed: Option<String>,
}

impl Report {
    fn ok() -> Self {
        Report { failed: None }
    }
}

fn write_table(table: &Table, out: &OutputArgs) -> Result<(), CliError> {
    emit(
        &table.render(out.format.unwrap_or_default()),
        out.output.as_deref(),
    )?;
    Ok(())
}

fn build_model(a: &FlowArgs) -> Result<Model, CliError> {
    let model = required(&a.model, "model")?;
    let lambda = a.lambda.unwrap_or(0.0);
    let alpha = a.alpha.unwrap_or(1.0);
    let (k2, k3) = (a.k2.unwrap_or(0.0), a.k3.unwrap_or(0.0));
    Ok(match model {
        ModelName::Ml1d => Model::Ml1d(ModelParams1D::new(lambda, alpha, a.k.unwrap_or(0.0))?),
        ModelName::Plane => Model::Plane(ModelParams2D::new(lambda, alpha)?.with_barriers(k2, k3)?),
        ModelName::Rational => Model::Rational(ModelParams2D::new(lambda, alpha)?.with_rational(
            a.omega0.unwrap_or(1.0),
            a.n1.unwrap_or(1),
            a.n2.unwrap_or(1),
        )?),
        ModelName::CurvedSw => {
            let kappa = a.kappa.unwrap_or(0.0);
            Model::CurvedSw {
                kappa,
                params: ModelParams2D::new(-kappa, alpha)?.with_barriers(k2, k3)?,
            }
        }
    })
}

fn run_flow(a: &FlowArgs) -> Result<(Model, Trajectory), CliError> {
    let model = build_model(a)?;
    let x0 = required(&a.x0, "x0")?;
    let t_end = required(&a.t_end, "t-end")?;
    let v0 = a.v0.unwrap_or(0.0);
    let s0 = if model.dim() == 1 {
        PhaseState::velocity_1d(x0, v0)
    } else {
        PhaseState::velocity_2d(x0, a.y0.unwrap_or(0.0), v0, a.vy0.unwrap_or(0.0))
    };
    let mut cfg = match a.method.unwrap_or(MethodName::Rk4) {
        MethodName::Rk4 => IntegratorConfig::rk4(a.dt.unwrap_or(1e-3), t_end),
        MethodName::Rk45 => IntegratorConfig::rk45(a.tol.unwrap_or(1e-10), t_end),
    };
    cfg = cfg.every(a.every.unwrap_or(1));
    if let Some(m) = a.max_steps {
        cfg.max_steps = m;
    }
    let traj = integrate(&model, &s0, &cfg)?;
    Ok((model, traj))
}

fn drift_summary(model: &Model, traj: &Trajectory, config: Value) -> Result<Value, CliError> {
    let first = traj.state(0);
    let last = traj.last();
    let mut quantities = Vec::new();
    let mut max_drift: f64 = 0.0;
    for q in model.conserved_quantities() {
        let drift = conservation_drift(traj, &q)?;
        max_drift = max_drift.max(drift);
        quantities.push(json!({
            "name": q.name,
            "initial": q.eval(&first)?,
            "final": q.eval(&last)?,
            "drift": drift,
        }));
    }
    Ok(json!({
        "model": model.name(),
        "samples": traj.len(),
        "steps": traj.stats.steps,
        "rejected": traj.stats.rejected,
        "t_final": last.t,
        "quantities": quantities,
        "max_drift": max_drift,
        "config": config,
    }))
}

fn write_summary(summary: &Value, a: &FlowArgs) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(summary).expect("summary serializes") + "\n";
    match (&a.summary, &a.out.output) {
        (Some(p), _) => emit(&text, Some(p))?,
        (None, Some(_)) => emit(&text, None)?,
        (None, None) => std::io::stderr().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn simulate(a: &FlowArgs) -> Result<Report, CliError> {
    let (model, traj) = run_flow(a)?;
    let d = traj.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("q{i}")));
    header.extend((1..=d).map(|i| format!("v{i}")));
    let mut table = Table::new(header);
    for s in traj.states() {
        let v = model.to_velocity(&s)?;
        let mut row = vec![Cell::from(s.t)];
        row.extend(v.q.iter().chain(&v.v_or_p).map(|&x| Cell::from(x)));
        table.push(row);
    }
    write_table(&table, &a.out)?;
    write_summary(&drift_summary(&model, &traj, effective(a, "simulate"))?, a)?;
    Ok(Report::ok())
}

pub fn invariants(a: &FlowArgs) -> Result<Report, CliError> {
    let (model, traj) = run_flow(a)?;
    let quantities = model.conserved_quantities();
    let mut header = vec!["t".to_string()];
    header.extend(quantities.iter().map(|q| q.name.clone()));
    let mut table = Table::new(header);
    for s in traj.states() {
        let mut row = vec![Cell::from(s.t)];
        for q in &quantities {
            row.push(q.eval(&s)?.into());
        }
        table.push(row);
    }
    write_table(&table, &a.out)?;
    write_summary(
        &drift_summary(&model, &traj, effective(a, "invariants"))?,
        a,
    )?;
    Ok(Report::ok())
}

pub fn chart(a: &ChartArgs) -> Result<Report, CliError> {
    let kind: ChartKind = required(&a.chart, "chart")?.parse()?;
    let chart = Chart::new(kind, a.lambda.unwrap_or(0.0));
    let (p, q) = (required(&a.x, "x")?, required(&a.y, "y")?);
    let ((x, y), (u1, u2)) = if a.inverse.unwrap_or(false) {
        (chart.inverse(p, q)?, (p, q))
    } else {
        ((p, q), chart.forward(p, q)?)
    };
    let (bx, by) = chart.inverse(u1, u2)?;
    let round_trip = (bx - x).abs().max((by - y).abs());

    let mut header = vec!["chart", "lambda", "x", "y", "u1", "u2", "round_trip_error"];
    let mut row: Vec<Cell> = vec![
        kind.name().into(),
        chart.lambda.into(),
        x.into(),
        y.into(),
        u1.into(),
        u2.into(),
        round_trip.into(),
    ];
    if a.vx.is_some() || a.vy.is_some() {
        let alpha = a.alpha.unwrap_or(1.0);
        let sp = SeparablePotential::smorodinsky_winternitz(
            chart,
            alpha,
            a.k2.unwrap_or(0.0),
            a.k3.unwrap_or(0.0),
        )?;
        let s = PhaseState::velocity_2d(x, y, a.vx.unwrap_or(0.0), a.vy.unwrap_or(0.0));
        let (i1, i2) = chart_integrals(&sp, &s, alpha)?;
        header.extend(["i1", "i2", "energy"]);
        row.extend([i1.into(), i2.into(), (0.5 * (i1 + i2)).into()]);
    }
    let mut table = Table::new(header);
    table.push(row);
    write_table(&table, &a.out)?;
    Ok(Report::ok())
}

struct Level1D {
    lambda: f64,
    n: u64,
    series: Option<f64>,
    ladder: Option<f64>,
    oracle: Option<f64>,
    oracle_error: Option<f64>,
    discrepancy: Option<f64>,
    status: &'static str,
}

fn spectrum_for(lambda: f64, a: &Spectrum1dArgs, levels: u64) -> Result<Vec<Level1D>, CliError> {
    let beta = a.beta.unwrap_or(1.0);
    let (mass, hbar) = (a.mass.unwrap_or(1.0), a.hbar.unwrap_or(1.0));
    let qp = QuantumParams::with_units(lambda, beta, mass, hbar)?;
    let big = qp.big_lambda();
    let bound = max_bound_index(1.0, big);
    let normalizable = max_normalizable_index(1.0, big);
    let included = bound.map_or(levels, |b| levels.min(b + 1));
    let oracle = if included > 0 {
        let grid = GridSpec::for_params(&qp, a.points.unwrap_or(2000));
        Some(sturm_liouville_eigen(&qp, &grid, included as usize)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(levels as usize);
    for n in 0..levels {
        if n >= included {
            out.push(Level1D {
                lambda,
                n,
                series: None,
                ladder: None,
                oracle: None,
                oracle_error: None,
                discrepancy: None,
                status: "excluded",
            });
            continue;
        }
        let series = energy_physical(&qp, n)?;
        // E_n = hbar beta (n + 1/2) - hbar^2 lambda n^2 / (2 m)
        let ladder = energy_ladder(hbar * beta, hbar * hbar * lambda / mass, n)?;
        let r = oracle.as_ref().expect("oracle ran for included levels");
        let (e, err, converged) = (
            r.eigenvalues[n as usize],
            r.two_grid_error[n as usize],
            r.converged[n as usize],
        );
        let discrepancy = (series - ladder)
            .abs()
            .max((series - e).abs())
            .max((ladder - e).abs());
        let status = match (normalizable, converged) {
            (Some(m), _) if n > m => "non_normalizable",
            (_, false) => "unconverged",
            _ => "ok",
        };
        out.push(Level1D {
            lambda,
            n,
            series: Some(series),
            ladder: Some(ladder),
            oracle: Some(e),
            oracle_error: Some(err),
            discrepancy: Some(discrepancy),
            status,
        });
    }
    Ok(out)
}

pub fn spectrum1d(a: &Spectrum1dArgs) -> Result<Report, CliError> {
    let lambdas = required(&a.lambda, "lambda")?;
    let levels = required(&a.levels, "levels")?;
    let tolerance = a.tolerance.unwrap_or(1e-4);
    let per_lambda: Vec<Vec<Level1D>> = lambdas
        .par_iter()
        .map(|&l| spectrum_for(l, a, levels))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new([
        "lambda",
        "n",
        "series",
        "ladder",
        "oracle",
        "oracle_error",
        "discrepancy",
        "status",
    ]);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for row in per_lambda.iter().flatten() {
        match row.status {
            "ok" => worst = worst.max(row.discrepancy.unwrap_or(0.0)),
            "unconverged" => {
                failures.push(format!("lambda {} level {} unconverged", row.lambda, row.n))
            }
            _ => {}
        }
        table.push(vec![
            row.lambda.into(),
            row.n.into(),
            row.series.into(),
            row.ladder.into(),
            row.oracle.into(),
            row.oracle_error.into(),
            row.discrepancy.into(),
            row.status.into(),
        ]);
    }
    write_table(&table, &a.out)?;
    eprintln!("max discrepancy {worst:.3e} (tolerance {tolerance:.1e})");
    if worst > tolerance {
        failures.push(format!("discrepancy {worst:e} exceeds {tolerance:e}"));
    }
    Ok(Report {
        failed: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

pub fn spectrum2d(a: &Spectrum2dArgs) -> Result<Report, CliError> {
    let big = required(&a.big_lambda, "Lambda")?;
    let max_n = required(&a.max_n, "max-N")?;
    if !big.is_finite() {
        return Err(lambda_osc::Error::InvalidArgument("Lambda must be finite".into()).into());
    }
    let mut table = Table::new(["m", "n", "N", "energy", "provenance"]);
    for l in spectrum_2d(big, max_n) {
        table.push(vec![
            l.m.into(),
            l.n.into(),
            (l.m + l.n).into(),
            l.energy.into(),
            "closed_form".into(),
        ]);
    }
    write_table(&table, &a.out)?;
    Ok(Report::ok())
}

pub fn polynomials(a: &PolynomialsArgs) -> Result<Report, CliError> {
    let big = required(&a.big_lambda, "Lambda")?;
    let max_degree = required(&a.max_degree, "max-degree")?;
    let g = match a.g {
        Some(g) => g,
        None => g_quantized(big, a.m.unwrap_or(0))?,
    };
    let mut header = vec!["degree".to_string()];
    header.extend((0..=max_degree).map(|j| format!("c{j}")));
    let mut table = Table::new(header);
    for n in 0..=max_degree {
        match deformed_hermite(big, g, n) {
            Ok(q) => {
                let mut row = vec![Cell::from(n as u64)];
                row.extend(
                    (0..=max_degree)
                        .map(|j| Cell::from(q.coefficients.get(j).copied().unwrap_or(0.0))),
                );
                table.push(row);
            }
            Err(e @ lambda_osc::Error::DegenerateRecursion { .. }) => {
                eprintln!("degree {n} skipped: {e}")
            }
            Err(e) => return Err(e.into()),
        }
    }
    write_table(&table, &a.out)?;
    Ok(Report::ok())
}

pub fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let settings = Settings {
        seed: a.seed.unwrap_or(Settings::default().seed),
    };
    if let Some(t) = a.tolerance {
        if !(t >= 0.0) {
            return Err(CliError::Usage(format!(
                "tolerance must be non-negative, got {t}"
            )));
        }
    }
    let checks: Vec<_> = registry()
        .into_iter()
        .filter(|c| a.only.as_ref().is_none_or(|g| g.contains(&c.group)))
        .filter(|c| {
            a.criterion
                .as_ref()
                .is_none_or(|cs| c.criterion.is_some_and(|n| cs.contains(&n)))
        })
        .collect();
    if checks.is_empty() {
        return Err(CliError::Usage("no checks match the selection".into()));
    }
    let outcomes: Vec<_> = checks
        .par_iter()
        .map(|c| c.run(&settings, a.tolerance))
        .collect();

    let mut table = Table::new([
        "check",
        "group",
        "criterion",
        "measured",
        "tolerance",
        "status",
        "error",
    ]);
    for o in &outcomes {
        table.push(vec![
            o.name.as_str().into(),
            o.group.name().into(),
            o.criterion.map_or(Cell::Empty, |c| Cell::Int(c as u64)),
            o.measured.into(),
            o.tolerance.into(),
            if o.passed { "pass" } else { "fail" }.into(),
            o.error.clone().map_or(Cell::Empty, Cell::Text),
        ]);
    }
    write_table(&table, &a.out)?;
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.as_str())
        .collect();
    eprintln!(
        "{} of {} checks passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    Ok(Report {
        failed: (!failed.is_empty()).then(|| format!("failed: {}", failed.join(", "))),
    })
}
