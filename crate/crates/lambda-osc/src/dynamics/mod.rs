//! Time integration of the classical models and measurements on the
//! resulting trajectories.

mod model;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::classical::{ConservedQuantity, PhaseState, StateKind};
use crate::error::{Error, Result};

pub use model::Model;

/// Integration aborts once the guarded metric factor drops below this.
pub const GUARD_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4 { dt: f64 },
    /// Dormand-Prince 5(4) with mixed absolute/relative tolerance `tol`.
    Rk45 { tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    #[serde(flatten)]
    pub method: Method,
    pub t_end: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    /// Keep one accepted step in `record_every`; the final state is always kept.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_max_steps() -> usize {
    10_000_000
}

fn default_record_every() -> usize {
    1
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4 { dt },
            t_end,
            max_steps: default_max_steps(),
            record_every: 1,
        }
    }

    pub fn rk45(tol: f64, t_end: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk45 { tol },
            t_end,
            max_steps: default_max_steps(),
            record_every: 1,
        }
    }

    pub fn every(mut self, stride: usize) -> Self {
        self.record_every = stride.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.method {
            Method::Rk4 { dt } => dt > 0.0 && dt.is_finite(),
            Method::Rk45 { tol } => tol > 0.0 && tol.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidArgument(
                "dt / tol must be positive and finite".into(),
            ));
        }
        if !self.t_end.is_finite() || self.max_steps == 0 || self.record_every == 0 {
            return Err(Error::InvalidArgument(
                "t_end, max_steps or record_every invalid".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrationStats {
    pub steps: usize,
    pub rejected: usize,
}

/// Sampled solution. Row `i` of `data` holds `(q, v_or_p)` at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: Model,
    pub kind: StateKind,
    pub times: Vec<f64>,
    pub data: Vec<f64>,
    pub stats: IntegrationStats,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = 2 * self.dim();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn state(&self, i: usize) -> PhaseState {
        let d = self.dim();
        let row = self.row(i);
        PhaseState {
            q: row[..d].to_vec(),
            v_or_p: row[d..].to_vec(),
            kind: self.kind,
            t: self.times[i],
        }
    }

    pub fn last(&self) -> PhaseState {
        self.state(self.len() - 1)
    }

    pub fn states(&self) -> impl Iterator<Item = PhaseState> + '_ {
        (0..self.len()).map(move |i| self.state(i))
    }

    /// CSV with header `t,q1,..,v1,..`; momenta are converted to velocities.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let d = self.dim();
        let mut header = vec!["t".to_string()];
        header.extend((1..=d).map(|i| format!("q{i}")));
        header.extend((1..=d).map(|i| format!("v{i}")));
        writeln!(out, "{}", header.join(","))?;
        for s in self.states() {
            let v = self.model.to_velocity(&s).map_err(io::Error::other)?;
            let mut fields = vec![fmt_f64(s.t)];
            fields.extend(v.q.iter().chain(&v.v_or_p).map(|&x| fmt_f64(x)));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Seventeen significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Guard<'a> {
    model: &'a Model,
    barrier_signs: Vec<f64>,
}

impl<'a> Guard<'a> {
    fn new(model: &'a Model, q: &[f64]) -> Result<Self> {
        if let Some(m) = model.boundary_metric(q) {
            if m < GUARD_BAND {
                return Err(crate::error::domain(format!(
                    "initial state inside the guard band (metric {m:e})"
                )));
            }
        }
        let barrier_signs = model.barrier_coordinates(q);
        if barrier_signs.iter().any(|&c| c == 0.0) {
            return Err(Error::Singularity("initial state on a barrier".into()));
        }
        Ok(Guard {
            model,
            barrier_signs,
        })
    }

    fn check(&self, t: f64, y: &[f64]) -> Result<()> {
        let d = self.model.dim();
        let q = &y[..d];
        if let Some(m) = self.model.boundary_metric(q) {
            if !(m >= GUARD_BAND) {
                return Err(Error::DomainExit { t, metric: m });
            }
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singularity(format!("non-finite state at t = {t}")));
        }
        for (now, start) in self
            .model
            .barrier_coordinates(q)
            .iter()
            .zip(&self.barrier_signs)
        {
            if now * start <= 0.0 {
                return Err(Error::Singularity(format!("barrier crossed at t = {t}")));
            }
        }
        Ok(())
    }
}

struct Recorder {
    times: Vec<f64>,
    data: Vec<f64>,
    stride: usize,
    count: usize,
}

impl Recorder {
    fn push(&mut self, t: f64, y: &[f64], force: bool) {
        self.count += 1;
        if force || self.count % self.stride == 0 {
            if self.times.last() == Some(&t) {
                return;
            }
            self.times.push(t);
            self.data.extend_from_slice(y);
        }
    }
}

/// Integrates from `s0` up to `cfg.t_end`, in the representation of `s0.kind`.
pub fn integrate(model: &Model, s0: &PhaseState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    model.validate()?;
    cfg.validate()?;
    if s0.dim() != model.dim() {
        return Err(Error::InvalidArgument(format!(
            "model {} needs a {}D state",
            model.name(),
            model.dim()
        )));
    }
    if cfg.t_end <= s0.t {
        return Err(Error::InvalidArgument(
            "t_end must exceed the initial time".into(),
        ));
    }
    let mut y: Vec<f64> = s0.q.iter().chain(&s0.v_or_p).copied().collect();
    let guard = Guard::new(model, &s0.q)?;
    // Evaluating the vector field once validates the initial point.
    let mut scratch = vec![0.0; y.len()];
    model.rhs(s0.kind, &y, &mut scratch)?;

    let mut rec = Recorder {
        times: vec![s0.t],
        data: y.clone(),
        stride: cfg.record_every,
        count: 0,
    };
    let stats = match cfg.method {
        Method::Rk4 { dt } => run_rk4(model, s0.kind, &mut y, s0.t, dt, cfg, &guard, &mut rec)?,
        Method::Rk45 { tol } => run_rk45(model, s0.kind, &mut y, s0.t, tol, cfg, &guard, &mut rec)?,
    };
    Ok(Trajectory {
        model: *model,
        kind: s0.kind,
        times: rec.times,
        data: rec.data,
        stats,
    })
}

struct Rk4Work {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

fn rk4_step(model: &Model, kind: StateKind, y: &mut [f64], h: f64, w: &mut Rk4Work) -> Result<()> {
    let n = y.len();
    model.rhs(kind, y, &mut w.k[0])?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * w.k[0][i];
    }
    model.rhs(kind, &w.tmp, &mut w.k[1])?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * w.k[1][i];
    }
    model.rhs(kind, &w.tmp, &mut w.k[2])?;
    for i in 0..n {
        w.tmp[i] = y[i] + h * w.k[2][i];
    }
    model.rhs(kind, &w.tmp, &mut w.k[3])?;
    for i in 0..n {
        y[i] += h / 6.0 * (w.k[0][i] + 2.0 * w.k[1][i] + 2.0 * w.k[2][i] + w.k[3][i]);
    }
    Ok(())
}

/// A failed stage evaluation past the boundary means the step left the domain.
fn as_exit(e: Error, t: f64, model: &Model, y: &[f64]) -> Error {
    match e {
        Error::Domain(_) | Error::Pole { .. } => Error::DomainExit {
            t,
            metric: model.boundary_metric(&y[..model.dim()]).unwrap_or(f64::NAN),
        },
        other => other,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_rk4(
    model: &Model,
    kind: StateKind,
    y: &mut [f64],
    t0: f64,
    dt: f64,
    cfg: &IntegratorConfig,
    guard: &Guard,
    rec: &mut Recorder,
) -> Result<IntegrationStats> {
    let n = y.len();
    let mut w = Rk4Work {
        k: std::array::from_fn(|_| vec![0.0; n]),
        tmp: vec![0.0; n],
    };
    let span = cfg.t_end - t0;
    let full = (span / dt * (1.0 - 1e-12)).floor() as usize;
    let total = if t0 + full as f64 * dt < cfg.t_end {
        full + 1
    } else {
        full
    };
    let mut stats = IntegrationStats::default();
    for step in 0..total {
        if stats.steps >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(stats.steps));
        }
        let t = t0 + step as f64 * dt;
        let t_next = if step + 1 == total {
            cfg.t_end
        } else {
            t0 + (step + 1) as f64 * dt
        };
        rk4_step(model, kind, y, t_next - t, &mut w).map_err(|e| as_exit(e, t, model, y))?;
        stats.steps += 1;
        guard.check(t_next, y)?;
        rec.push(t_next, y, step + 1 == total);
    }
    Ok(stats)
}

// Dormand-Prince 5(4) tableau; the systems are autonomous so the nodes are not needed.
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[allow(clippy::too_many_arguments)]
fn run_rk45(
    model: &Model,
    kind: StateKind,
    y: &mut [f64],
    t0: f64,
    tol: f64,
    cfg: &IntegratorConfig,
    guard: &Guard,
    rec: &mut Recorder,
) -> Result<IntegrationStats> {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut stats = IntegrationStats::default();
    let mut t = t0;
    let mut h = (1e-2f64).min(cfg.t_end - t0);
    while t < cfg.t_end {
        if stats.steps + stats.rejected >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(stats.steps));
        }
        let last = t + h >= cfg.t_end;
        if last {
            h = cfg.t_end - t;
        }
        let mut stage_ok = true;
        for s in 0..7 {
            for i in 0..n {
                tmp[i] = y[i] + h * (0..s).map(|j| DP_A[s][j] * k[j][i]).sum::<f64>();
            }
            if let Err(e) = model.rhs(kind, &tmp, &mut k[s]) {
                match e {
                    Error::Domain(_) | Error::Singularity(_) | Error::Pole { .. } => {
                        stage_ok = false;
                        break;
                    }
                    other => return Err(other),
                }
            }
        }
        let mut err = f64::INFINITY;
        if stage_ok {
            err = 0.0;
            for i in 0..n {
                y_new[i] = y[i] + h * (0..7).map(|j| DP_B[j] * k[j][i]).sum::<f64>();
                let e = h * (0..7).map(|j| DP_E[j] * k[j][i]).sum::<f64>();
                let sc = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
                err = err.max((e / sc).abs());
            }
        }
        if err <= 1.0 {
            t = if last { cfg.t_end } else { t + h };
            y.copy_from_slice(&y_new);
            stats.steps += 1;
            guard.check(t, y)?;
            rec.push(t, y, last);
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            stats.rejected += 1;
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h *= factor;
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::DomainExit {
                    t,
                    metric: model.boundary_metric(&y[..model.dim()]).unwrap_or(f64::NAN),
                });
            }
        }
    }
    Ok(stats)
}

/// Velocity and its time derivative for component `coord` at sample `i`.
fn velocity_and_acceleration(traj: &Trajectory, i: usize, coord: usize) -> Result<(f64, f64)> {
    let v = traj.model.to_velocity(&traj.state(i))?;
    let y: Vec<f64> = v.q.iter().chain(&v.v_or_p).copied().collect();
    let mut dy = vec![0.0; y.len()];
    traj.model.rhs(StateKind::Velocity, &y, &mut dy)?;
    let d = traj.dim();
    Ok((y[d + coord], dy[d + coord]))
}

/// Root in `[0, h]` of the cubic Hermite interpolant through `(v0, a0)` and `(v1, a1)`.
fn hermite_root(h: f64, v0: f64, a0: f64, v1: f64, a1: f64) -> f64 {
    let p = |s: f64| {
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * h * a0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * h * a1
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let flo = p(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if (p(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) * h
}

/// Times at which velocity component `coord` changes sign.
pub fn velocity_zero_crossings(traj: &Trajectory, coord: usize) -> Result<Vec<f64>> {
    if coord >= traj.dim() {
        return Err(Error::InvalidArgument(format!(
            "coordinate {coord} out of range"
        )));
    }
    let mut out = Vec::new();
    let mut prev = velocity_and_acceleration(traj, 0, coord)?;
    for i in 1..traj.len() {
        let cur = velocity_and_acceleration(traj, i, coord)?;
        if prev.0 != 0.0 && (prev.0 > 0.0) != (cur.0 > 0.0) {
            let h = traj.times[i] - traj.times[i - 1];
            out.push(traj.times[i - 1] + hermite_root(h, prev.0, prev.1, cur.0, cur.1));
        }
        prev = cur;
    }
    Ok(out)
}

/// Period from velocity zero crossings: `2 (t_last - t_first) / (count - 1)`.
pub fn measure_period(traj: &Trajectory, coord: usize) -> Result<f64> {
    let zc = velocity_zero_crossings(traj, coord)?;
    if zc.len() < 3 {
        return Err(Error::InsufficientCycles {
            found: zc.len(),
            needed: 3,
        });
    }
    Ok(2.0 * (zc[zc.len() - 1] - zc[0]) / (zc.len() - 1) as f64)
}

/// `max_t |q(s_t) - q(s_0)| / max(|q(s_0)|, 1)`.
pub fn conservation_drift(traj: &Trajectory, q: &ConservedQuantity) -> Result<f64> {
    let q0 = q.eval(&traj.state(0))?;
    let scale = q0.abs().max(1.0);
    let mut worst = 0.0f64;
    for s in traj.states() {
        worst = worst.max((q.eval(&s)? - q0).abs() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ModelParams1D;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_period_closes() {
        let m = Model::Ml1d(ModelParams1D::new(0.0, 1.0, 0.0).unwrap());
        let tr = integrate(
            &m,
            &PhaseState::velocity_1d(1.0, 0.0),
            &IntegratorConfig::rk4(1e-3, 2.0 * PI),
        )
        .unwrap();
        let last = tr.last();
        assert!((last.q[0] - 1.0).abs() < 1e-8 && last.v_or_p[0].abs() < 1e-8);
        assert_eq!(*tr.times.last().unwrap(), 2.0 * PI);
    }

    #[test]
    fn short_run_has_too_few_cycles() {
        let m = Model::Ml1d(ModelParams1D::new(0.0, 1.0, 0.0).unwrap());
        let tr = integrate(
            &m,
            &PhaseState::velocity_1d(1.0, 0.0),
            &IntegratorConfig::rk4(1e-2, 5.0),
        )
        .unwrap();
        assert!(matches!(
            measure_period(&tr, 0),
            Err(Error::InsufficientCycles { .. })
        ));
    }

    #[test]
    fn hermite_root_of_line() {
        assert!((hermite_root(2.0, 1.0, -1.0, -1.0, -1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_header_and_precision() {
        let m = Model::Ml1d(ModelParams1D::new(0.0, 1.0, 0.0).unwrap());
        let tr = integrate(
            &m,
            &PhaseState::velocity_1d(0.1, 0.0),
            &IntegratorConfig::rk4(0.1, 0.2),
        )
        .unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,q1,v1"));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|f| f.parse().unwrap())
            .collect();
        assert_eq!(first, vec![0.0, 0.1, 0.0]);
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
