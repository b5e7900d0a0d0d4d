use serde::{Deserialize, Serialize};

use crate::classical::{
    self, ConservedQuantity, ModelParams1D, ModelParams2D, PhaseState, StateKind,
};
use crate::error::{metric_factor, Error, Result};
use crate::ktrig::{cos_k, sin_k};

/// A classical model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// One-dimensional deformed oscillator, isotonic when `k > 0`.
    Ml1d(ModelParams1D),
    /// Planar deformed oscillator, Smorodinsky-Winternitz when `k2` or `k3` is set.
    Plane(ModelParams2D),
    /// Flat oscillator with frequencies `n1 omega0`, `n2 omega0`.
    Rational(ModelParams2D),
    /// Smorodinsky-Winternitz system on the curved plane, coordinates `(rho, phi)`.
    CurvedSw { kappa: f64, params: ModelParams2D },
}

fn barrier_force(k: f64, q: f64) -> Result<f64> {
    if k == 0.0 {
        return Ok(0.0);
    }
    if q == 0.0 {
        return Err(Error::Singularity(format!(
            "barrier of strength {k} reached"
        )));
    }
    Ok(2.0 * k / (q * q * q))
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Ml1d(_) => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Ml1d(_) => "ml1d",
            Model::Plane(_) => "plane",
            Model::Rational(_) => "rational",
            Model::CurvedSw { .. } => "curved_sw",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Ml1d(p) => p.validate(),
            Model::Plane(p) | Model::Rational(p) => p.validate(),
            Model::CurvedSw { kappa, params } => {
                if !kappa.is_finite() {
                    return Err(Error::InvalidArgument("kappa must be finite".into()));
                }
                params.validate()
            }
        }
    }

    /// Metric factor watched by the domain guard: `1 + lambda r^2`, or
    /// `Cos_k(rho)^2` on the curved plane. `None` when the model has no boundary.
    pub fn boundary_metric(&self, q: &[f64]) -> Option<f64> {
        match self {
            Model::Ml1d(p) if p.lambda < 0.0 => Some(1.0 + p.lambda * q[0] * q[0]),
            Model::Plane(p) if p.lambda < 0.0 => Some(1.0 + p.lambda * (q[0] * q[0] + q[1] * q[1])),
            Model::CurvedSw { kappa, .. } if *kappa > 0.0 => Some(cos_k(*kappa, q[0]).powi(2)),
            _ => None,
        }
    }

    /// Coordinates that a barrier forbids from reaching zero.
    pub(crate) fn barrier_coordinates(&self, q: &[f64]) -> Vec<f64> {
        match self {
            Model::Ml1d(p) if p.k > 0.0 => vec![q[0]],
            Model::Plane(p) => {
                let mut v = Vec::new();
                if p.k2 > 0.0 {
                    v.push(q[0]);
                }
                if p.k3 > 0.0 {
                    v.push(q[1]);
                }
                v
            }
            Model::CurvedSw { params, .. } => {
                let mut v = Vec::new();
                if params.k2 > 0.0 {
                    v.push(q[1].cos());
                }
                if params.k3 > 0.0 {
                    v.push(q[1].sin());
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// Time derivative of `y = (q, v_or_p)` in the representation `kind`.
    pub fn rhs(&self, kind: StateKind, y: &[f64], dy: &mut [f64]) -> Result<()> {
        match (self, kind) {
            (Model::Ml1d(p), StateKind::Velocity) => {
                dy[0] = y[1];
                dy[1] = classical::ml_acceleration(p, y[0], y[1])?;
            }
            (Model::Ml1d(p), StateKind::Momentum) => {
                let (x, pm) = (y[0], y[1]);
                let c = metric_factor(p.lambda, x * x)?;
                dy[0] = c * pm;
                dy[1] = -p.lambda * x * pm * pm - p.alpha * p.alpha * x / (c * c)
                    + barrier_force(p.k, x)?;
            }
            (Model::Plane(p), kind) => plane_rhs(p, kind, y, dy)?,
            (Model::Rational(p), _) => {
                let w1 = p.n1 as f64 * p.omega0;
                let w2 = p.n2 as f64 * p.omega0;
                dy[0] = y[2];
                dy[1] = y[3];
                dy[2] = -w1 * w1 * y[0];
                dy[3] = -w2 * w2 * y[1];
            }
            (Model::CurvedSw { kappa, params }, kind) => curved_rhs(*kappa, params, kind, y, dy)?,
        }
        Ok(())
    }

    /// Same state expressed with velocities.
    pub fn to_velocity(&self, s: &PhaseState) -> Result<PhaseState> {
        convert(self, s, StateKind::Velocity)
    }

    /// Same state expressed with momenta.
    pub fn to_momentum(&self, s: &PhaseState) -> Result<PhaseState> {
        convert(self, s, StateKind::Momentum)
    }

    /// Total energy.
    pub fn energy(&self) -> ConservedQuantity {
        match *self {
            Model::Ml1d(p) => classical::energy_1d(p),
            Model::Plane(p) => classical::energy_2d(p),
            Model::Rational(p) => ConservedQuantity::new("H", move |s| {
                let [ex, ey, _, _] = classical::rational_oscillator_integrals(&p, s)?;
                Ok(ex + ey)
            }),
            Model::CurvedSw { kappa, params } => ConservedQuantity::new("H", move |s| {
                let v = convert(&Model::CurvedSw { kappa, params }, s, StateKind::Velocity)?;
                let sr = sin_k(kappa, v.q[0]);
                let t = 0.5 * (v.v_or_p[0].powi(2) + sr * sr * v.v_or_p[1].powi(2));
                Ok(t + classical::curved_sw_potential(kappa, v.q[0], v.q[1], &params)?)
            }),
        }
    }

    /// Energy followed by the model's family of first integrals.
    pub fn conserved_quantities(&self) -> Vec<ConservedQuantity> {
        let mut out = vec![self.energy()];
        match *self {
            Model::Ml1d(_) => {}
            Model::Plane(p) if p.k2 == 0.0 && p.k3 == 0.0 => {
                out.extend(classical::nonlinear2d_quantities(p))
            }
            Model::Plane(p) => out.extend(classical::deformed_sw_quantities(p)),
            Model::Rational(p) => out.extend(classical::rational_quantities(p)),
            Model::CurvedSw { kappa, params } => {
                out.extend(classical::curved_sw_quantities(kappa, params))
            }
        }
        out
    }
}

fn plane_rhs(p: &ModelParams2D, kind: StateKind, y: &[f64], dy: &mut [f64]) -> Result<()> {
    let (x, yy) = (y[0], y[1]);
    let l = p.lambda;
    let c = metric_factor(l, x * x + yy * yy)?;
    let a2 = p.alpha * p.alpha;
    let grad = [
        a2 * x / (c * c) - barrier_force(p.k2, x)?,
        a2 * yy / (c * c) - barrier_force(p.k3, yy)?,
    ];
    match kind {
        StateKind::Momentum => {
            let (px, py) = (y[2], y[3]);
            let qp = x * px + yy * py;
            dy[0] = px + l * qp * x;
            dy[1] = py + l * qp * yy;
            dy[2] = -l * qp * px - grad[0];
            dy[3] = -l * qp * py - grad[1];
        }
        StateKind::Velocity => {
            let (vx, vy) = (y[2], y[3]);
            let s = l * (x * vx + yy * vy) / c;
            let (px, py) = (vx - s * x, vy - s * yy);
            let qp = x * px + yy * py;
            let vp = vx * px + vy * py;
            let pdot = [-l * qp * px - grad[0], -l * qp * py - grad[1]];
            let qpdot = x * pdot[0] + yy * pdot[1];
            dy[0] = vx;
            dy[1] = vy;
            // v = (I + lambda q q^T) p, differentiated along the flow
            dy[2] = l * (vx * qp + x * vp) + pdot[0] + l * x * qpdot;
            dy[3] = l * (vy * qp + yy * vp) + pdot[1] + l * yy * qpdot;
        }
    }
    Ok(())
}

fn curved_forces(
    kappa: f64,
    p: &ModelParams2D,
    rho: f64,
    phi: f64,
) -> Result<(f64, f64, f64, f64)> {
    let (s, c) = (sin_k(kappa, rho), cos_k(kappa, rho));
    if c.abs() < crate::ktrig::POLE_TOLERANCE {
        return Err(Error::Pole { x: rho, cos: c });
    }
    if s == 0.0 {
        return Err(Error::Singularity(
            "rho = 0 in geodesic polar coordinates".into(),
        ));
    }
    let (sp, cp) = phi.sin_cos();
    let w2 = p.omega0 * p.omega0;
    let t = s / c;
    let mut barrier_rho = 0.0;
    let mut du_dphi = 0.0;
    if p.k2 > 0.0 {
        if cp == 0.0 {
            return Err(Error::Singularity("cos(phi) = 0 with k2 > 0".into()));
        }
        barrier_rho += p.k2 / (cp * cp);
        du_dphi += 2.0 * p.k2 * sp / (s * s * cp * cp * cp);
    }
    if p.k3 > 0.0 {
        if sp == 0.0 {
            return Err(Error::Singularity("sin(phi) = 0 with k3 > 0".into()));
        }
        barrier_rho += p.k3 / (sp * sp);
        du_dphi -= 2.0 * p.k3 * cp / (s * s * sp * sp * sp);
    }
    let du_drho = w2 * t / (c * c) - 2.0 * barrier_rho * c / (s * s * s);
    Ok((s, c, du_drho, du_dphi))
}

fn curved_rhs(
    kappa: f64,
    p: &ModelParams2D,
    kind: StateKind,
    y: &[f64],
    dy: &mut [f64],
) -> Result<()> {
    let (rho, phi) = (y[0], y[1]);
    let (s, c, du_drho, du_dphi) = curved_forces(kappa, p, rho, phi)?;
    match kind {
        StateKind::Momentum => {
            let (pr, pp) = (y[2], y[3]);
            dy[0] = pr;
            dy[1] = pp / (s * s);
            dy[2] = pp * pp * c / (s * s * s) - du_drho;
            dy[3] = -du_dphi;
        }
        StateKind::Velocity => {
            let (vr, vp) = (y[2], y[3]);
            dy[0] = vr;
            dy[1] = vp;
            dy[2] = s * c * vp * vp - du_drho;
            dy[3] = (-du_dphi - 2.0 * s * c * vr * vp) / (s * s);
        }
    }
    Ok(())
}

fn convert(model: &Model, s: &PhaseState, target: StateKind) -> Result<PhaseState> {
    if s.kind == target {
        return Ok(s.clone());
    }
    match model {
        Model::Ml1d(p) => {
            let x = s.q[0];
            let c = metric_factor(p.lambda, x * x)?;
            let b = match target {
                StateKind::Velocity => s.v_or_p[0] * c,
                StateKind::Momentum => s.v_or_p[0] / c,
            };
            PhaseState::new(vec![x], vec![b], target, s.t)
        }
        Model::Plane(p) => match target {
            StateKind::Velocity => classical::to_velocity_kind(p.lambda, s),
            StateKind::Momentum => classical::to_momentum_kind(p.lambda, s),
        },
        Model::Rational(_) => PhaseState::new(s.q.clone(), s.v_or_p.clone(), target, s.t),
        Model::CurvedSw { kappa, .. } => {
            let sr = sin_k(*kappa, s.q[0]);
            let s2 = sr * sr;
            let b = match target {
                StateKind::Velocity => {
                    if s2 == 0.0 {
                        return Err(Error::Singularity("rho = 0 in momentum conversion".into()));
                    }
                    s.v_or_p[1] / s2
                }
                StateKind::Momentum => s.v_or_p[1] * s2,
            };
            PhaseState::new(s.q.clone(), vec![s.v_or_p[0], b], target, s.t)
        }
    }
}
