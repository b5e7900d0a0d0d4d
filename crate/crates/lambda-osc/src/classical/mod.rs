//! Classical models: Lagrangians, Hamiltonians, exact solutions and first
//! integrals of the one- and two-dimensional deformed oscillators.

mod curved;
mod lagrangian;
mod lie;
mod one_dim;
mod plane;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use curved::{curved_sw_integrals, curved_sw_lagrangian, curved_sw_potential};
pub use lagrangian::{Lagrangian, MlLagrangian, PlaneLagrangian};
pub use lie::{commutator_residuals, PlaneVectorField, TestPolynomial};
pub use one_dim::{
    deformed_isotonic_frequency, deformed_isotonic_residual, deformed_isotonic_solution,
    hamiltonian_1d, isotonic_exact_solution, lagrangian_1d, ml_acceleration, ml_exact_solution,
    ml_frequency, DeformedIsotonicLimit, DeformedIsotonicUnbounded,
};
pub use plane::{
    angular_momentum, deformed_sw_integrals, hamiltonian_2d, lagrangian_2d, legendre_2d,
    legendre_2d_inverse, nonlinear2d_integrals, potential_2d, rational_oscillator_integrals,
    to_momentum_kind, to_velocity_kind,
};

/// Parameters of the one-dimensional models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams1D {
    pub lambda: f64,
    pub alpha: f64,
    /// Isotonic strength of the `k / x^2` term; zero switches it off.
    #[serde(default)]
    pub k: f64,
}

impl ModelParams1D {
    pub fn new(lambda: f64, alpha: f64, k: f64) -> Result<Self> {
        let p = ModelParams1D { lambda, alpha, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.alpha.is_finite() && self.k.is_finite()) {
            return Err(Error::InvalidArgument("parameters must be finite".into()));
        }
        if self.alpha < 0.0 || self.k < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "alpha and k must be non-negative (alpha = {}, k = {})",
                self.alpha, self.k
            )));
        }
        Ok(())
    }
}

/// Parameters of the two-dimensional models.
///
/// `omega0`, `n1`, `n2` are only read by the rational oscillator, `k2`, `k3`
/// by the Smorodinsky-Winternitz family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams2D {
    pub lambda: f64,
    pub alpha: f64,
    #[serde(default)]
    pub k2: f64,
    #[serde(default)]
    pub k3: f64,
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "one_u32")]
    pub n1: u32,
    #[serde(default = "one_u32")]
    pub n2: u32,
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

impl ModelParams2D {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        let p = ModelParams2D {
            lambda,
            alpha,
            k2: 0.0,
            k3: 0.0,
            omega0: 1.0,
            n1: 1,
            n2: 1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_barriers(mut self, k2: f64, k3: f64) -> Result<Self> {
        self.k2 = k2;
        self.k3 = k3;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rational(mut self, omega0: f64, n1: u32, n2: u32) -> Result<Self> {
        self.omega0 = omega0;
        self.n1 = n1;
        self.n2 = n2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let reals = [self.lambda, self.alpha, self.k2, self.k3, self.omega0];
        if reals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("parameters must be finite".into()));
        }
        if self.alpha < 0.0 || self.k2 < 0.0 || self.k3 < 0.0 || self.omega0 < 0.0 {
            return Err(Error::InvalidArgument(
                "alpha, k2, k3 and omega0 must be non-negative".into(),
            ));
        }
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidArgument("n1 and n2 must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Velocity,
    Momentum,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Velocity => "velocity",
            StateKind::Momentum => "momentum",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the tangent or cotangent bundle, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub q: Vec<f64>,
    pub v_or_p: Vec<f64>,
    pub kind: StateKind,
    pub t: f64,
}

impl PhaseState {
    pub fn new(q: Vec<f64>, v_or_p: Vec<f64>, kind: StateKind, t: f64) -> Result<Self> {
        if q.len() != v_or_p.len() || q.is_empty() || q.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "state needs matching lengths 1 or 2 (q: {}, v/p: {})",
                q.len(),
                v_or_p.len()
            )));
        }
        Ok(PhaseState { q, v_or_p, kind, t })
    }

    pub fn velocity_1d(x: f64, v: f64) -> Self {
        PhaseState {
            q: vec![x],
            v_or_p: vec![v],
            kind: StateKind::Velocity,
            t: 0.0,
        }
    }

    pub fn momentum_1d(x: f64, p: f64) -> Self {
        PhaseState {
            q: vec![x],
            v_or_p: vec![p],
            kind: StateKind::Momentum,
            t: 0.0,
        }
    }

    pub fn velocity_2d(x: f64, y: f64, vx: f64, vy: f64) -> Self {
        PhaseState {
            q: vec![x, y],
            v_or_p: vec![vx, vy],
            kind: StateKind::Velocity,
            t: 0.0,
        }
    }

    pub fn momentum_2d(x: f64, y: f64, px: f64, py: f64) -> Self {
        PhaseState {
            q: vec![x, y],
            v_or_p: vec![px, py],
            kind: StateKind::Momentum,
            t: 0.0,
        }
    }

    pub fn at(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn expect_kind(&self, kind: StateKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind.name(),
            })
        }
    }

    pub(crate) fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "expected a {dim}D state, got {}D",
                self.dim()
            )))
        }
    }

    /// `(x, y, a, b)` of a planar state, `(a, b)` being velocities or momenta.
    pub(crate) fn planar(&self) -> Result<[f64; 4]> {
        self.expect_dim(2)?;
        Ok([self.q[0], self.q[1], self.v_or_p[0], self.v_or_p[1]])
    }
}

type Evaluator = dyn Fn(&PhaseState) -> Result<f64> + Send + Sync;

/// A named first integral.
#[derive(Clone)]
pub struct ConservedQuantity {
    pub name: String,
    eval: Arc<Evaluator>,
}

impl ConservedQuantity {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&PhaseState) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        ConservedQuantity {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, s: &PhaseState) -> Result<f64> {
        (self.eval)(s)
    }
}

impl fmt::Debug for ConservedQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConservedQuantity")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Energy of the one-dimensional model, for states of either kind.
pub fn energy_1d(p: ModelParams1D) -> ConservedQuantity {
    ConservedQuantity::new("H", move |s| {
        s.expect_dim(1)?;
        let x = s.q[0];
        let momentum = match s.kind {
            StateKind::Momentum => s.v_or_p[0],
            StateKind::Velocity => s.v_or_p[0] / crate::error::metric_factor(p.lambda, x * x)?,
        };
        hamiltonian_1d(&p, x, momentum)
    })
}

/// Energy of the planar model (oscillator plus optional barriers).
pub fn energy_2d(p: ModelParams2D) -> ConservedQuantity {
    ConservedQuantity::new("H", move |s| {
        hamiltonian_2d(&p, &to_momentum_kind(p.lambda, s)?)
    })
}

/// `I1`, `I2`, `I3` of the planar oscillator.
pub fn nonlinear2d_quantities(p: ModelParams2D) -> Vec<ConservedQuantity> {
    (0..3)
        .map(|i| {
            ConservedQuantity::new(format!("I{}", i + 1), move |s| {
                Ok(nonlinear2d_integrals(&p, s)?[i])
            })
        })
        .collect()
}

/// `I1`, `I2`, `I3` of the deformed Smorodinsky-Winternitz system.
pub fn deformed_sw_quantities(p: ModelParams2D) -> Vec<ConservedQuantity> {
    (0..3)
        .map(|i| {
            ConservedQuantity::new(format!("I{}", i + 1), move |s| {
                Ok(deformed_sw_integrals(&p, s)?[i])
            })
        })
        .collect()
}

/// `Ex`, `Ey`, `Im J`, `Re J` of the rational oscillator.
pub fn rational_quantities(p: ModelParams2D) -> Vec<ConservedQuantity> {
    ["Ex", "Ey", "ImJ", "ReJ"]
        .iter()
        .enumerate()
        .map(|(i, name)| {
            ConservedQuantity::new(*name, move |s| Ok(rational_oscillator_integrals(&p, s)?[i]))
        })
        .collect()
}

/// Integrals of the curved S-W system; states carry `(rho, phi)` and their
/// velocities.
pub fn curved_sw_quantities(kappa: f64, p: ModelParams2D) -> Vec<ConservedQuantity> {
    (0..3)
        .map(|i| {
            ConservedQuantity::new(format!("I{}", i + 1), move |s| {
                Ok(curved_sw_integrals(kappa, s, &p)?[i])
            })
        })
        .collect()
}
