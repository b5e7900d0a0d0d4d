//! Lagrangians written once over generic dual numbers, so the Euler-Lagrange
//! oracle can take exact partial derivatives.

use num_dual::DualNum;

use super::{ModelParams1D, ModelParams2D};
use crate::error::{domain, Error, Result};

/// A Lagrangian `L(q, v)` on `dim()` degrees of freedom.
pub trait Lagrangian {
    fn dim(&self) -> usize;
    fn value<D: DualNum<Primitive = f64> + Copy>(&self, q: &[D], v: &[D]) -> Result<D>;
}

fn positive_metric<D: DualNum<Primitive = f64>>(c: &D) -> Result<()> {
    let re: f64 = c.re();
    if re > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("1 + lambda r^2 = {re}")))
    }
}

fn nonzero<D: DualNum<Primitive = f64>>(k: f64, x: &D) -> Result<()> {
    let re: f64 = x.re();
    if k > 0.0 && re == 0.0 {
        Err(Error::Singularity("barrier coordinate is zero".into()))
    } else {
        Ok(())
    }
}

/// One-dimensional deformed (isotonic) oscillator.
#[derive(Debug, Clone, Copy)]
pub struct MlLagrangian(pub ModelParams1D);

impl Lagrangian for MlLagrangian {
    fn dim(&self) -> usize {
        1
    }

    fn value<D: DualNum<Primitive = f64> + Copy>(&self, q: &[D], v: &[D]) -> Result<D> {
        let p = &self.0;
        let (x, vx) = (q[0], v[0]);
        let c = x * x * p.lambda + 1.0;
        positive_metric(&c)?;
        let mut l = (vx * vx - x * x * (p.alpha * p.alpha)) / (c * 2.0);
        if p.k > 0.0 {
            nonzero(p.k, &x)?;
            l -= (x * x).recip() * p.k;
        }
        Ok(l)
    }
}

/// Planar oscillator with optional Smorodinsky-Winternitz barriers.
#[derive(Debug, Clone, Copy)]
pub struct PlaneLagrangian(pub ModelParams2D);

impl Lagrangian for PlaneLagrangian {
    fn dim(&self) -> usize {
        2
    }

    fn value<D: DualNum<Primitive = f64> + Copy>(&self, q: &[D], v: &[D]) -> Result<D> {
        let p = &self.0;
        let (x, y, vx, vy) = (q[0], q[1], v[0], v[1]);
        let r2 = x * x + y * y;
        let c = r2 * p.lambda + 1.0;
        positive_metric(&c)?;
        let j = x * vy - y * vx;
        let kinetic = (vx * vx + vy * vy + j * j * p.lambda) / (c * 2.0);
        let mut l = kinetic - r2 * (0.5 * p.alpha * p.alpha) / c;
        if p.k2 > 0.0 {
            nonzero(p.k2, &x)?;
            l -= (x * x).recip() * p.k2;
        }
        if p.k3 > 0.0 {
            nonzero(p.k3, &y)?;
            l -= (y * y).recip() * p.k3;
        }
        Ok(l)
    }
}
