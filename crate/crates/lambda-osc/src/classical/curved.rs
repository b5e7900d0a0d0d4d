//! Smorodinsky-Winternitz system on the constant-curvature plane, in
//! geodesic polar coordinates `(rho, phi)`.

use super::{ModelParams2D, PhaseState, StateKind};
use crate::error::{Error, Result};
use crate::ktrig::{cos_k, sin_k, tan_k};

fn axis_term(k: f64, d: f64, what: &str) -> Result<f64> {
    if k == 0.0 {
        return Ok(0.0);
    }
    if d == 0.0 {
        return Err(Error::Singularity(format!(
            "{what} vanishes with a barrier of strength {k}"
        )));
    }
    Ok(k / (d * d))
}

/// `U = (w0^2 / 2) Tan^2(rho) + k2 / (Sin(rho) cos(phi))^2 + k3 / (Sin(rho) sin(phi))^2`.
pub fn curved_sw_potential(kappa: f64, rho: f64, phi: f64, p: &ModelParams2D) -> Result<f64> {
    let t = tan_k(kappa, rho)?;
    let s = sin_k(kappa, rho);
    let (sp, cp) = phi.sin_cos();
    Ok(0.5 * p.omega0 * p.omega0 * t * t
        + axis_term(p.k2, s * cp, "Sin(rho) cos(phi)")?
        + axis_term(p.k3, s * sp, "Sin(rho) sin(phi)")?)
}

/// `(rho, phi, v_rho, v_phi)`; momenta are converted with `p_phi = Sin^2(rho) v_phi`.
fn polar_velocities(kappa: f64, s: &PhaseState) -> Result<[f64; 4]> {
    let [rho, phi, a, b] = s.planar()?;
    match s.kind {
        StateKind::Velocity => Ok([rho, phi, a, b]),
        StateKind::Momentum => {
            let sr = sin_k(kappa, rho);
            if sr == 0.0 {
                return Err(Error::Singularity(
                    "Sin(rho) = 0 in the momentum conversion".into(),
                ));
            }
            Ok([rho, phi, a, b / (sr * sr)])
        }
    }
}

/// `L = (v_rho^2 + Sin^2(rho) v_phi^2) / 2 - U`.
pub fn curved_sw_lagrangian(kappa: f64, s: &PhaseState, p: &ModelParams2D) -> Result<f64> {
    let [rho, phi, vr, vp] = polar_velocities(kappa, s)?;
    let sr = sin_k(kappa, rho);
    Ok(0.5 * (vr * vr + sr * sr * vp * vp) - curved_sw_potential(kappa, rho, phi, p)?)
}

/// The three curvature-dependent integrals `I1(k)`, `I2(k)`, `I3(k)`.
pub fn curved_sw_integrals(kappa: f64, s: &PhaseState, p: &ModelParams2D) -> Result<[f64; 3]> {
    let [rho, phi, vr, vp] = polar_velocities(kappa, s)?;
    let t = tan_k(kappa, rho)?;
    let (sr, cr) = (sin_k(kappa, rho), cos_k(kappa, rho));
    let (sp, cp) = phi.sin_cos();
    let p1 = cp * vr - cr * sr * sp * vp;
    let p2 = sp * vr + cr * sr * cp * vp;
    let j = sr * sr * vp;
    let w2 = p.omega0 * p.omega0;
    let (tx, ty) = (t * cp, t * sp);
    Ok([
        p1 * p1 + w2 * tx * tx + 2.0 * axis_term(p.k2, tx, "Tan(rho) cos(phi)")?,
        p2 * p2 + w2 * ty * ty + 2.0 * axis_term(p.k3, ty, "Tan(rho) sin(phi)")?,
        j * j + 2.0 * axis_term(p.k2, cp, "cos(phi)")? + 2.0 * axis_term(p.k3, sp, "sin(phi)")?,
    ])
}
