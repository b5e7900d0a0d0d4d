use super::{ModelParams2D, PhaseState, StateKind};
use crate::error::{metric_factor, Error, Result};

/// Momenta from velocities: `p = v - lambda q (q.v) / (1 + lambda r^2)`.
pub fn legendre_2d(p: &ModelParams2D, x: f64, y: f64, vx: f64, vy: f64) -> Result<(f64, f64)> {
    let c = metric_factor(p.lambda, x * x + y * y)?;
    let s = p.lambda * (x * vx + y * vy) / c;
    Ok((vx - s * x, vy - s * y))
}

/// Velocities from momenta: `v = p + lambda q (q.p)`.
pub fn legendre_2d_inverse(
    p: &ModelParams2D,
    x: f64,
    y: f64,
    px: f64,
    py: f64,
) -> Result<(f64, f64)> {
    metric_factor(p.lambda, x * x + y * y)?;
    let s = p.lambda * (x * px + y * py);
    Ok((px + s * x, py + s * y))
}

fn lambda_only(lambda: f64) -> ModelParams2D {
    ModelParams2D {
        lambda,
        alpha: 0.0,
        k2: 0.0,
        k3: 0.0,
        omega0: 1.0,
        n1: 1,
        n2: 1,
    }
}

/// Copy of `s` carrying velocities.
pub fn to_velocity_kind(lambda: f64, s: &PhaseState) -> Result<PhaseState> {
    let [x, y, a, b] = s.planar()?;
    match s.kind {
        StateKind::Velocity => Ok(s.clone()),
        StateKind::Momentum => {
            let (vx, vy) = legendre_2d_inverse(&lambda_only(lambda), x, y, a, b)?;
            Ok(PhaseState::velocity_2d(x, y, vx, vy).at(s.t))
        }
    }
}

/// Copy of `s` carrying momenta.
pub fn to_momentum_kind(lambda: f64, s: &PhaseState) -> Result<PhaseState> {
    let [x, y, a, b] = s.planar()?;
    match s.kind {
        StateKind::Momentum => Ok(s.clone()),
        StateKind::Velocity => {
            let (px, py) = legendre_2d(&lambda_only(lambda), x, y, a, b)?;
            Ok(PhaseState::momentum_2d(x, y, px, py).at(s.t))
        }
    }
}

/// `J = x b - y a`; identical for velocities and momenta.
pub fn angular_momentum(s: &PhaseState) -> Result<f64> {
    let [x, y, a, b] = s.planar()?;
    Ok(x * b - y * a)
}

fn barrier(k: f64, num: f64, axis: f64, name: &str) -> Result<f64> {
    if k == 0.0 {
        return Ok(0.0);
    }
    if axis == 0.0 {
        return Err(Error::Singularity(format!(
            "{name} = 0 with a barrier of strength {k}"
        )));
    }
    Ok(k * num / (axis * axis))
}

/// `alpha^2 r^2 / (2 (1 + lambda r^2)) + k2 / x^2 + k3 / y^2`.
pub fn potential_2d(p: &ModelParams2D, x: f64, y: f64) -> Result<f64> {
    let r2 = x * x + y * y;
    let c = metric_factor(p.lambda, r2)?;
    Ok(
        0.5 * p.alpha * p.alpha * r2 / c
            + barrier(p.k2, 1.0, x, "x")?
            + barrier(p.k3, 1.0, y, "y")?,
    )
}

/// `H = (p^2 + lambda (q.p)^2) / 2 + V`.
pub fn hamiltonian_2d(p: &ModelParams2D, s: &PhaseState) -> Result<f64> {
    let s = to_momentum_kind(p.lambda, s)?;
    let [x, y, px, py] = s.planar()?;
    let qp = x * px + y * py;
    Ok(0.5 * (px * px + py * py + p.lambda * qp * qp) + potential_2d(p, x, y)?)
}

/// `L = (v^2 + lambda J^2) / (2 (1 + lambda r^2)) - V`.
pub fn lagrangian_2d(p: &ModelParams2D, s: &PhaseState) -> Result<f64> {
    let s = to_velocity_kind(p.lambda, s)?;
    let [x, y, vx, vy] = s.planar()?;
    let c = metric_factor(p.lambda, x * x + y * y)?;
    let j = x * vy - y * vx;
    Ok(0.5 * (vx * vx + vy * vy + p.lambda * j * j) / c - potential_2d(p, x, y)?)
}

/// `(P1, P2, alpha x / sqrt(c), alpha y / sqrt(c), J)` with `c = 1 + lambda r^2`.
fn deformed_momenta(p: &ModelParams2D, s: &PhaseState) -> Result<[f64; 5]> {
    let s = to_velocity_kind(p.lambda, s)?;
    let [x, y, vx, vy] = s.planar()?;
    let c = metric_factor(p.lambda, x * x + y * y)?;
    let root = c.sqrt();
    let j = x * vy - y * vx;
    Ok([
        (vx - p.lambda * j * y) / root,
        (vy + p.lambda * j * x) / root,
        p.alpha * x / root,
        p.alpha * y / root,
        j,
    ])
}

/// `I1 = |K1|^2`, `I2 = |K2|^2`, `I3 = Im(K1 K2*)` with `K_i = P_i + i alpha q_i / sqrt(c)`.
pub fn nonlinear2d_integrals(p: &ModelParams2D, s: &PhaseState) -> Result<[f64; 3]> {
    let [p1, p2, a1, a2, _] = deformed_momenta(p, s)?;
    // K1 K2* = (p1 + i a1)(p2 - i a2)
    Ok([p1 * p1 + a1 * a1, p2 * p2 + a2 * a2, a1 * p2 - p1 * a2])
}

/// Integrals of the deformed Smorodinsky-Winternitz system.
pub fn deformed_sw_integrals(p: &ModelParams2D, s: &PhaseState) -> Result<[f64; 3]> {
    let [p1, p2, a1, a2, j] = deformed_momenta(p, s)?;
    let (x, y) = (s.q[0], s.q[1]);
    let l = p.lambda;
    Ok([
        p1 * p1 + a1 * a1 + 2.0 * barrier(p.k2, 1.0 + l * y * y, x, "x")?,
        p2 * p2 + a2 * a2 + 2.0 * barrier(p.k3, 1.0 + l * x * x, y, "y")?,
        j * j + 2.0 * barrier(p.k2, y * y, x, "x")? + 2.0 * barrier(p.k3, x * x, y, "y")?,
    ])
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cpow(z: (f64, f64), n: u32) -> (f64, f64) {
    (0..n).fold((1.0, 0.0), |acc, _| cmul(acc, z))
}

/// `(Ex, Ey, Im J, Re J)` with `J = Kx^n2 (Ky*)^n1` for the flat rational
/// oscillator; momenta and velocities coincide there.
pub fn rational_oscillator_integrals(p: &ModelParams2D, s: &PhaseState) -> Result<[f64; 4]> {
    let [x, y, px, py] = s.planar()?;
    let w1 = p.n1 as f64 * p.omega0;
    let w2 = p.n2 as f64 * p.omega0;
    let kx = (px, w1 * x);
    let ky_conj = (py, -w2 * y);
    let j = cmul(cpow(kx, p.n2), cpow(ky_conj, p.n1));
    Ok([
        0.5 * (px * px + w1 * w1 * x * x),
        0.5 * (py * py + w2 * w2 * y * y),
        j.1,
        j.0,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        let flat = ModelParams2D::new(0.0, 1.0).unwrap();
        assert_eq!(legendre_2d(&flat, 0.3, -0.2, 1.5, 2.5).unwrap(), (1.5, 2.5));
        let p = ModelParams2D::new(1.0, 1.0).unwrap();
        assert_eq!(legendre_2d(&p, 1.0, 0.0, 1.0, 0.0).unwrap(), (0.5, 0.0));
        assert_eq!(legendre_2d(&p, 0.4, 0.9, 0.0, 0.0).unwrap(), (0.0, 0.0));
        let neg = ModelParams2D::new(-1.0, 1.0).unwrap();
        assert!(legendre_2d(&neg, 1.0, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn nonlinear_examples() {
        let p = ModelParams2D::new(0.0, 1.0).unwrap();
        let i = nonlinear2d_integrals(&p, &PhaseState::velocity_2d(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(i, [1.0, 0.0, 0.0]);
        let i = nonlinear2d_integrals(&p, &PhaseState::velocity_2d(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(i, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn sw_barrier_contact() {
        let p = ModelParams2D::new(0.3, 1.0)
            .unwrap()
            .with_barriers(0.1, 0.2)
            .unwrap();
        let s = PhaseState::velocity_2d(0.0, 0.5, 0.1, 0.1);
        assert!(matches!(
            deformed_sw_integrals(&p, &s),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn isotropic_rational_forms() {
        let p = ModelParams2D::new(0.0, 1.0).unwrap();
        let (x, y, px, py) = (0.3, -0.7, 1.1, 0.4);
        let [_, _, im, re] =
            rational_oscillator_integrals(&p, &PhaseState::momentum_2d(x, y, px, py)).unwrap();
        assert!((re - (px * py + x * y)).abs() < 1e-15);
        assert!((im - (x * py - y * px)).abs() < 1e-15);
        let zero = rational_oscillator_integrals(&p, &PhaseState::momentum_2d(0.0, 0.0, 0.0, 0.0));
        assert_eq!(zero.unwrap(), [0.0; 4]);
    }
}
