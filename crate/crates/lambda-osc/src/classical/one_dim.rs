use super::ModelParams1D;
use crate::error::{domain, metric_factor, Error, Result};

fn barrier_guard(k: f64, x: f64) -> Result<()> {
    if k > 0.0 && x == 0.0 {
        Err(Error::Singularity(format!("x = 0 with k = {k}")))
    } else {
        Ok(())
    }
}

/// Acceleration from the Euler-Lagrange equation,
/// `x'' = (lambda x v^2 - alpha^2 x) / (1 + lambda x^2) + 2k (1 + lambda x^2) / x^3`.
///
/// The last term is absent when `k = 0`.
pub fn ml_acceleration(p: &ModelParams1D, x: f64, v: f64) -> Result<f64> {
    let c = metric_factor(p.lambda, x * x)?;
    barrier_guard(p.k, x)?;
    let mut a = (p.lambda * x * v * v - p.alpha * p.alpha * x) / c;
    if p.k > 0.0 {
        a += 2.0 * p.k * c / (x * x * x);
    }
    Ok(a)
}

/// Frequency of the undeformed-in-shape harmonic motion of amplitude `amplitude`.
pub fn ml_frequency(p: &ModelParams1D, amplitude: f64) -> Result<f64> {
    let c = metric_factor(p.lambda, amplitude * amplitude)?;
    Ok(p.alpha / c.sqrt())
}

/// `x = A sin(w t + phi)` with `w = alpha / sqrt(1 + lambda A^2)`; returns `(x, v)`.
pub fn ml_exact_solution(
    p: &ModelParams1D,
    amplitude: f64,
    phi: f64,
    t: f64,
) -> Result<(f64, f64)> {
    let w = ml_frequency(p, amplitude)?;
    let (s, c) = (w * t + phi).sin_cos();
    Ok((amplitude * s, amplitude * w * c))
}

/// Pinney-Ermakov solution of the isotonic oscillator `x'' + alpha^2 x - 2k/x^3 = 0`.
pub fn isotonic_exact_solution(p: &ModelParams1D, amplitude: f64, phi: f64, t: f64) -> Result<f64> {
    if p.k <= 0.0 || amplitude <= 0.0 || p.alpha <= 0.0 {
        return Err(domain(format!(
            "isotonic solution needs k, A, alpha > 0 (k = {}, A = {amplitude}, alpha = {})",
            p.k, p.alpha
        )));
    }
    let c = -2.0 * p.k;
    let s = (p.alpha * t + phi).sin();
    let a4 = amplitude.powi(4);
    let radicand = (p.alpha * p.alpha * a4 + c) * s * s - c;
    if radicand <= 0.0 {
        return Err(domain(format!("radicand {radicand} is not positive")));
    }
    Ok(radicand.sqrt() / (p.alpha * amplitude))
}

/// `R1 = lambda w^2 A^4 - (alpha^2 - w^2 - 2 k lambda^2) A^2 + 2 k lambda`.
pub fn deformed_isotonic_residual(p: &ModelParams1D, omega: f64, amplitude: f64) -> f64 {
    let (l, a2, w2) = (p.lambda, amplitude * amplitude, omega * omega);
    l * w2 * a2 * a2 - (p.alpha * p.alpha - w2 - 2.0 * p.k * l * l) * a2 + 2.0 * p.k * l
}

/// Root of `R1 = 0` in `w` for a given amplitude.
pub fn deformed_isotonic_frequency(p: &ModelParams1D, amplitude: f64) -> Result<f64> {
    let (l, a2) = (p.lambda, amplitude * amplitude);
    let denom = a2 * (1.0 + l * a2);
    let w2 = ((p.alpha * p.alpha - 2.0 * p.k * l * l) * a2 - 2.0 * p.k * l) / denom;
    if !(w2 > 0.0 && w2.is_finite()) {
        return Err(domain(format!(
            "R1 = 0 has no real frequency for A = {amplitude}"
        )));
    }
    Ok(w2.sqrt())
}

/// Bounded solution `x = sqrt((w^2 A^4 - 2k) sin^2(w t + phi) + 2k) / (w A)`;
/// returns `(x, v)`. Only a solution when `R1(w, A) = 0`.
pub fn deformed_isotonic_solution(
    p: &ModelParams1D,
    omega: f64,
    amplitude: f64,
    phi: f64,
    t: f64,
) -> Result<(f64, f64)> {
    if omega <= 0.0 || amplitude <= 0.0 {
        return Err(domain("deformed isotonic solution needs w, A > 0"));
    }
    let (s, c) = (omega * t + phi).sin_cos();
    let a = omega * omega * amplitude.powi(4) - 2.0 * p.k;
    let radicand = a * s * s + 2.0 * p.k;
    if radicand <= 0.0 {
        return Err(domain(format!("radicand {radicand} is not positive")));
    }
    let root = radicand.sqrt();
    Ok((root / (omega * amplitude), a * s * c / (amplitude * root)))
}

/// Unbounded branch `x = sqrt((W^2 A^4 + 2k) sinh^2(W t + phi) + 2k) / (W A)`.
///
/// The rate `W` is fixed by the equation of motion:
/// `W^2 = (alpha^2 A^2 - 2k lambda^2 A^2 + 2k lambda) / (A^2 (lambda A^2 - 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedIsotonicUnbounded {
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
    k: f64,
}

impl DeformedIsotonicUnbounded {
    pub fn new(p: &ModelParams1D, amplitude: f64, phase: f64) -> Result<Self> {
        let (l, a2) = (p.lambda, amplitude * amplitude);
        let w2 = (p.alpha * p.alpha * a2 - 2.0 * p.k * l * l * a2 + 2.0 * p.k * l)
            / (a2 * (l * a2 - 1.0));
        if !(w2 > 0.0 && w2.is_finite()) {
            return Err(domain(format!("no unbounded branch for A = {amplitude}")));
        }
        Ok(DeformedIsotonicUnbounded {
            omega: w2.sqrt(),
            amplitude,
            phase,
            k: p.k,
        })
    }

    pub fn state(&self, t: f64) -> (f64, f64) {
        let th = self.omega * t + self.phase;
        let (s, c) = (th.sinh(), th.cosh());
        let a = self.omega * self.omega * self.amplitude.powi(4) + 2.0 * self.k;
        let root = (a * s * s + 2.0 * self.k).sqrt();
        (
            root / (self.omega * self.amplitude),
            a * s * c / (self.amplitude * root),
        )
    }
}

/// Limiting unbounded motion `x = sqrt((A t + B)^2 + C)` with
/// `A^2 = (alpha^2 - 2k lambda^2) / lambda` and `C = 2k / A^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedIsotonicLimit {
    pub rate: f64,
    pub offset: f64,
    pub shift: f64,
}

impl DeformedIsotonicLimit {
    pub fn new(p: &ModelParams1D, offset: f64) -> Result<Self> {
        let a2 = (p.alpha * p.alpha - 2.0 * p.k * p.lambda * p.lambda) / p.lambda;
        if !(a2 > 0.0 && a2.is_finite()) {
            return Err(domain(
                "limit branch needs (alpha^2 - 2k lambda^2) / lambda > 0",
            ));
        }
        Ok(DeformedIsotonicLimit {
            rate: a2.sqrt(),
            offset,
            shift: 2.0 * p.k / a2,
        })
    }

    pub fn state(&self, t: f64) -> (f64, f64) {
        let u = self.rate * t + self.offset;
        let x = (u * u + self.shift).sqrt();
        (x, self.rate * u / x)
    }
}

/// `H = (1 + lambda x^2) p^2 / 2 + alpha^2 x^2 / (2 (1 + lambda x^2)) + k / x^2`.
pub fn hamiltonian_1d(p: &ModelParams1D, x: f64, px: f64) -> Result<f64> {
    let c = metric_factor(p.lambda, x * x)?;
    barrier_guard(p.k, x)?;
    let mut h = 0.5 * c * px * px + 0.5 * p.alpha * p.alpha * x * x / c;
    if p.k > 0.0 {
        h += p.k / (x * x);
    }
    Ok(h)
}

/// `L = (v^2 - alpha^2 x^2) / (2 (1 + lambda x^2)) - k / x^2`.
pub fn lagrangian_1d(p: &ModelParams1D, x: f64, v: f64) -> Result<f64> {
    let c = metric_factor(p.lambda, x * x)?;
    barrier_guard(p.k, x)?;
    let mut l = 0.5 * (v * v - p.alpha * p.alpha * x * x) / c;
    if p.k > 0.0 {
        l -= p.k / (x * x);
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(lambda: f64, alpha: f64, k: f64) -> ModelParams1D {
        ModelParams1D::new(lambda, alpha, k).unwrap()
    }

    #[test]
    fn acceleration_examples() {
        assert_eq!(
            ml_acceleration(&params(0.0, 2.0, 0.0), 0.5, 3.0).unwrap(),
            -2.0
        );
        assert_eq!(
            ml_acceleration(&params(1.0, 1.0, 0.0), 0.0, 5.0).unwrap(),
            0.0
        );
        assert_eq!(
            ml_acceleration(&params(1.0, 1.0, 0.0), 1.0, 1.0).unwrap(),
            0.0
        );
        assert!(ml_acceleration(&params(-1.0, 1.0, 0.0), 1.0, 0.0).is_err());
        assert!(matches!(
            ml_acceleration(&params(0.0, 1.0, 1.0), 0.0, 0.0),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn exact_solution_examples() {
        let (x, v) = ml_exact_solution(&params(0.0, 1.0, 0.0), 1.0, 0.0, PI / 2.0).unwrap();
        assert!((x - 1.0).abs() < 1e-15 && v.abs() < 1e-15);
        assert_eq!(ml_frequency(&params(3.0, 2.0, 0.0), 1.0).unwrap(), 1.0);
        let (x, v) = ml_exact_solution(&params(0.7, 1.0, 0.0), 0.0, 0.3, 2.0).unwrap();
        assert_eq!((x, v), (0.0, 0.0));
        assert!(ml_exact_solution(&params(-1.0, 1.0, 0.0), 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn isotonic_examples() {
        let p = params(0.0, 1.0, 1e-14);
        assert!((isotonic_exact_solution(&p, 1.0, 0.0, PI / 2.0).unwrap() - 1.0).abs() < 1e-12);
        let p = params(0.0, 1.0, 0.5);
        for t in [0.0, 0.4, 2.0, 9.0] {
            assert!((isotonic_exact_solution(&p, 1.0, 0.0, t).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(isotonic_exact_solution(&params(0.0, 1.0, 0.0), 1.0, 0.0, 1.0).is_err());
        assert!(isotonic_exact_solution(&p, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            deformed_isotonic_residual(&params(0.0, 1.3, 0.0), 1.3, 0.8),
            0.0
        );
        let p = params(0.0, 1.0, 1.0);
        assert_eq!(deformed_isotonic_residual(&p, 1.0, 2.0), 0.0);
        assert!((deformed_isotonic_frequency(&p, 2.0).unwrap() - 1.0).abs() < 1e-15);
        let (a, w) = (0.7f64, 1.3f64);
        let p = params(1.0, (w * w * (1.0 + a * a)).sqrt(), 0.0);
        assert!(deformed_isotonic_residual(&p, w, a).abs() < 1e-14);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(
            hamiltonian_1d(&params(0.0, 1.0, 0.0), 1.0, 0.0).unwrap(),
            0.5
        );
        assert_eq!(
            hamiltonian_1d(&params(1.0, 1.0, 0.0), 1.0, 1.0).unwrap(),
            1.25
        );
        assert!(matches!(
            hamiltonian_1d(&params(0.0, 1.0, 1.0), 0.0, 1.0),
            Err(Error::Singularity(_))
        ));
    }
}
