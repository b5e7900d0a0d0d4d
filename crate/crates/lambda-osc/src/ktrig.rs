//! Curvature-dependent trigonometry.
//!
//! `Cos_k`, `Sin_k` and `Tan_k` interpolate between the circular (k > 0),
//! flat (k = 0) and hyperbolic (k < 0) functions. The deformation parameter
//! of the oscillator is `lambda = -k`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Below this value of |k| x^2 the series branch is used.
const SERIES_SWITCH: f64 = 1e-8;
/// |Cos_k| below this is reported as a pole of Tan_k.
pub const POLE_TOLERANCE: f64 = 1e-13;

/// Signed curvature `k`, with `lambda = -k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvature {
    kappa: f64,
}

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "curvature must be finite, got {kappa}"
            )));
        }
        Ok(Curvature { kappa })
    }

    pub fn from_deformation(lambda: f64) -> Result<Self> {
        Self::new(-lambda)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn deformation(&self) -> f64 {
        -self.kappa
    }

    pub fn cos(&self, x: f64) -> f64 {
        cos_k(self.kappa, x)
    }

    pub fn sin(&self, x: f64) -> f64 {
        sin_k(self.kappa, x)
    }

    pub fn tan(&self, x: f64) -> Result<f64> {
        tan_k(self.kappa, x)
    }
}

pub fn cos_k(kappa: f64, x: f64) -> f64 {
    let t = kappa * x * x;
    if t.abs() < SERIES_SWITCH {
        // 1 - t/2 + t^2/24; the next term is below 1e-26.
        1.0 - t / 2.0 + t * t / 24.0
    } else if kappa > 0.0 {
        (kappa.sqrt() * x).cos()
    } else {
        ((-kappa).sqrt() * x).cosh()
    }
}

pub fn sin_k(kappa: f64, x: f64) -> f64 {
    let t = kappa * x * x;
    if t.abs() < SERIES_SWITCH {
        x * (1.0 - t / 6.0 + t * t / 120.0)
    } else if kappa > 0.0 {
        let s = kappa.sqrt();
        (s * x).sin() / s
    } else {
        let s = (-kappa).sqrt();
        (s * x).sinh() / s
    }
}

pub fn tan_k(kappa: f64, x: f64) -> Result<f64> {
    let c = cos_k(kappa, x);
    if c.abs() < POLE_TOLERANCE {
        return Err(Error::Pole { x, cos: c });
    }
    Ok(sin_k(kappa, x) / c)
}

/// Geodesic coordinate `u` with `x = Sin_{-lambda}(u)`, principal branch.
pub fn to_geodesic(lambda: f64, x: f64) -> Result<f64> {
    let kappa = -lambda;
    let t = kappa * x * x;
    if lambda < 0.0 && t >= 1.0 {
        return Err(domain(format!(
            "|x| = {} must be below 1/sqrt(|lambda|) = {}",
            x.abs(),
            1.0 / (-lambda).sqrt()
        )));
    }
    if t.abs() < SERIES_SWITCH {
        // asin and asinh share the series x (1 + t/6 + 3 t^2/40).
        return Ok(x * (1.0 + t / 6.0 + 3.0 * t * t / 40.0));
    }
    if kappa > 0.0 {
        let s = kappa.sqrt();
        Ok((s * x).asin() / s)
    } else {
        let s = (-kappa).sqrt();
        Ok((s * x).asinh() / s)
    }
}

pub fn from_geodesic(lambda: f64, u: f64) -> f64 {
    sin_k(-lambda, u)
}

/// Half-width of the geodesic domain: pi / (2 sqrt(-lambda)) for lambda < 0,
/// infinite otherwise.
pub fn geodesic_half_width(lambda: f64) -> f64 {
    if lambda < 0.0 {
        std::f64::consts::FRAC_PI_2 / (-lambda).sqrt()
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn definition_table() {
        assert_eq!(cos_k(0.0, 7.3), 1.0);
        assert!((cos_k(1.0, PI) + 1.0).abs() < 1e-15);
        assert_eq!(sin_k(0.0, 2.5), 2.5);
        assert!((sin_k(1.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(tan_k(0.0, 3.0).unwrap(), 3.0);
        assert!((tan_k(1.0, PI / 4.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        assert!(matches!(tan_k(1.0, PI / 2.0), Err(Error::Pole { .. })));
        assert!(matches!(tan_k(4.0, PI / 4.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn series_branch_matches_closed_form_at_switch() {
        // Just above and just below the switch the two branches agree.
        for &kappa in &[1e-8, -1e-8] {
            let x = 0.999;
            let t: f64 = kappa * x * x;
            assert!(t.abs() < SERIES_SWITCH);
            let s = kappa.abs().sqrt();
            let closed_sin = if kappa > 0.0 {
                (s * x).sin() / s
            } else {
                (s * x).sinh() / s
            };
            assert!((sin_k(kappa, x) - closed_sin).abs() < 1e-14);
        }
    }

    #[test]
    fn geodesic_edges() {
        assert_eq!(to_geodesic(0.0, 1.2).unwrap(), 1.2);
        assert!(to_geodesic(-1.0, 1.0).is_err());
        assert!(to_geodesic(-1.0, -1.0).is_err());
        assert!((from_geodesic(-1.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(from_geodesic(0.0, 0.7), 0.7);
        assert!((to_geodesic(-1.0, 0.5).unwrap() - 0.5f64.asin()).abs() < 1e-15);
    }

    #[test]
    fn converting_constructor() {
        let c = Curvature::from_deformation(0.25).unwrap();
        assert_eq!(c.kappa(), -0.25);
        assert_eq!(c.deformation(), 0.25);
        assert!(Curvature::new(f64::NAN).is_err());
    }
}
