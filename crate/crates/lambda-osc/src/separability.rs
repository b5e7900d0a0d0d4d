//! Separable coordinate charts of the planar deformed oscillator, their
//! quadratic integrals, and the alternative pictures on the curved plane.
//!
//! Hamiltonians are `H = (p^2 + lambda (q.p)^2) / 2 + alpha^2 V / 2` where the
//! dimensionless template `V` separates as `W1(z_x) / (1 + lambda y^2) + W2(y)`
//! in `(z_x, y)`, symmetrically in `(x, z_y)`, and as `F(r) + G(phi) / r^2` in
//! polar coordinates.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classical::{to_momentum_kind, PhaseState};
use crate::error::{domain, metric_factor, Error, Result};
use crate::ktrig::{cos_k, from_geodesic, sin_k, tan_k, to_geodesic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    /// `(z_x, y)` with `z_x = x / sqrt(1 + lambda y^2)`.
    ZxY,
    /// `(x, z_y)` with `z_y = y / sqrt(1 + lambda x^2)`.
    XZy,
    /// `(r, phi)`, `phi` in `(-pi, pi]`.
    Polar,
    Cartesian,
    /// `(rho, phi)` with `r = Sin_k(rho)`, `k = -lambda`.
    GeodesicPolar,
    /// `(x', y') = (x, y) / sqrt(1 + lambda r^2)`, so that `r' = Tan_k(rho)`.
    Gnomonic,
}

impl ChartKind {
    pub const ALL: [ChartKind; 6] = [
        ChartKind::ZxY,
        ChartKind::XZy,
        ChartKind::Polar,
        ChartKind::Cartesian,
        ChartKind::GeodesicPolar,
        ChartKind::Gnomonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartKind::ZxY => "zx_y",
            ChartKind::XZy => "x_zy",
            ChartKind::Polar => "polar",
            ChartKind::Cartesian => "cartesian",
            ChartKind::GeodesicPolar => "geodesic_polar",
            ChartKind::Gnomonic => "gnomonic",
        }
    }
}

impl std::str::FromStr for ChartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChartKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown chart '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub kind: ChartKind,
    pub lambda: f64,
}

impl Chart {
    pub fn new(kind: ChartKind, lambda: f64) -> Self {
        Chart { kind, lambda }
    }

    pub fn forward(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let l = self.lambda;
        match self.kind {
            ChartKind::ZxY => Ok((x / metric_factor(l, y * y)?.sqrt(), y)),
            ChartKind::XZy => Ok((x, y / metric_factor(l, x * x)?.sqrt())),
            ChartKind::Polar => polar(x, y),
            ChartKind::Cartesian => Ok((x, y)),
            ChartKind::GeodesicPolar => {
                let (r, phi) = polar(x, y)?;
                Ok((to_geodesic(l, r)?, phi))
            }
            ChartKind::Gnomonic => {
                let s = metric_factor(l, x * x + y * y)?.sqrt();
                Ok((x / s, y / s))
            }
        }
    }

    pub fn inverse(&self, u1: f64, u2: f64) -> Result<(f64, f64)> {
        let l = self.lambda;
        match self.kind {
            ChartKind::ZxY => Ok((u1 * metric_factor(l, u2 * u2)?.sqrt(), u2)),
            ChartKind::XZy => Ok((u1, u2 * metric_factor(l, u1 * u1)?.sqrt())),
            ChartKind::Polar => {
                if u1 <= 0.0 {
                    return Err(domain(format!("polar radius must be positive, got {u1}")));
                }
                Ok((u1 * u2.cos(), u1 * u2.sin()))
            }
            ChartKind::Cartesian => Ok((u1, u2)),
            ChartKind::GeodesicPolar => {
                if u1 <= 0.0 {
                    return Err(domain(format!(
                        "geodesic radius must be positive, got {u1}"
                    )));
                }
                if l < 0.0 && u1 >= crate::ktrig::geodesic_half_width(l) {
                    return Err(domain("geodesic radius beyond the chart"));
                }
                let r = from_geodesic(l, u1);
                Ok((r * u2.cos(), r * u2.sin()))
            }
            ChartKind::Gnomonic => {
                // r = r' / sqrt(1 - lambda r'^2)
                let s = metric_factor(-l, u1 * u1 + u2 * u2)?.sqrt();
                Ok((u1 / s, u2 / s))
            }
        }
    }
}

fn polar(x: f64, y: f64) -> Result<(f64, f64)> {
    if x == 0.0 && y == 0.0 {
        return Err(Error::Origin);
    }
    Ok((x.hypot(y), y.atan2(x)))
}

type Profile = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// Dimensionless potential template in a separable chart: `W1`, `W2` for the
/// `(z_x, y)` and `(x, z_y)` charts, `F`, `G` for the polar chart.
#[derive(Clone)]
pub struct SeparablePotential {
    pub chart: Chart,
    w1: Arc<Profile>,
    w2: Arc<Profile>,
}

impl fmt::Debug for SeparablePotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeparablePotential")
            .field("chart", &self.chart)
            .finish_non_exhaustive()
    }
}

fn inverse_square(c: f64, u: f64, what: &'static str) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    if u == 0.0 {
        return Err(Error::Singularity(format!("{what} = 0 with a barrier")));
    }
    Ok(c / (u * u))
}

impl SeparablePotential {
    pub fn new(
        chart: Chart,
        w1: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
        w2: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        match chart.kind {
            ChartKind::ZxY | ChartKind::XZy | ChartKind::Polar => Ok(SeparablePotential {
                chart,
                w1: Arc::new(w1),
                w2: Arc::new(w2),
            }),
            other => Err(Error::UnsupportedChart(other.name())),
        }
    }

    /// Template `r^2 / (1 + lambda r^2)` of the oscillator.
    pub fn oscillator(chart: Chart) -> Result<Self> {
        Self::smorodinsky_winternitz(chart, 1.0, 0.0, 0.0)
    }

    /// Oscillator plus `2 k2 / (alpha^2 x^2) + 2 k3 / (alpha^2 y^2)`, so that
    /// `alpha^2 V / 2` is the Smorodinsky-Winternitz potential.
    pub fn smorodinsky_winternitz(chart: Chart, alpha: f64, k2: f64, k3: f64) -> Result<Self> {
        let l = chart.lambda;
        if (k2 > 0.0 || k3 > 0.0) && alpha <= 0.0 {
            return Err(Error::InvalidArgument(
                "barrier templates need alpha > 0".into(),
            ));
        }
        let (c2, c3) = if k2 > 0.0 || k3 > 0.0 {
            (2.0 * k2 / (alpha * alpha), 2.0 * k3 / (alpha * alpha))
        } else {
            (0.0, 0.0)
        };
        let osc = move |u: f64| Ok(u * u / metric_factor(l, u * u)?);
        match chart.kind {
            ChartKind::ZxY => Self::new(
                chart,
                move |z| Ok(osc(z)? + inverse_square(c2, z, "z_x")?),
                move |y| Ok(osc(y)? + inverse_square(c3, y, "y")?),
            ),
            ChartKind::XZy => Self::new(
                chart,
                move |x| Ok(osc(x)? + inverse_square(c2, x, "x")?),
                move |z| Ok(osc(z)? + inverse_square(c3, z, "z_y")?),
            ),
            ChartKind::Polar => Self::new(chart, osc, move |phi: f64| {
                Ok(inverse_square(c2, phi.cos(), "cos(phi)")?
                    + inverse_square(c3, phi.sin(), "sin(phi)")?)
            }),
            other => Err(Error::UnsupportedChart(other.name())),
        }
    }

    pub fn w1(&self, u: f64) -> Result<f64> {
        (self.w1)(u)
    }

    pub fn w2(&self, u: f64) -> Result<f64> {
        (self.w2)(u)
    }

    /// The template assembled from `W1`, `W2` at a Cartesian point.
    pub fn template(&self, x: f64, y: f64) -> Result<f64> {
        let l = self.chart.lambda;
        let (u1, u2) = self.chart.forward(x, y)?;
        match self.chart.kind {
            ChartKind::ZxY => Ok(self.w1(u1)? / metric_factor(l, y * y)? + self.w2(u2)?),
            ChartKind::XZy => Ok(self.w1(u1)? + self.w2(u2)? / metric_factor(l, x * x)?),
            ChartKind::Polar => Ok(self.w1(u1)? + self.w2(u2)? / (u1 * u1)),
            other => Err(Error::UnsupportedChart(other.name())),
        }
    }
}

/// The two quadratic integrals of the chart; `H = (I1 + I2) / 2`.
pub fn chart_integrals(sp: &SeparablePotential, s: &PhaseState, alpha: f64) -> Result<(f64, f64)> {
    let l = sp.chart.lambda;
    let s = to_momentum_kind(l, s)?;
    let [x, y, px, py] = [s.q[0], s.q[1], s.v_or_p[0], s.v_or_p[1]];
    let c = metric_factor(l, x * x + y * y)?;
    let j = x * py - y * px;
    let a2 = alpha * alpha;
    let (u1, u2) = sp.chart.forward(x, y)?;
    match sp.chart.kind {
        ChartKind::ZxY => {
            let w1 = sp.w1(u1)?;
            let i1 = c * px * px + a2 * w1;
            let i2 =
                c * py * py - l * j * j + a2 * (sp.w2(u2)? - l * y * y * w1 / (1.0 + l * y * y));
            Ok((i1, i2))
        }
        ChartKind::XZy => {
            let w2 = sp.w2(u2)?;
            let i1 =
                c * px * px - l * j * j + a2 * (sp.w1(u1)? - l * x * x * w2 / (1.0 + l * x * x));
            let i2 = c * py * py + a2 * w2;
            Ok((i1, i2))
        }
        ChartKind::Polar => {
            let (r, phi) = (u1, u2);
            let pr = (x * px + y * py) / r;
            let (f, g) = (sp.w1(r)?, sp.w2(phi)?);
            let m = (1.0 - r * r) / (r * r);
            let i1 = c * pr * pr + m * j * j + a2 * (f + m * g);
            let i2 = j * j + a2 * g;
            Ok((i1, i2))
        }
        other => Err(Error::UnsupportedChart(other.name())),
    }
}

/// `H = H1 + H2 - lambda H3` with `H3 = J^2 / 2`.
pub fn decompose_oscillator(lambda: f64, alpha: f64, s: &PhaseState) -> Result<(f64, f64, f64)> {
    let s = to_momentum_kind(lambda, s)?;
    let [x, y, px, py] = [s.q[0], s.q[1], s.v_or_p[0], s.v_or_p[1]];
    let c = metric_factor(lambda, x * x + y * y)?;
    let a2 = alpha * alpha;
    let j = x * py - y * px;
    Ok((
        0.5 * (c * px * px + a2 * x * x / c),
        0.5 * (c * py * py + a2 * y * y / c),
        0.5 * j * j,
    ))
}

/// `H = H_px + H_py - lambda H_J` for the deformed Smorodinsky-Winternitz system.
pub fn decompose_sw(
    lambda: f64,
    alpha: f64,
    k2: f64,
    k3: f64,
    s: &PhaseState,
) -> Result<(f64, f64, f64)> {
    let (h1, h2, h3) = decompose_oscillator(lambda, alpha, s)?;
    let (x, y) = (s.q[0], s.q[1]);
    Ok((
        h1 + inverse_square(k2, x, "x")? * (1.0 + lambda * y * y),
        h2 + inverse_square(k3, y, "y")? * (1.0 + lambda * x * x),
        h3 + inverse_square(k2, x, "x")? * y * y + inverse_square(k3, y, "y")? * x * x,
    ))
}

/// The oscillator potential `alpha^2 r^2 / (2 (1 + lambda r^2))` written in the
/// `(z_x, y)`, `(x, z_y)` and polar charts.
pub fn oscillator_potential_three_forms(
    lambda: f64,
    alpha: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64, f64)> {
    sw_potential_three_forms(lambda, alpha, 0.0, 0.0, x, y)
}

/// The deformed Smorodinsky-Winternitz potential written in the three charts.
pub fn sw_potential_three_forms(
    lambda: f64,
    alpha: f64,
    k2: f64,
    k3: f64,
    x: f64,
    y: f64,
) -> Result<(f64, f64, f64)> {
    let l = lambda;
    let h = 0.5 * alpha * alpha;
    let (zx, _) = Chart::new(ChartKind::ZxY, l).forward(x, y)?;
    let (_, zy) = Chart::new(ChartKind::XZy, l).forward(x, y)?;
    let (r, phi) = polar(x, y)?;
    let cy = 1.0 + l * y * y;
    let cx = 1.0 + l * x * x;
    let v_zx = (h * zx * zx / metric_factor(l, zx * zx)? + inverse_square(k2, zx, "z_x")?) / cy
        + h * y * y / cy
        + inverse_square(k3, y, "y")?;
    let v_zy = h * x * x / cx
        + inverse_square(k2, x, "x")?
        + (h * zy * zy / metric_factor(l, zy * zy)? + inverse_square(k3, zy, "z_y")?) / cx;
    let v_polar = h * r * r / metric_factor(l, r * r)?
        + (inverse_square(k2, phi.cos(), "cos(phi)")? + inverse_square(k3, phi.sin(), "sin(phi)")?)
            / (r * r);
    Ok((v_zx, v_zy, v_polar))
}

/// Higgs-type Lagrangian in Cartesian gnomonic coordinates,
/// `((v^2 + k J^2) / (1 + k r'^2)^2 - alpha^2 r'^2) / 2`.
pub fn higgs_lagrangian(kappa: f64, x: f64, y: f64, vx: f64, vy: f64, alpha: f64) -> Result<f64> {
    let r2 = x * x + y * y;
    let c = metric_factor(kappa, r2)?;
    let j = x * vy - y * vx;
    Ok(0.5 * (vx * vx + vy * vy + kappa * j * j) / (c * c) - 0.5 * alpha * alpha * r2)
}

/// Oscillator on the curved plane in geodesic polar coordinates,
/// `(v_rho^2 + Sin^2(rho) v_phi^2) / 2 - alpha^2 Tan^2(rho) / 2`.
pub fn geodesic_polar_lagrangian(
    kappa: f64,
    rho: f64,
    v_rho: f64,
    v_phi: f64,
    alpha: f64,
) -> Result<f64> {
    let s = sin_k(kappa, rho);
    let t = tan_k(kappa, rho)?;
    Ok(0.5 * (v_rho * v_rho + s * s * v_phi * v_phi) - 0.5 * alpha * alpha * t * t)
}

/// `L_lambda` in polar coordinates `(r, phi)`.
pub fn lambda_polar_lagrangian(
    lambda: f64,
    r: f64,
    v_r: f64,
    v_phi: f64,
    alpha: f64,
) -> Result<f64> {
    let c = metric_factor(lambda, r * r)?;
    Ok(0.5 * (v_r * v_r / c + r * r * v_phi * v_phi) - 0.5 * alpha * alpha * r * r / c)
}

/// Cartesian gnomonic data `(x', y', vx', vy')` of a geodesic polar point, via `r' = Tan_k(rho)`.
pub fn geodesic_to_gnomonic(
    kappa: f64,
    rho: f64,
    phi: f64,
    v_rho: f64,
    v_phi: f64,
) -> Result<[f64; 4]> {
    let rp = tan_k(kappa, rho)?;
    let c = cos_k(kappa, rho);
    let v_rp = v_rho / (c * c);
    Ok(cartesian(rp, phi, v_rp, v_phi))
}

/// Polar data `(r, v_r)` of the deformed picture, via `r = Sin_k(rho)`, `k = -lambda`.
pub fn geodesic_to_lambda_polar(kappa: f64, rho: f64, v_rho: f64) -> (f64, f64) {
    (sin_k(kappa, rho), cos_k(kappa, rho) * v_rho)
}

fn cartesian(r: f64, phi: f64, v_r: f64, v_phi: f64) -> [f64; 4] {
    let (s, c) = phi.sin_cos();
    [
        r * c,
        r * s,
        v_r * c - r * s * v_phi,
        v_r * s + r * c * v_phi,
    ]
}

/// Cartesian lift of polar data.
pub fn polar_to_cartesian(r: f64, phi: f64, v_r: f64, v_phi: f64) -> [f64; 4] {
    cartesian(r, phi, v_r, v_phi)
}
