//! The planar quantum deformed oscillator `H = H1 + H2 - lambda J^2`.
//!
//! With `g = m beta^2 + lambda hbar beta` the operators are
//! `H1 = -hbar^2/(2m) ((1 + lambda r^2) d_xx + lambda x d_x) + g x^2 / (2 (1 + lambda r^2))`,
//! `H2` likewise in `y`, and the purely kinetic
//! `J^2 = -hbar^2/(2m) (x^2 d_yy + y^2 d_xx - 2 x y d_xy - x d_x - y d_y)`.
//!
//! In the chart `(z, y)`, `z = x / sqrt(1 + Lambda y^2)` (dimensionless units
//! of [`QuantumParams`]) the eigenfunctions factor as `Z_m(z) Y_n(y)`: `Z_m`
//! is the one-dimensional eigenfunction and `Y = q(y) (1 + Lambda y^2)^(-G / (2 Lambda))`
//! with `q` a deformed Hermite polynomial. The `Y` equation reads
//! `((1 + Lambda y^2) Y')' - G^2 y^2 / (1 + Lambda y^2) Y + 2 nu Y = 0`,
//! already in Sturm-Liouville form with unit weight, so modes sharing `G`
//! are orthogonal in `dy`. Since `dmu = dz / sqrt(1 + Lambda z^2) dy` in this
//! chart, a product of a dmu-normalized `Z` and a dy-normalized `Y` is
//! normalized in the plane.

use std::io::Write;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::dynamics::fmt_f64;
use crate::error::{metric_factor, Error, Result};
use crate::grid::{FdConfig, FdOrder, Grid1D, GridFn};
use crate::oracle::integrate_dx;
use crate::quantum1d::{
    energy_series, envelope, max_bound_index, LadderState, Parity, QuantumParams,
};

/// `G = sqrt(1 + (1 - 2 mu) Lambda)`, positive root.
pub fn g_factor(big_lambda: f64, mu: f64) -> Result<f64> {
    let r = 1.0 + (1.0 - 2.0 * mu) * big_lambda;
    if r < 0.0 {
        return Err(Error::ImaginaryG(r));
    }
    Ok(r.sqrt())
}

/// `G = 1 - Lambda m` at the quantized `mu_m`.
pub fn g_quantized(big_lambda: f64, m: u64) -> Result<f64> {
    let g = 1.0 - big_lambda * m as f64;
    if g <= 0.0 {
        return Err(Error::NotBoundState {
            n: m,
            max: (1.0 / big_lambda).ceil() as u64 - 1,
        });
    }
    Ok(g)
}

/// `nu` from `2 nu = G (2n + 1) - n (n + 1) Lambda`.
pub fn nu_quantized(big_lambda: f64, g: f64, n: u64) -> f64 {
    let nf = n as f64;
    0.5 * (g * (2.0 * nf + 1.0) - nf * (nf + 1.0) * big_lambda)
}

/// `e_{m,n} = (m + n + 1)(1 - Lambda (m + n) / 2)`.
///
/// Admissible when `G = 1 - Lambda m` is positive and `N = m + n` passes the
/// one-dimensional bound `N <= 2 / Lambda`.
pub fn energy_2d(big_lambda: f64, m: u64, n: u64) -> Result<f64> {
    if big_lambda > 0.0 {
        g_quantized(big_lambda, m)?;
        let total = m + n;
        if let Some(max) = max_bound_index(1.0, big_lambda) {
            if total > max {
                return Err(Error::NotBoundState { n: total, max });
            }
        }
    }
    let nn = (m + n) as f64;
    Ok((nn + 1.0) * (1.0 - 0.5 * big_lambda * nn))
}

/// `mu_m + nu_n` assembled from the separated problems.
pub fn energy_2d_separated(big_lambda: f64, m: u64, n: u64) -> Result<f64> {
    let mu = energy_series(big_lambda, m)?;
    let g = if big_lambda > 0.0 {
        g_quantized(big_lambda, m)?
    } else {
        1.0 - big_lambda * m as f64
    };
    Ok(mu + nu_quantized(big_lambda, g, n))
}

/// Polynomial solution of `(1 + Lambda y^2) q'' + 2 (Lambda - G) y q' + (2 nu - G) q = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformedHermite {
    pub degree: usize,
    pub lambda: f64,
    pub g: f64,
    pub coefficients: Vec<f64>,
    pub parity: Parity,
}

/// Relative size below which a recursion factor counts as vanishing.
const DEGENERACY_TOLERANCE: f64 = 1e-13;

/// Coefficients from `c_{k+2} = -c_k (Lambda k (k + 1) - G (2k + 1) + 2 nu) / ((k + 2)(k + 1))`
/// at the quantized `nu`, with the lowest coefficient set to one.
pub fn deformed_hermite(big_lambda: f64, g: f64, n: usize) -> Result<DeformedHermite> {
    let two_nu = 2.0 * nu_quantized(big_lambda, g, n as u64);
    let mut c = vec![0.0; n + 1];
    let start = n % 2;
    c[start] = 1.0;
    let mut k = start;
    while k + 2 <= n {
        let kf = k as f64;
        let b = big_lambda * kf * (kf + 1.0) - g * (2.0 * kf + 1.0) + two_nu;
        let scale =
            (big_lambda * kf * (kf + 1.0)).abs() + (g * (2.0 * kf + 1.0)).abs() + two_nu.abs();
        if b.abs() <= DEGENERACY_TOLERANCE * scale.max(1.0) {
            return Err(Error::DegenerateRecursion {
                degree: k,
                target: n,
            });
        }
        c[k + 2] = -c[k] * b / ((kf + 2.0) * (kf + 1.0));
        k += 2;
    }
    Ok(DeformedHermite {
        degree: n,
        lambda: big_lambda,
        g,
        coefficients: c,
        parity: Parity::of(n),
    })
}

impl DeformedHermite {
    pub fn nu(&self) -> f64 {
        nu_quantized(self.lambda, self.g, self.degree as u64)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c)
    }

    pub fn derivative(&self, y: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, c)| acc * y + j as f64 * c)
    }

    pub fn second_derivative(&self, y: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (j, c)| acc * y + (j * (j - 1)) as f64 * c)
    }

    /// Left-hand side of the deformed Hermite equation.
    pub fn ode_residual(&self, y: f64) -> f64 {
        let l = self.lambda;
        (1.0 + l * y * y) * self.second_derivative(y)
            + 2.0 * (l - self.g) * y * self.derivative(y)
            + (2.0 * self.nu() - self.g) * self.eval(y)
    }
}

/// Transverse mode `Y_n = q_n(y) (1 + Lambda y^2)^(-G / (2 Lambda))`, normalized in `dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct YMode {
    pub q: DeformedHermite,
    pub norm: f64,
}

impl YMode {
    pub fn new(big_lambda: f64, g: f64, n: usize) -> Result<Self> {
        if g <= 0.0 {
            return Err(Error::ImaginaryG(g));
        }
        let q = deformed_hermite(big_lambda, g, n)?;
        let raw = |y: f64| q.eval(y) * envelope(g, big_lambda, y).unwrap_or(0.0);
        let mass = integrate_dx(big_lambda, |y| raw(y).powi(2))?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::NotNormalizable {
                beta: g,
                lambda: big_lambda,
            });
        }
        Ok(YMode {
            q,
            norm: mass.sqrt(),
        })
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        Ok(self.q.eval(y) * envelope(self.q.g, self.q.lambda, y)? / self.norm)
    }
}

/// Weight of the Sturm-Liouville form of the `Y` equation.
pub fn y_mode_weight(_big_lambda: f64, _y: f64) -> f64 {
    1.0
}

/// `Psi_{m,n}(x, y) = Z_m(z) Y_n(y)` in physical units, normalized against dmu.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction2D {
    pub params: QuantumParams,
    pub m: u64,
    pub n: u64,
    pub z_mode: LadderState,
    pub y_mode: YMode,
}

impl Wavefunction2D {
    pub fn new(qp: &QuantumParams, m: u64, n: u64) -> Result<Self> {
        let l = qp.big_lambda();
        energy_2d(l, m, n)?;
        let g = 1.0 - l * m as f64;
        Ok(Wavefunction2D {
            params: *qp,
            m,
            n,
            z_mode: LadderState::new(1.0, l, m)?,
            y_mode: YMode::new(l, g, n as usize)?,
        })
    }

    pub fn energy(&self) -> f64 {
        let l = self.params.big_lambda();
        self.params.energy_scale()
            * ((self.m + self.n + 1) as f64)
            * (1.0 - 0.5 * l * (self.m + self.n) as f64)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let s = self.params.length_scale();
        let (xt, yt) = (x / s, y / s);
        let l = self.params.big_lambda();
        let z = xt / metric_factor(l, yt * yt)?.sqrt();
        Ok(self.z_mode.eval(z)? * self.y_mode.eval(yt)? / s)
    }

    pub fn sample(&self, grid: &Grid2D) -> Result<GridFn2> {
        grid.try_sample(|x, y| self.eval(x, y))
    }
}

pub fn wavefunction_2d(qp: &QuantumParams, m: u64, n: u64, x: f64, y: f64) -> Result<f64> {
    Wavefunction2D::new(qp, m, n)?.eval(x, y)
}

/// Tensor grid, values stored row-major with `y` fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn square(half: f64, n: usize) -> Result<Self> {
        let g = Grid1D::symmetric(half, n)?;
        Ok(Grid2D { x: g, y: g })
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> GridFn2 {
        let mut values = Vec::with_capacity(self.x.n * self.y.n);
        for i in 0..self.x.n {
            for j in 0..self.y.n {
                values.push(f(self.x.x(i), self.y.x(j)));
            }
        }
        GridFn2 {
            grid: *self,
            values,
            valid_x: 0..self.x.n,
            valid_y: 0..self.y.n,
        }
    }

    pub fn try_sample(&self, f: impl Fn(f64, f64) -> Result<f64>) -> Result<GridFn2> {
        let mut values = Vec::with_capacity(self.x.n * self.y.n);
        for i in 0..self.x.n {
            for j in 0..self.y.n {
                values.push(f(self.x.x(i), self.y.x(j))?);
            }
        }
        Ok(GridFn2 {
            grid: *self,
            values,
            valid_x: 0..self.x.n,
            valid_y: 0..self.y.n,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFn2 {
    pub grid: Grid2D,
    pub values: Vec<f64>,
    pub valid_x: Range<usize>,
    pub valid_y: Range<usize>,
}

impl GridFn2 {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.y.n + j]
    }

    fn blank(&self, valid_x: Range<usize>, valid_y: Range<usize>) -> GridFn2 {
        GridFn2 {
            grid: self.grid,
            values: vec![f64::NAN; self.values.len()],
            valid_x,
            valid_y,
        }
    }

    fn line_x(&self, j: usize) -> GridFn {
        let v = (0..self.grid.x.n).map(|i| self.at(i, j)).collect();
        GridFn {
            grid: self.grid.x,
            values: v,
            valid: self.valid_x.clone(),
        }
    }

    fn line_y(&self, i: usize) -> GridFn {
        let n = self.grid.y.n;
        GridFn {
            grid: self.grid.y,
            values: self.values[i * n..(i + 1) * n].to_vec(),
            valid: self.valid_y.clone(),
        }
    }

    /// Derivative along `x` (`axis = 0`) or `y` (`axis = 1`) of order `which` (1 or 2).
    fn derivative(&self, axis: usize, which: usize, order: FdOrder) -> GridFn2 {
        let op = |f: &GridFn| {
            if which == 1 {
                crate::grid::d1(f, order)
            } else {
                crate::grid::d2(f, order)
            }
        };
        let k = order.half_width();
        let ny = self.grid.y.n;
        if axis == 0 {
            let vx = self.valid_x.start + k..self.valid_x.end.saturating_sub(k);
            let mut out = self.blank(vx, self.valid_y.clone());
            for j in self.valid_y.clone() {
                let d = op(&self.line_x(j));
                for i in out.valid_x.clone() {
                    out.values[i * ny + j] = d.values[i];
                }
            }
            out
        } else {
            let vy = self.valid_y.start + k..self.valid_y.end.saturating_sub(k);
            let mut out = self.blank(self.valid_x.clone(), vy);
            for i in self.valid_x.clone() {
                let d = op(&self.line_y(i));
                for j in out.valid_y.clone() {
                    out.values[i * ny + j] = d.values[j];
                }
            }
            out
        }
    }

    fn points(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let ny = self.grid.y.n;
        self.valid_x.clone().flat_map(move |i| {
            self.valid_y
                .clone()
                .map(move |j| (i * ny + j, self.grid.x.x(i), self.grid.y.x(j)))
        })
    }

    /// Restriction to a common valid window.
    fn window(&self, vx: &Range<usize>, vy: &Range<usize>) -> GridFn2 {
        let mut out = self.blank(vx.clone(), vy.clone());
        let ny = self.grid.y.n;
        for i in vx.clone() {
            for j in vy.clone() {
                out.values[i * ny + j] = self.values[i * ny + j];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.points()
            .fold(0.0, |m, (k, _, _)| m.max(self.values[k].abs()))
    }

    /// Discrete norm against `dmu = dx dy / sqrt(1 + lambda r^2)` over the valid window.
    pub fn norm_mu(&self, lambda: f64) -> f64 {
        let s: f64 = self
            .points()
            .map(|(k, x, y)| self.values[k].powi(2) / (1.0 + lambda * (x * x + y * y)).sqrt())
            .sum();
        (s * self.grid.x.h() * self.grid.y.h()).sqrt()
    }

    pub fn sub(&self, other: &GridFn2) -> GridFn2 {
        let vx =
            self.valid_x.start.max(other.valid_x.start)..self.valid_x.end.min(other.valid_x.end);
        let vy =
            self.valid_y.start.max(other.valid_y.start)..self.valid_y.end.min(other.valid_y.end);
        let mut out = self.blank(vx, vy);
        let ny = self.grid.y.n;
        for i in out.valid_x.clone() {
            for j in out.valid_y.clone() {
                let k = i * ny + j;
                out.values[k] = self.values[k] - other.values[k];
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> GridFn2 {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }
}

struct Derivs {
    xx: GridFn2,
    yy: GridFn2,
    x: GridFn2,
    y: GridFn2,
    xy: GridFn2,
    vx: Range<usize>,
    vy: Range<usize>,
}

fn check_grid(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<()> {
    let gx = psi.grid.x;
    let gy = psi.grid.y;
    let rx = gx.a.abs().max(gx.b.abs());
    let ry = gy.a.abs().max(gy.b.abs());
    metric_factor(qp.lambda, rx * rx + ry * ry)?;
    let scale = psi.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    let mut worst = 0.0f64;
    for j in psi.valid_y.clone() {
        let line = psi.line_x(j);
        if let Err(Error::GridTooCoarse { estimate, .. }) = fd.check_resolution(&line) {
            worst = worst.max(estimate * line.max_abs() / scale);
        }
    }
    for i in psi.valid_x.clone() {
        let line = psi.line_y(i);
        if let Err(Error::GridTooCoarse { estimate, .. }) = fd.check_resolution(&line) {
            worst = worst.max(estimate * line.max_abs() / scale);
        }
    }
    if worst > fd.coarse_tolerance {
        return Err(Error::GridTooCoarse {
            estimate: worst,
            tolerance: fd.coarse_tolerance,
        });
    }
    Ok(())
}

fn derivs(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<Derivs> {
    check_grid(qp, psi, fd)?;
    let o = fd.order;
    let k = o.half_width();
    let xx = psi.derivative(0, 2, o);
    let yy = psi.derivative(1, 2, o);
    let x = psi.derivative(0, 1, o);
    let y = psi.derivative(1, 1, o);
    let xy = x.derivative(1, 1, o);
    let vx = psi.valid_x.start + k..psi.valid_x.end.saturating_sub(k);
    let vy = psi.valid_y.start + k..psi.valid_y.end.saturating_sub(k);
    Ok(Derivs {
        xx,
        yy,
        x,
        y,
        xy,
        vx,
        vy,
    })
}

fn assemble(
    qp: &QuantumParams,
    psi: &GridFn2,
    fd: &FdConfig,
    f: impl Fn(&Derivs, usize, f64, f64, f64) -> f64,
) -> Result<GridFn2> {
    let d = derivs(qp, psi, fd)?;
    let mut out = psi.window(&d.vx, &d.vy);
    let ny = psi.grid.y.n;
    for i in d.vx.clone() {
        for j in d.vy.clone() {
            let kk = i * ny + j;
            out.values[kk] = f(&d, kk, psi.grid.x.x(i), psi.grid.y.x(j), psi.values[kk]);
        }
    }
    Ok(out)
}

fn coefficients(qp: &QuantumParams) -> (f64, f64, f64) {
    let k = qp.hbar * qp.hbar / (2.0 * qp.mass);
    let g = qp.mass * qp.beta * qp.beta + qp.lambda * qp.hbar * qp.beta;
    (qp.lambda, k, g)
}

pub fn apply_h1(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
    let (l, k, g) = coefficients(qp);
    assemble(qp, psi, fd, |d, i, x, y, v| {
        let c = 1.0 + l * (x * x + y * y);
        -k * (c * d.xx.values[i] + l * x * d.x.values[i]) + 0.5 * g * x * x / c * v
    })
}

pub fn apply_h2(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
    let (l, k, g) = coefficients(qp);
    assemble(qp, psi, fd, |d, i, x, y, v| {
        let c = 1.0 + l * (x * x + y * y);
        -k * (c * d.yy.values[i] + l * y * d.y.values[i]) + 0.5 * g * y * y / c * v
    })
}

pub fn apply_j2(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
    let (_, k, _) = coefficients(qp);
    assemble(qp, psi, fd, |d, i, x, y, _| {
        -k * (x * x * d.yy.values[i] + y * y * d.xx.values[i]
            - 2.0 * x * y * d.xy.values[i]
            - x * d.x.values[i]
            - y * d.y.values[i])
    })
}

/// `hbar (x d_y - y d_x) psi`; the angular momentum operator is `-i` times this.
pub fn apply_rotation(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
    let h = qp.hbar;
    assemble(qp, psi, fd, |d, i, x, y, _| {
        h * (x * d.y.values[i] - y * d.x.values[i])
    })
}

/// The full operator assembled directly from its second-order form.
pub fn apply_hamiltonian_2d(qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
    let (l, k, g) = coefficients(qp);
    assemble(qp, psi, fd, |d, i, x, y, v| {
        let r2 = x * x + y * y;
        let c = 1.0 + l * r2;
        let (xx, yy, dx, dy, xy) = (
            d.xx.values[i],
            d.yy.values[i],
            d.x.values[i],
            d.y.values[i],
            d.xy.values[i],
        );
        -k * (c * (xx + yy) + l * (x * dx + y * dy))
            + l * k * (x * x * yy + y * y * xx - 2.0 * x * y * xy - x * dx - y * dy)
            + 0.5 * g * r2 / c * v
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    H1,
    H2,
    J2,
    /// `H1 - lambda J^2`
    H1MinusLJ2,
    /// `H2 - lambda J^2`
    H2MinusLJ2,
    /// `H1 + H2`
    H1PlusH2,
    /// Real generator `hbar (x d_y - y d_x)` of rotations.
    J,
    H,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::H1 => "H1",
            Observable::H2 => "H2",
            Observable::J2 => "J2",
            Observable::H1MinusLJ2 => "H1-lambda*J2",
            Observable::H2MinusLJ2 => "H2-lambda*J2",
            Observable::H1PlusH2 => "H1+H2",
            Observable::J => "J",
            Observable::H => "H",
        }
    }

    pub fn apply(self, qp: &QuantumParams, psi: &GridFn2, fd: &FdConfig) -> Result<GridFn2> {
        let l = qp.lambda;
        match self {
            Observable::H1 => apply_h1(qp, psi, fd),
            Observable::H2 => apply_h2(qp, psi, fd),
            Observable::J2 => apply_j2(qp, psi, fd),
            Observable::H1MinusLJ2 => {
                Ok(apply_h1(qp, psi, fd)?.sub(&apply_j2(qp, psi, fd)?.scale(l)))
            }
            Observable::H2MinusLJ2 => {
                Ok(apply_h2(qp, psi, fd)?.sub(&apply_j2(qp, psi, fd)?.scale(l)))
            }
            Observable::H1PlusH2 => {
                Ok(apply_h1(qp, psi, fd)?.sub(&apply_h2(qp, psi, fd)?.scale(-1.0)))
            }
            Observable::J => apply_rotation(qp, psi, fd),
            Observable::H => apply_hamiltonian_2d(qp, psi, fd),
        }
    }
}

/// The three complete sets of commuting observables.
pub fn compatible_sets() -> [(Observable, Observable); 3] {
    [
        (Observable::H1, Observable::H2MinusLJ2),
        (Observable::H1MinusLJ2, Observable::H2),
        (Observable::H1PlusH2, Observable::J),
    ]
}

/// `||[a, b] psi|| / ||psi||` over the window where both compositions are valid.
pub fn commutator_residual(
    qp: &QuantumParams,
    a: Observable,
    b: Observable,
    psi: &GridFn2,
    fd: &FdConfig,
) -> Result<f64> {
    let ab = a.apply(qp, &b.apply(qp, psi, fd)?, fd)?;
    let ba = b.apply(qp, &a.apply(qp, psi, fd)?, fd)?;
    let diff = ab.sub(&ba);
    let base = psi.window(&diff.valid_x, &diff.valid_y);
    Ok(diff.norm_mu(qp.lambda) / base.norm_mu(qp.lambda))
}

/// `||H psi - E psi|| / ||psi||`.
pub fn eigen_residual_2d(
    qp: &QuantumParams,
    psi: &GridFn2,
    energy: f64,
    fd: &FdConfig,
) -> Result<f64> {
    let h = apply_hamiltonian_2d(qp, psi, fd)?;
    let diff = h.sub(&psi.scale(energy));
    let base = psi.window(&diff.valid_x, &diff.valid_y);
    Ok(diff.norm_mu(qp.lambda) / base.norm_mu(qp.lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level2D {
    pub m: u64,
    pub n: u64,
    pub energy: f64,
}

/// Admissible levels with `m + n <= max_total`, grouped by `N = m + n`.
pub fn spectrum_2d(big_lambda: f64, max_total: u64) -> Vec<Level2D> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        for m in 0..=total {
            if let Ok(e) = energy_2d(big_lambda, m, total - m) {
                out.push(Level2D {
                    m,
                    n: total - m,
                    energy: e,
                });
            }
        }
    }
    out
}

pub fn write_spectrum_2d_csv<W: Write>(
    levels: &[Level2D],
    provenance: &str,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "m,n,N,energy,provenance")?;
    for l in levels {
        writeln!(
            w,
            "{},{},{},{},{provenance}",
            l.m,
            l.n,
            l.m + l.n,
            fmt_f64(l.energy)
        )?;
    }
    Ok(())
}

/// Rows `degree,c0,...,cN`, padded with zeros to the largest degree.
pub fn write_polynomials_csv<W: Write>(polys: &[DeformedHermite], mut w: W) -> std::io::Result<()> {
    let width = polys.iter().map(|p| p.degree).max().unwrap_or(0);
    let header: Vec<String> = (0..=width).map(|j| format!("c{j}")).collect();
    writeln!(w, "degree,{}", header.join(","))?;
    for p in polys {
        let cells: Vec<String> = (0..=width)
            .map(|j| fmt_f64(p.coefficients.get(j).copied().unwrap_or(0.0)))
            .collect();
        writeln!(w, "{},{}", p.degree, cells.join(","))?;
    }
    Ok(())
}
