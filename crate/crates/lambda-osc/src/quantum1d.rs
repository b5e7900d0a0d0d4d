//! The one-dimensional quantum deformed oscillator
//! `H = -hbar^2/(2m) ((1 + lambda x^2) d^2/dx^2 + lambda x d/dx) + m alpha^2 x^2 / (2 (1 + lambda x^2))`
//! with `alpha^2 = beta (beta + hbar lambda / m)`.
//!
//! Spectral work is done in the dimensionless variables
//! `y = sqrt(m beta / hbar) x`, `Lambda = hbar lambda / (m beta)`, `E = hbar beta e`.
//!
//! Ladder states are built exactly: applying `A+(beta_k)` to
//! `P(x) (1 + lambda x^2)^(-beta_{k+1} / (2 lambda))` gives
//! `(-(1 + lambda x^2) P' + (beta_k + beta_{k+1}) x P) (1 + lambda x^2)^(-beta_k / (2 lambda))`
//! up to the factor `1/sqrt(2)`, so `Psi_n` is a polynomial times the ground
//! state envelope of `beta`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dynamics::fmt_f64;
use crate::error::{metric_factor, Error, Result};
use crate::grid::{d1, d2, FdConfig, GridFn};
use crate::oracle::integrate_dmu;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub lambda: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

impl QuantumParams {
    pub fn new(lambda: f64, beta: f64) -> Result<Self> {
        Self::with_units(lambda, beta, 1.0, 1.0)
    }

    pub fn with_units(lambda: f64, beta: f64, mass: f64, hbar: f64) -> Result<Self> {
        let qp = QuantumParams {
            lambda,
            beta,
            mass,
            hbar,
        };
        qp.validate()?;
        Ok(qp)
    }

    /// Parameters of the dimensionless problem: `beta = hbar = m = 1`, `lambda = Lambda`.
    pub fn dimensionless(big_lambda: f64) -> Result<Self> {
        Self::new(big_lambda, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() {
            return Err(Error::InvalidArgument("lambda must be finite".into()));
        }
        for (name, v) in [
            ("beta", self.beta),
            ("mass", self.mass),
            ("hbar", self.hbar),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `Lambda = hbar lambda / (m beta)`.
    pub fn big_lambda(&self) -> f64 {
        self.hbar * self.lambda / (self.mass * self.beta)
    }

    /// `alpha^2 = beta (beta + hbar lambda / m)`.
    pub fn alpha2(&self) -> f64 {
        self.beta * (self.beta + self.hbar * self.lambda / self.mass)
    }

    /// Length unit `sqrt(hbar / (m beta))`.
    pub fn length_scale(&self) -> f64 {
        (self.hbar / (self.mass * self.beta)).sqrt()
    }

    pub fn to_dimensionless(&self, x: f64) -> f64 {
        x / self.length_scale()
    }

    /// `E = hbar beta e`.
    pub fn energy_scale(&self) -> f64 {
        self.hbar * self.beta
    }
}

/// `dmu / dx = (1 + lambda x^2)^(-1/2)`.
pub fn invariant_measure_weight(lambda: f64, x: f64) -> Result<f64> {
    Ok(1.0 / metric_factor(lambda, x * x)?.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn start(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Power series `phi(y) = sum a_n y^n` of `Psi = phi (1 + Lambda y^2)^(-1/(2 Lambda))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    pub coefficients: Vec<f64>,
    pub parity: Parity,
    pub energy: f64,
    pub terminated_at: Option<usize>,
    /// `lim |a_{n+2} / a_n|`, extrapolated in `1/n` from the last ratios.
    pub ratio_estimate: f64,
    /// `|a_{n+2} / a_n|` at the end of the computed range.
    pub last_ratio: f64,
}

impl SeriesSolution {
    pub fn eval(&self, y: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * y + c)
    }
}

/// Relative size of the recursion factor treated as an exact zero.
pub const TERMINATION_TOLERANCE: f64 = 1e-12;

/// Factor `a_{n+2} / a_n = -(n (Lambda n - 2) + 2e - 1) / ((n + 2)(n + 1))`,
/// obtained by substituting the series into
/// `(1 + Lambda y^2) phi'' + (Lambda - 2) y phi' + (2e - 1) phi = 0`.
fn series_factor(big_lambda: f64, energy: f64, n: usize) -> f64 {
    let nf = n as f64;
    let num = nf * (big_lambda * nf - 2.0) + 2.0 * energy - 1.0;
    let scale = (big_lambda * nf * nf).abs() + 2.0 * nf + (2.0 * energy - 1.0).abs();
    if num.abs() <= TERMINATION_TOLERANCE * scale.max(1.0) {
        0.0
    } else {
        -num / ((nf + 2.0) * (nf + 1.0))
    }
}

/// Neville extrapolation to `h = 0` of samples `(h_i, f_i)`.
fn extrapolate_to_zero(h: &[f64], f: &[f64]) -> f64 {
    let mut p = f.to_vec();
    let m = p.len();
    for k in 1..m {
        for i in 0..m - k {
            p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
        }
    }
    p[0]
}

pub fn series_solve(
    big_lambda: f64,
    energy: f64,
    parity: Parity,
    n_max: usize,
) -> Result<SeriesSolution> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    let mut a = vec![0.0; n_max + 1];
    let s = parity.start();
    a[s] = 1.0;
    let mut terminated_at = None;
    let mut ratios = Vec::new();
    let mut n = s;
    while n + 2 <= n_max {
        let r = series_factor(big_lambda, energy, n);
        if r == 0.0 {
            terminated_at = Some(n);
            break;
        }
        a[n + 2] = a[n] * r;
        ratios.push((n, r));
        n += 2;
    }
    let (ratio_estimate, last_ratio) = match terminated_at {
        Some(_) => (0.0, 0.0),
        None => {
            let tail = &ratios[ratios.len().saturating_sub(8)..];
            let h: Vec<f64> = tail.iter().map(|(n, _)| 1.0 / *n.max(&1) as f64).collect();
            let f: Vec<f64> = tail.iter().map(|(_, r)| *r).collect();
            (
                extrapolate_to_zero(&h, &f).abs(),
                f.last().map_or(0.0, |r| r.abs()),
            )
        }
    };
    Ok(SeriesSolution {
        coefficients: a,
        parity,
        energy,
        terminated_at,
        ratio_estimate,
        last_ratio,
    })
}

/// Index bound `floor(2 beta / lambda)` for `lambda > 0`, `None` (unbounded) otherwise.
pub fn max_bound_index(beta: f64, lambda: f64) -> Option<u64> {
    if lambda > 0.0 {
        Some((2.0 * beta / lambda * (1.0 + 1e-12)).floor() as u64)
    } else {
        None
    }
}

/// Largest `n` whose ladder state is square integrable against dmu
/// (`n < beta / lambda`) for `lambda > 0`; `None` otherwise.
pub fn max_normalizable_index(beta: f64, lambda: f64) -> Option<u64> {
    if lambda > 0.0 {
        let r = beta / lambda;
        let n = r.ceil() - 1.0;
        Some(
            if (r - r.round()).abs() < 1e-12 * r {
                r.round() - 1.0
            } else {
                n
            }
            .max(0.0) as u64,
        )
    } else {
        None
    }
}

fn check_bound(beta: f64, lambda: f64, n: u64) -> Result<()> {
    match max_bound_index(beta, lambda) {
        Some(max) if n > max => Err(Error::NotBoundState { n, max }),
        _ => Ok(()),
    }
}

/// Dimensionless levels `e_p = p (1 - Lambda p / 2) + 1/2`.
pub fn energy_series(big_lambda: f64, p: u64) -> Result<f64> {
    check_bound(1.0, big_lambda, p)?;
    let pf = p as f64;
    Ok(pf * (1.0 - 0.5 * big_lambda * pf) + 0.5)
}

/// `E_n = n beta - n^2 lambda / 2 + beta / 2` with `hbar = m = 1`.
pub fn energy_ladder(beta: f64, lambda: f64, n: u64) -> Result<f64> {
    check_bound(beta, lambda, n)?;
    let nf = n as f64;
    Ok(nf * beta - 0.5 * nf * nf * lambda + 0.5 * beta)
}

/// `E_n = hbar beta e_n(Lambda)` for general units.
pub fn energy_physical(qp: &QuantumParams, n: u64) -> Result<f64> {
    Ok(qp.energy_scale() * energy_series(qp.big_lambda(), n)?)
}

/// `beta_k = beta - k lambda`.
pub fn beta_k(beta: f64, lambda: f64, k: u64) -> f64 {
    beta - k as f64 * lambda
}

/// Shape invariance constant `R(beta) = beta + lambda / 2`.
pub fn shape_constant(beta: f64, lambda: f64) -> f64 {
    beta + 0.5 * lambda
}

/// Superpotential `W = beta x / sqrt(1 + lambda x^2)`.
pub fn superpotential(beta: f64, lambda: f64, x: f64) -> Result<f64> {
    Ok(beta * x / metric_factor(lambda, x * x)?.sqrt())
}

/// `(1 + lambda x^2)^(-beta / (2 lambda))`, the Gaussian `exp(-beta x^2 / 2)` at `lambda = 0`.
pub fn envelope(beta: f64, lambda: f64, x: f64) -> Result<f64> {
    let t = lambda * x * x;
    if 1.0 + t <= 0.0 {
        return Err(Error::Domain(format!("1 + lambda x^2 = {} <= 0", 1.0 + t)));
    }
    if lambda == 0.0 {
        return Ok((-0.5 * beta * x * x).exp());
    }
    Ok((-0.5 * beta / lambda * t.ln_1p()).exp())
}

/// Ladder polynomial `Q_n` with `Psi_n proportional to Q_n(x) envelope(beta, lambda, x)`,
/// coefficients in ascending powers.
pub fn ladder_polynomial(beta: f64, lambda: f64, n: u64) -> Vec<f64> {
    let mut p = vec![1.0];
    for k in (0..n).rev() {
        let s = beta_k(beta, lambda, k) + beta_k(beta, lambda, k + 1);
        let mut q = vec![0.0; p.len() + 1];
        for (j, &c) in p.iter().enumerate() {
            // -(1 + lambda x^2) P'
            if j >= 1 {
                q[j - 1] -= j as f64 * c;
                q[j + 1] -= lambda * j as f64 * c;
            }
            q[j + 1] += s * c;
        }
        let lead = q.last().copied().unwrap_or(1.0);
        if lead != 0.0 {
            q.iter_mut().for_each(|c| *c /= lead.abs());
        }
        p = q;
    }
    p
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Normalized ladder eigenfunction evaluated pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState {
    pub beta: f64,
    pub lambda: f64,
    pub n: u64,
    pub polynomial: Vec<f64>,
    pub norm: f64,
}

impl LadderState {
    pub fn new(beta: f64, lambda: f64, n: u64) -> Result<Self> {
        check_bound(beta, lambda, n)?;
        if let Some(max) = max_normalizable_index(beta, lambda) {
            if n > max {
                return Err(Error::NotNormalizable {
                    beta: beta_k(beta, lambda, n),
                    lambda,
                });
            }
        }
        let polynomial = ladder_polynomial(beta, lambda, n);
        let unnormalized = |x: f64| poly(&polynomial, x) * envelope(beta, lambda, x).unwrap_or(0.0);
        let mass = integrate_dmu(lambda, |x| unnormalized(x).powi(2))?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::NotNormalizable { beta, lambda });
        }
        Ok(LadderState {
            beta,
            lambda,
            n,
            polynomial,
            norm: mass.sqrt(),
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(poly(&self.polynomial, x) * envelope(self.beta, self.lambda, x)? / self.norm)
    }

    pub fn energy(&self) -> f64 {
        let nf = self.n as f64;
        nf * self.beta - 0.5 * nf * nf * self.lambda + 0.5 * self.beta
    }
}

/// Normalized ground state `(1 + lambda x^2)^(-beta / (2 lambda))`.
pub fn ground_state(beta: f64, lambda: f64, x: f64) -> Result<f64> {
    LadderState::new(beta, lambda, 0)?.eval(x)
}

fn check_grid(lambda: f64, psi: &GridFn) -> Result<()> {
    let edge = psi.grid.a.abs().max(psi.grid.b.abs());
    metric_factor(lambda, edge * edge).map(|_| ())
}

/// `H psi` by central differences; rows within the stencil half-width of
/// the valid range are marked invalid.
pub fn apply_hamiltonian_1d(qp: &QuantumParams, psi: &GridFn, fd: &FdConfig) -> Result<GridFn> {
    check_grid(qp.lambda, psi)?;
    fd.check_resolution(psi)?;
    let l = qp.lambda;
    let k = qp.hbar * qp.hbar / (2.0 * qp.mass);
    let v = 0.5 * qp.mass * qp.alpha2();
    let dd = d2(psi, fd.order);
    let d = d1(psi, fd.order);
    let mut out = dd.clone();
    for i in out.valid.clone() {
        let x = psi.grid.x(i);
        let c = 1.0 + l * x * x;
        out.values[i] =
            -k * (c * dd.values[i] + l * x * d.values[i]) + v * x * x / c * psi.values[i];
    }
    Ok(out)
}

fn apply_ladder(beta: f64, lambda: f64, psi: &GridFn, fd: &FdConfig, sign: f64) -> Result<GridFn> {
    check_grid(lambda, psi)?;
    fd.check_resolution(psi)?;
    let d = d1(psi, fd.order);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(d.map(|x, dpsi| {
        let c = (1.0 + lambda * x * x).sqrt();
        let i = ((x - psi.grid.a) / psi.grid.h()).round() as usize;
        s * (sign * c * dpsi + beta * x / c * psi.values[i])
    }))
}

/// `A psi = (sqrt(1 + lambda x^2) psi' + W psi) / sqrt(2)`.
pub fn apply_a(beta: f64, lambda: f64, psi: &GridFn, fd: &FdConfig) -> Result<GridFn> {
    apply_ladder(beta, lambda, psi, fd, 1.0)
}

/// `A+ psi = (-sqrt(1 + lambda x^2) psi' + W psi) / sqrt(2)`.
pub fn apply_a_plus(beta: f64, lambda: f64, psi: &GridFn, fd: &FdConfig) -> Result<GridFn> {
    apply_ladder(beta, lambda, psi, fd, -1.0)
}

/// Discrete dmu norm over the valid rows.
pub fn grid_norm_mu(lambda: f64, f: &GridFn) -> f64 {
    let h = f.grid.h();
    f.valid_points()
        .map(|(x, v)| v * v / (1.0 + lambda * x * x).sqrt())
        .sum::<f64>()
        .sqrt()
        * h.sqrt()
}

/// `||A A+(beta) psi - A+ A(beta_1) psi - R(beta_1) psi|| / ||psi||` with `beta_1 = beta - lambda`.
pub fn shape_invariance_residual(
    beta: f64,
    lambda: f64,
    psi: &GridFn,
    fd: &FdConfig,
) -> Result<f64> {
    shape_invariance_residual_with(beta, lambda, psi, fd, shape_constant(beta - lambda, lambda))
}

/// As [`shape_invariance_residual`] with an arbitrary constant in place of `R(beta_1)`.
pub fn shape_invariance_residual_with(
    beta: f64,
    lambda: f64,
    psi: &GridFn,
    fd: &FdConfig,
    r: f64,
) -> Result<f64> {
    let b1 = beta - lambda;
    let lhs = apply_a(beta, lambda, &apply_a_plus(beta, lambda, psi, fd)?, fd)?;
    let rhs = apply_a_plus(b1, lambda, &apply_a(b1, lambda, psi, fd)?, fd)?;
    let diff = lhs
        .zip_with(&rhs, |a, b| a - b)
        .zip_with(psi, |d, p| d - r * p);
    let base = psi.restrict(diff.valid.clone());
    Ok(grid_norm_mu(lambda, &diff) / grid_norm_mu(lambda, &base))
}

/// Ladder eigenfunction sampled on a grid together with its eigen-residual
/// `||H Psi - E Psi|| / ||Psi||` over the interior rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEigenfunction {
    pub psi: GridFn,
    pub energy: f64,
    pub residual: f64,
}

pub fn ladder_eigenfunction(
    beta: f64,
    lambda: f64,
    n: u64,
    grid: &crate::grid::Grid1D,
    fd: &FdConfig,
) -> Result<GridEigenfunction> {
    let state = LadderState::new(beta, lambda, n)?;
    let psi = grid.try_sample(|x| state.eval(x))?;
    let qp = QuantumParams::new(lambda, beta)?;
    let h_psi = apply_hamiltonian_1d(&qp, &psi, fd)?;
    let e = state.energy();
    let diff = h_psi.zip_with(&psi, |a, b| a - e * b);
    let residual =
        grid_norm_mu(lambda, &diff) / grid_norm_mu(lambda, &psi.restrict(diff.valid.clone()));
    Ok(GridEigenfunction {
        psi,
        energy: e,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Series,
    Ladder,
    Oracle,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Series => "series",
            Provenance::Ladder => "ladder",
            Provenance::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub n: u64,
    pub energy: f64,
    pub provenance: Provenance,
    pub residual: f64,
}

pub fn write_spectrum_csv<W: Write>(entries: &[SpectrumEntry], mut w: W) -> std::io::Result<()> {
    writeln!(w, "n,energy,provenance,residual")?;
    for e in entries {
        writeln!(
            w,
            "{},{},{},{}",
            e.n,
            fmt_f64(e.energy),
            e.provenance.name(),
            fmt_f64(e.residual)
        )?;
    }
    Ok(())
}

pub fn write_wavefunction_csv<W: Write>(psi: &GridFn, mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,psi")?;
    for (x, v) in psi.valid_points() {
        writeln!(w, "{},{}", fmt_f64(x), fmt_f64(v))?;
    }
    Ok(())
}
