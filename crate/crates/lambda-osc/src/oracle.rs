//! Brute-force checks that do not rely on the closed forms: a
//! finite-difference Sturm-Liouville eigensolver, quadrature against the
//! invariant measure and Euler-Lagrange residuals of sampled paths.
//!
//! The eigensolver works in the geodesic coordinate `u`, `x = Sin_k(u)`,
//! `k = -lambda`. There `dmu = du`, the deformed kinetic operator becomes
//! `-hbar^2/(2m) d^2/du^2` and the oscillator potential is
//! `m alpha^2 Tan_k(u)^2 / 2`, so the discretization is symmetric in the
//! plain Euclidean inner product and its eigenvectors are dmu-orthonormal.

use std::io::Write;

use num_dual::Dual64;
use serde::{Deserialize, Serialize};

use crate::classical::Lagrangian;
use crate::dynamics::fmt_f64;
use crate::error::{Error, Result};
use crate::grid::{d1, simpson, FdOrder, Grid1D, GridFn};
use crate::ktrig::{cos_k, from_geodesic, geodesic_half_width, sin_k, tan_k};
use crate::quantum1d::QuantumParams;
use crate::tridiag::SymTridiag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Walls at the ends of the interval, used on the sphere where the
    /// potential diverges at the boundary of the chart.
    Dirichlet,
    /// Truncated infinite domain, enlarged until the wave function tails are negligible.
    NaturalTruncation,
}

/// Interval in the geodesic coordinate `u`, number of intervals of the fine
/// grid (the coarse grid has half as many) and the two-grid tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub points: usize,
    pub boundary: Boundary,
    pub tolerance: f64,
}

/// Tail mass below which a truncated eigenfunction counts as converged.
pub const TAIL_MASS: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 4;

impl GridSpec {
    /// Domain suited to `qp`: the whole chart on the sphere, `|u| <= 12 l0`
    /// otherwise, `l0 = sqrt(hbar / (m beta))`.
    pub fn for_params(qp: &QuantumParams, points: usize) -> Self {
        if qp.lambda < 0.0 {
            let w = geodesic_half_width(qp.lambda);
            GridSpec {
                a: -w,
                b: w,
                points,
                boundary: Boundary::Dirichlet,
                tolerance: 1e-2,
            }
        } else {
            let l = 12.0 * (qp.hbar / (qp.mass * qp.beta)).sqrt();
            GridSpec {
                a: -l,
                b: l,
                points,
                boundary: Boundary::NaturalTruncation,
                tolerance: 1e-2,
            }
        }
    }

    pub fn validate(&self, qp: &QuantumParams) -> Result<()> {
        if self.points < 64 || self.points % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "oracle grids need an even number of intervals >= 64, got {}",
                self.points
            )));
        }
        if !(self.a < self.b) {
            return Err(Error::InvalidArgument("empty oracle interval".into()));
        }
        if qp.lambda < 0.0 {
            let w = geodesic_half_width(qp.lambda);
            if self.a < -w - 1e-12 || self.b > w + 1e-12 {
                return Err(Error::Domain(format!(
                    "oracle interval exceeds the chart |u| < {w}"
                )));
            }
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.points as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Richardson combination `(4 E_fine - E_coarse) / 3`.
    pub eigenvalues: Vec<f64>,
    pub fine: Vec<f64>,
    pub coarse: Vec<f64>,
    /// `|E_fine - E_coarse| / 3`, the leading error estimate of the fine grid.
    pub two_grid_error: Vec<f64>,
    /// False for levels in the continuum or with tails that never fit the box.
    pub converged: Vec<bool>,
    pub tail_mass: Vec<f64>,
    /// Fine grid nodes, walls included.
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    /// Fine grid eigenvectors at the nodes, `sum psi^2 h = 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid: GridSpec,
    pub symmetrization: &'static str,
}

impl EigenResult {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,eigenvalue,two_grid_error")?;
        for (i, (e, err)) in self
            .eigenvalues
            .iter()
            .zip(&self.two_grid_error)
            .enumerate()
        {
            writeln!(w, "{i},{},{}", fmt_f64(*e), fmt_f64(*err))?;
        }
        Ok(())
    }

    /// dmu inner product of two eigenvectors.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h();
        self.eigenvectors[i]
            .iter()
            .zip(&self.eigenvectors[j])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * h
    }
}

/// Potential `m alpha^2 Tan_k(u)^2 / 2` of the oscillator in geodesic coordinates.
pub fn geodesic_potential(qp: &QuantumParams, u: f64) -> Result<f64> {
    let t = tan_k(-qp.lambda, u)?;
    Ok(0.5 * qp.mass * qp.alpha2() * t * t)
}

/// Energy above which `lambda > 0` states belong to the continuum.
pub fn continuum_threshold(qp: &QuantumParams) -> f64 {
    if qp.lambda > 0.0 {
        0.5 * qp.mass * qp.alpha2() / qp.lambda
    } else {
        f64::INFINITY
    }
}

struct Solve {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn solve(
    qp: &QuantumParams,
    a: f64,
    b: f64,
    intervals: usize,
    k: usize,
    vectors: bool,
) -> Result<Solve> {
    let h = (b - a) / intervals as f64;
    let kin = qp.hbar * qp.hbar / (2.0 * qp.mass * h * h);
    let n = intervals - 1;
    let mut d = Vec::with_capacity(n);
    for j in 1..=n {
        d.push(2.0 * kin + geodesic_potential(qp, a + j as f64 * h)?);
    }
    let t = SymTridiag::new(d, vec![-kin; n - 1]);
    let values = t.lowest(k);
    let vectors = if vectors {
        values
            .iter()
            .map(|&e| {
                let v = t.eigenvector(e);
                let s = h.sqrt();
                let mut full = Vec::with_capacity(intervals + 1);
                full.push(0.0);
                full.extend(v.iter().map(|x| x / s));
                full.push(0.0);
                full
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Solve { values, vectors })
}

fn tail_mass(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    let edge = n / 10;
    (v[..edge]
        .iter()
        .chain(&v[n - edge..])
        .map(|x| x * x)
        .sum::<f64>()
        * h)
        .min(1.0)
}

/// Lowest `k` eigenvalues of the deformed oscillator with two-grid Richardson
/// extrapolation. Truncated domains are doubled (at most four times) until
/// the tail mass of every level below the continuum is under `TAIL_MASS`;
/// levels that never get there are reported as not converged.
pub fn sturm_liouville_eigen(qp: &QuantumParams, g: &GridSpec, k: usize) -> Result<EigenResult> {
    qp.validate()?;
    g.validate(qp)?;
    if k == 0 || k > g.points / 10 {
        return Err(Error::InvalidArgument(format!(
            "requested {k} levels; at most points/10 = {} are resolved",
            g.points / 10
        )));
    }
    let threshold = continuum_threshold(qp);
    let mut spec = *g;
    let mut doublings = 0;
    let (fine, tails) = loop {
        let fine = solve(qp, spec.a, spec.b, spec.points, k, true)?;
        let tails: Vec<f64> = fine
            .vectors
            .iter()
            .map(|v| tail_mass(v, spec.h()))
            .collect();
        let settled = spec.boundary == Boundary::Dirichlet
            || doublings == MAX_DOUBLINGS
            || fine
                .values
                .iter()
                .zip(&tails)
                .all(|(e, t)| *e >= threshold || *t <= TAIL_MASS);
        if settled {
            break (fine, tails);
        }
        spec.a *= 2.0;
        spec.b *= 2.0;
        doublings += 1;
    };
    let coarse = solve(qp, spec.a, spec.b, spec.points / 2, k, false)?;
    let mut out = EigenResult {
        eigenvalues: Vec::with_capacity(k),
        fine: fine.values.clone(),
        coarse: coarse.values.clone(),
        two_grid_error: Vec::with_capacity(k),
        converged: Vec::with_capacity(k),
        tail_mass: tails.clone(),
        u: (0..=spec.points).map(|j| spec.a + j as f64 * spec.h()).collect(),
        x: Vec::new(),
        eigenvectors: fine.vectors,
        grid: spec,
        symmetrization: "geodesic coordinate u with x = Sin_k(u): -hbar^2/(2m) d2/du2 + m alpha^2 Tan_k(u)^2 / 2, dmu = du",
    };
    out.x = out.u.iter().map(|&u| from_geodesic(qp.lambda, u)).collect();
    for i in 0..k {
        let (ef, ec) = (fine.values[i], coarse.values[i]);
        out.eigenvalues.push((4.0 * ef - ec) / 3.0);
        out.two_grid_error.push((ef - ec).abs() / 3.0);
        let ok = ef < threshold && (spec.boundary == Boundary::Dirichlet || tails[i] <= TAIL_MASS);
        out.converged.push(ok);
        if ok && (ef - ec).abs() > spec.tolerance {
            return Err(Error::Convergence {
                level: i,
                difference: (ef - ec).abs(),
                tolerance: spec.tolerance,
            });
        }
    }
    Ok(out)
}

/// Composite Simpson integral of `f (1 + lambda x^2)^(-1/2)` over the valid rows of `f`.
pub fn quadrature_mu(f: &GridFn, lambda: f64) -> f64 {
    simpson(f, |x| 1.0 / (1.0 + lambda * x * x).sqrt())
}

fn simpson_fn(g: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (f64, f64) {
    let h = (b - a) / n as f64;
    let clean = |u: f64| {
        let v = g(u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let (mut s, mut s_abs) = (0.0, 0.0);
    for j in 0..=n {
        let w = if j == 0 || j == n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = clean(a + j as f64 * h);
        s += w * v;
        s_abs += w * v.abs();
    }
    (s * h / 3.0, s_abs * h / 3.0)
}

/// Integral of `g(u)` over the geodesic line of the chart: the whole
/// interval `|u| < pi / (2 sqrt(-lambda))` on the sphere, or a symmetric
/// window wide enough for the tails to fall below `tol` otherwise.
/// Non-finite values at the walls are read as zero.
pub fn integrate_geodesic(lambda: f64, g: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
    let w = if lambda < 0.0 {
        geodesic_half_width(lambda)
    } else {
        let mut w = 4.0;
        loop {
            let peak = (0..=400)
                .map(|j| g(-w + j as f64 * w / 200.0).abs())
                .fold(0.0, f64::max);
            let edge = [w, -w, 0.9 * w, -0.9 * w]
                .iter()
                .map(|&u| g(u).abs())
                .fold(0.0, f64::max);
            if edge <= 1e-3 * tol * peak || peak == 0.0 {
                break w;
            }
            if w > 4096.0 {
                return Err(Error::NotNormalizable {
                    beta: f64::NAN,
                    lambda,
                });
            }
            w *= 2.0;
        }
    };
    let mut n = 1024;
    let (mut prev, _) = simpson_fn(&g, -w, w, n);
    loop {
        n *= 2;
        let (s, s_abs) = simpson_fn(&g, -w, w, n);
        if !s.is_finite() {
            return Err(Error::Domain("non-finite integrand".into()));
        }
        if (s - prev).abs() <= tol * s_abs.max(f64::MIN_POSITIVE) || n >= 1 << 22 {
            return Ok(s);
        }
        prev = s;
    }
}

/// `integral f(x) dmu`, computed as `integral f(Sin_k(u)) du`.
pub fn integrate_dmu(lambda: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    integrate_geodesic(lambda, |u| f(from_geodesic(lambda, u)), 1e-13)
}

/// `integral f(x) dx`, computed as `integral f(Sin_k(u)) Cos_k(u) du`.
pub fn integrate_dx(lambda: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let k = -lambda;
    integrate_geodesic(lambda, |u| f(sin_k(k, u)) * cos_k(k, u), 1e-13)
}

/// Relative disagreement of the eighth- and sixth-order velocity estimates
/// above which a sampled path counts as too coarse.
pub const PATH_TOLERANCE: f64 = 1e-6;

fn partials<L: Lagrangian>(l: &L, q: &[f64], v: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = q.len();
    let mut dq = Vec::with_capacity(n);
    let mut dv = Vec::with_capacity(n);
    for j in 0..n {
        let qd: Vec<Dual64> = q
            .iter()
            .enumerate()
            .map(|(i, &x)| Dual64::new(x, if i == j { 1.0 } else { 0.0 }))
            .collect();
        let vd: Vec<Dual64> = v.iter().map(|&x| Dual64::new(x, 0.0)).collect();
        dq.push(l.value(&qd, &vd)?.eps);
        let qd: Vec<Dual64> = q.iter().map(|&x| Dual64::new(x, 0.0)).collect();
        let vd: Vec<Dual64> = v
            .iter()
            .enumerate()
            .map(|(i, &x)| Dual64::new(x, if i == j { 1.0 } else { 0.0 }))
            .collect();
        dv.push(l.value(&qd, &vd)?.eps);
    }
    Ok((dq, dv))
}

/// `max |d/dt (dL/dv) - dL/dq|` along a path sampled at spacing `dt`, with
/// exact partial derivatives from dual numbers and eighth-order time derivatives.
pub fn euler_lagrange_residual<L: Lagrangian>(l: &L, dt: f64, path: &[Vec<f64>]) -> Result<f64> {
    let n = path.len();
    let dim = l.dim();
    if n < 17 || !(dt > 0.0) {
        return Err(Error::GridTooCoarse {
            estimate: f64::INFINITY,
            tolerance: PATH_TOLERANCE,
        });
    }
    if path.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument(format!(
            "path points must have {dim} components"
        )));
    }
    let grid = Grid1D::new(0.0, dt * (n - 1) as f64, n)?;
    let comps: Vec<GridFn> = (0..dim)
        .map(|j| GridFn::new(grid, path.iter().map(|p| p[j]).collect()))
        .collect();
    let v8: Vec<GridFn> = comps.iter().map(|c| d1(c, FdOrder::Eighth)).collect();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for c in &comps {
        let v6 = d1(c, FdOrder::Sixth);
        let v8 = d1(c, FdOrder::Eighth);
        for i in v8.valid.clone() {
            worst = worst.max((v8.values[i] - v6.values[i]).abs());
            scale = scale.max(v8.values[i].abs());
        }
    }
    let estimate = worst / scale.max(1.0);
    if estimate > PATH_TOLERANCE {
        return Err(Error::GridTooCoarse {
            estimate,
            tolerance: PATH_TOLERANCE,
        });
    }
    let valid = v8[0].valid.clone();
    let mut momenta = vec![vec![f64::NAN; n]; dim];
    let mut forces = vec![vec![f64::NAN; n]; dim];
    for i in valid.clone() {
        let v: Vec<f64> = v8.iter().map(|c| c.values[i]).collect();
        let (dq, dv) = partials(l, &path[i], &v)?;
        for j in 0..dim {
            momenta[j][i] = dv[j];
            forces[j][i] = dq[j];
        }
    }
    let mut residual = 0.0f64;
    for j in 0..dim {
        let p = GridFn {
            grid,
            values: momenta[j].clone(),
            valid: valid.clone(),
        };
        let pdot = d1(&p, FdOrder::Eighth);
        for i in pdot.valid.clone() {
            residual = residual.max((pdot.values[i] - forces[j][i]).abs());
        }
    }
    Ok(residual)
}
