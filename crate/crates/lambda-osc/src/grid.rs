//! Uniform grids and central finite-difference stencils.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `x_i = a + i h`, `i = 0..n`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!(
                "bad grid interval ({a}, {b})"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(
                "a grid needs at least two points".into(),
            ));
        }
        Ok(Grid1D { a, b, n })
    }

    /// Symmetric grid on `[-half, half]`.
    pub fn symmetric(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, n)
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn::new(*self, self.points().into_iter().map(f).collect())
    }

    pub fn try_sample(&self, f: impl Fn(f64) -> Result<f64>) -> Result<GridFn> {
        let v = self
            .points()
            .into_iter()
            .map(f)
            .collect::<Result<Vec<_>>>()?;
        Ok(GridFn::new(*self, v))
    }
}

/// Values on a grid; rows outside `valid` are not trustworthy and hold NaN
/// after a stencil application.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub valid: Range<usize>,
}

impl GridFn {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Self {
        assert_eq!(grid.n, values.len(), "values do not match the grid");
        let n = values.len();
        GridFn {
            grid,
            values,
            valid: 0..n,
        }
    }

    pub fn valid_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.valid.clone().map(|i| (self.grid.x(i), self.values[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.values[self.valid.clone()]
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise combination on the intersection of the valid ranges.
    pub fn zip_with(&self, other: &GridFn, f: impl Fn(f64, f64) -> f64) -> GridFn {
        assert_eq!(
            self.grid, other.grid,
            "grid functions live on different grids"
        );
        let valid = self.valid.start.max(other.valid.start)..self.valid.end.min(other.valid.end);
        let values = (0..self.grid.n)
            .map(|i| {
                if valid.contains(&i) {
                    f(self.values[i], other.values[i])
                } else {
                    f64::NAN
                }
            })
            .collect();
        GridFn {
            grid: self.grid,
            values,
            valid,
        }
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFn {
        let values = (0..self.grid.n)
            .map(|i| {
                if self.valid.contains(&i) {
                    f(self.grid.x(i), self.values[i])
                } else {
                    f64::NAN
                }
            })
            .collect();
        GridFn {
            grid: self.grid,
            values,
            valid: self.valid.clone(),
        }
    }

    pub fn restrict(&self, valid: Range<usize>) -> GridFn {
        let valid = self.valid.start.max(valid.start)..self.valid.end.min(valid.end);
        let mut out = self.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            if !valid.contains(&i) {
                *v = f64::NAN;
            }
        }
        out.valid = valid;
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FdOrder {
    Fourth,
    Sixth,
    #[default]
    Eighth,
}

impl FdOrder {
    pub fn half_width(self) -> usize {
        match self {
            FdOrder::Fourth => 2,
            FdOrder::Sixth => 3,
            FdOrder::Eighth => 4,
        }
    }

    /// One-sided weights `w_1..w_k` of the antisymmetric first-derivative stencil.
    fn first(self) -> &'static [f64] {
        match self {
            FdOrder::Fourth => &[2.0 / 3.0, -1.0 / 12.0],
            FdOrder::Sixth => &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
            FdOrder::Eighth => &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
        }
    }

    /// Centre weight and one-sided weights of the symmetric second-derivative stencil.
    fn second(self) -> (f64, &'static [f64]) {
        match self {
            FdOrder::Fourth => (-5.0 / 2.0, &[4.0 / 3.0, -1.0 / 12.0]),
            FdOrder::Sixth => (-49.0 / 18.0, &[3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0]),
            FdOrder::Eighth => (
                -205.0 / 72.0,
                &[8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0],
            ),
        }
    }
}

/// Stencil order and the smoothness guard used by grid operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub order: FdOrder,
    /// Bound on `max |h^4 psi''''| / max |psi|`.
    pub coarse_tolerance: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            order: FdOrder::Eighth,
            coarse_tolerance: 1e-2,
        }
    }
}

impl FdConfig {
    pub fn order(order: FdOrder) -> Self {
        FdConfig {
            order,
            ..Self::default()
        }
    }

    /// Fails with `GridTooCoarse` when the fourth difference is large
    /// compared with the function itself.
    pub fn check_resolution(&self, f: &GridFn) -> Result<()> {
        let scale = f.max_abs();
        if scale == 0.0 {
            return Ok(());
        }
        let v = &f.values;
        let r = f.valid.clone();
        if r.len() < 5 {
            return Err(Error::GridTooCoarse {
                estimate: f64::INFINITY,
                tolerance: self.coarse_tolerance,
            });
        }
        let mut worst = 0.0f64;
        for i in r.start + 2..r.end - 2 {
            let d4 = v[i - 2] - 4.0 * v[i - 1] + 6.0 * v[i] - 4.0 * v[i + 1] + v[i + 2];
            worst = worst.max(d4.abs());
        }
        let estimate = worst / scale;
        if estimate > self.coarse_tolerance || !estimate.is_finite() {
            return Err(Error::GridTooCoarse {
                estimate,
                tolerance: self.coarse_tolerance,
            });
        }
        Ok(())
    }
}

fn shrink(valid: &Range<usize>, k: usize) -> Range<usize> {
    let start = valid.start + k;
    let end = valid.end.saturating_sub(k).max(start);
    start..end
}

/// First derivative; the valid range shrinks by the stencil half-width.
pub fn d1(f: &GridFn, order: FdOrder) -> GridFn {
    let w = order.first();
    let k = w.len();
    let h = f.grid.h();
    let valid = shrink(&f.valid, k);
    let mut values = vec![f64::NAN; f.grid.n];
    for i in valid.clone() {
        let mut s = 0.0;
        for (j, wj) in w.iter().enumerate() {
            s += wj * (f.values[i + j + 1] - f.values[i - j - 1]);
        }
        values[i] = s / h;
    }
    GridFn {
        grid: f.grid,
        values,
        valid,
    }
}

/// Second derivative; the valid range shrinks by the stencil half-width.
pub fn d2(f: &GridFn, order: FdOrder) -> GridFn {
    let (c, w) = order.second();
    let k = w.len();
    let h2 = f.grid.h().powi(2);
    let valid = shrink(&f.valid, k);
    let mut values = vec![f64::NAN; f.grid.n];
    for i in valid.clone() {
        let mut s = c * f.values[i];
        for (j, wj) in w.iter().enumerate() {
            s += wj * (f.values[i + j + 1] + f.values[i - j - 1]);
        }
        values[i] = s / h2;
    }
    GridFn {
        grid: f.grid,
        values,
        valid,
    }
}

/// Composite Simpson rule over the valid rows of `f` multiplied by `weight(x)`;
/// an even number of intervals is closed with the three-eighths rule.
pub fn simpson(f: &GridFn, weight: impl Fn(f64) -> f64) -> f64 {
    let h = f.grid.h();
    let idx: Vec<usize> = f.valid.clone().collect();
    let g = |i: usize| f.values[i] * weight(f.grid.x(i));
    let m = idx.len();
    match m {
        0 | 1 => 0.0,
        2 => 0.5 * h * (g(idx[0]) + g(idx[1])),
        3 => h / 3.0 * (g(idx[0]) + 4.0 * g(idx[1]) + g(idx[2])),
        _ => {
            let intervals = m - 1;
            let (simpson_end, tail) = if intervals % 2 == 0 {
                (m - 1, false)
            } else {
                (m - 4, true)
            };
            let mut s = g(idx[0]) + g(idx[simpson_end]);
            for (j, &i) in idx.iter().enumerate().take(simpson_end).skip(1) {
                s += if j % 2 == 1 { 4.0 } else { 2.0 } * g(i);
            }
            let mut total = s * h / 3.0;
            if tail {
                let t = &idx[m - 4..];
                total += 3.0 * h / 8.0 * (g(t[0]) + 3.0 * g(t[1]) + 3.0 * g(t[2]) + g(t[3]));
            }
            total
        }
    }
}
