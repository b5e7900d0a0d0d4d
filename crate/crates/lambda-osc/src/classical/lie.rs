//! The vector fields `X1 = s d/dx`, `X2 = s d/dy` (`s = sqrt(1 + lambda r^2)`)
//! and `XJ = x d/dy - y d/dx`, applied as first-order operators.

use crate::error::{metric_factor, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneVectorField {
    X1,
    X2,
    XJ,
}

impl PlaneVectorField {
    /// Components `a` and their Jacobian `jac[i][j] = d a_i / d q_j`.
    pub fn coefficients(self, lambda: f64, x: f64, y: f64) -> Result<([f64; 2], [[f64; 2]; 2])> {
        let s = metric_factor(lambda, x * x + y * y)?.sqrt();
        let ds = [lambda * x / s, lambda * y / s];
        Ok(match self {
            PlaneVectorField::X1 => ([s, 0.0], [ds, [0.0, 0.0]]),
            PlaneVectorField::X2 => ([0.0, s], [[0.0, 0.0], ds]),
            PlaneVectorField::XJ => ([-y, x], [[0.0, -1.0], [1.0, 0.0]]),
        })
    }

    pub fn apply(self, lambda: f64, f: &TestPolynomial, x: f64, y: f64) -> Result<f64> {
        let (a, _) = self.coefficients(lambda, x, y)?;
        let g = f.gradient(x, y);
        Ok(a[0] * g[0] + a[1] * g[1])
    }

    /// `[A, B] f = A(B f) - B(A f)`, second derivatives included.
    pub fn commutator(
        self,
        other: PlaneVectorField,
        lambda: f64,
        f: &TestPolynomial,
        x: f64,
        y: f64,
    ) -> Result<f64> {
        let (a, ja) = self.coefficients(lambda, x, y)?;
        let (b, jb) = other.coefficients(lambda, x, y)?;
        let g = f.gradient(x, y);
        let h = f.hessian(x, y);
        // A(B f) = a_i d_i(b_j d_j f) = a_i (d_i b_j) d_j f + a_i b_j d_ij f
        let mut abf = 0.0;
        let mut baf = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                abf += a[i] * jb[j][i] * g[j] + a[i] * b[j] * h[i][j];
                baf += b[i] * ja[j][i] * g[j] + b[i] * a[j] * h[i][j];
            }
        }
        Ok(abf - baf)
    }
}

/// `sum c[i][j] x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestPolynomial {
    pub coeffs: Vec<Vec<f64>>,
}

impl TestPolynomial {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Self {
        TestPolynomial { coeffs }
    }

    fn term(&self, dx: u32, dy: u32, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let (i, j) = (i as u32, j as u32);
                if c == 0.0 || i < dx || j < dy {
                    continue;
                }
                let fx = falling(i, dx) * pow(x, i - dx);
                let fy = falling(j, dy) * pow(y, j - dy);
                total += c * fx * fy;
            }
        }
        total
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.term(0, 0, x, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [self.term(1, 0, x, y), self.term(0, 1, x, y)]
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let xy = self.term(1, 1, x, y);
        [[self.term(2, 0, x, y), xy], [xy, self.term(0, 2, x, y)]]
    }
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

fn pow(x: f64, n: u32) -> f64 {
    x.powi(n as i32)
}

/// Largest deviation from `[X1, X2] = lambda XJ`, `[X1, XJ] = X2`,
/// `[X2, XJ] = -X1` over the given test functions and points.
pub fn commutator_residuals(
    lambda: f64,
    polys: &[TestPolynomial],
    points: &[(f64, f64)],
) -> Result<f64> {
    use PlaneVectorField::*;
    let mut worst = 0.0f64;
    for f in polys {
        for &(x, y) in points {
            let r1 = X1.commutator(X2, lambda, f, x, y)? - lambda * XJ.apply(lambda, f, x, y)?;
            let r2 = X1.commutator(XJ, lambda, f, x, y)? - X2.apply(lambda, f, x, y)?;
            let r3 = X2.commutator(XJ, lambda, f, x, y)? + X1.apply(lambda, f, x, y)?;
            worst = worst.max(r1.abs()).max(r2.abs()).max(r3.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // f = 3 x^2 y + y^3
        let f = TestPolynomial::new(vec![vec![0.0, 0.0, 0.0, 1.0], vec![], vec![0.0, 3.0]]);
        let (x, y) = (0.5, -2.0);
        assert_eq!(f.value(x, y), 3.0 * 0.25 * -2.0 - 8.0);
        assert_eq!(f.gradient(x, y), [6.0 * x * y, 3.0 * x * x + 3.0 * y * y]);
        assert_eq!(f.hessian(x, y), [[6.0 * y, 6.0 * x], [6.0 * x, 6.0 * y]]);
    }

    #[test]
    fn algebra_closes() {
        let polys = vec![
            TestPolynomial::new(vec![vec![0.0, 1.0], vec![1.0]]),
            TestPolynomial::new(vec![vec![0.0, 0.0, 2.0], vec![0.5, -1.0], vec![3.0]]),
            TestPolynomial::new(vec![
                vec![1.0, 0.2, 0.0, -0.7],
                vec![0.0, 0.0, 1.1],
                vec![0.3, 0.4],
            ]),
        ];
        let pts = [(0.3, -0.4), (0.1, 0.2), (-0.5, 0.5)];
        for lambda in [-1.5, -0.3, 0.0, 0.7, 2.0] {
            assert!(commutator_residuals(lambda, &polys, &pts).unwrap() < 1e-12);
        }
    }
}
