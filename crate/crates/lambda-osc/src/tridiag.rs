//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! eigenvalues and inverse iteration for the vectors.

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e.len() == d.len() - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiag {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(
            !d.is_empty() && e.len() + 1 == d.len(),
            "inconsistent tridiagonal sizes"
        );
        SymTridiag { d, e }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.d[0] - sigma;
        for i in 0.. {
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
            if i + 1 == self.d.len() {
                break;
            }
            q = self.d[i + 1] - sigma - self.e[i] * self.e[i] / q;
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// Eigenvalue of index `k` (ascending, zero-based) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest `k` eigenvalues.
    pub fn lowest(&self, k: usize) -> Vec<f64> {
        (0..k.min(self.len())).map(|i| self.eigenvalue(i)).collect()
    }

    /// Unit eigenvector for the eigenvalue `sigma`, signed so that its first
    /// significant component is positive.
    pub fn eigenvector(&self, sigma: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self
            .d
            .iter()
            .chain(&self.e)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        let floor = f64::EPSILON * scale;
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * ((i as f64) * 0.7).sin())
            .collect();
        let mut w = vec![0.0; n];
        let mut c = vec![0.0; n];
        for _ in 0..4 {
            // Thomas algorithm on (T - sigma I) y = x with a pivot guard.
            w[0] = self.d[0] - sigma;
            if w[0].abs() < floor {
                w[0] = floor;
            }
            c[0] = x[0];
            for i in 1..n {
                let m = self.e[i - 1] / w[i - 1];
                w[i] = self.d[i] - sigma - m * self.e[i - 1];
                if w[i].abs() < floor {
                    w[i] = floor;
                }
                c[i] = x[i] - m * c[i - 1];
            }
            x[n - 1] = c[n - 1] / w[n - 1];
            for i in (0..n - 1).rev() {
                x[i] = (c[i] - self.e[i] * x[i + 1]) / w[i];
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * big) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        x
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.d[i] * x[i];
                if i > 0 {
                    s += self.e[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.e[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        // eigenvalues 2 - 2 cos(j pi / (n + 1))
        let n = 50;
        let t = SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]);
        for j in 0..5 {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let ev = t.eigenvalue(j);
            assert!((ev - exact).abs() < 1e-13);
            let v = t.eigenvector(ev);
            let r: f64 = t
                .apply(&v)
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - ev * b).powi(2))
                .sum();
            assert!(r.sqrt() < 1e-10);
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(5.0), n);
    }
}
