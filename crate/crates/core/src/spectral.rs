//! Dense eigensolvers for small real symmetric matrices.

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                data.push(f(a, b));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.n + b]
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize, v: f64) {
        self.data[a * self.n + b] = v;
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.data[a * self.n..(a + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.get(a, b) == self.get(b, a)))
    }

    pub fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (a, o) in out.iter_mut().enumerate() {
            *o = self.row(a).iter().zip(v).map(|(m, x)| m * x).sum();
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|a| self.get(a, a)).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|a| self.row(a).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Dominant eigenpair found by [`power_iteration`].
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Largest eigenpair of a symmetric non-negative matrix.
///
/// Iterates `v ← (M + σI)v / ‖·‖` from the uniform unit vector with
/// `σ = ‖M‖∞ / 2`. The shift moves the spectrum to the right so an
/// eigenvalue near `-λ₁` (the antiferromagnetic regime, where positive
/// couplings suppress equal neighbors) no longer competes with `λ₁`. The
/// eigenvalue is the Rayleigh quotient of `M` itself; iteration stops when
/// successive quotients differ by at most `tol·λ` and the residual
/// `‖Mv − λv‖∞` is at most `tol·λ`.
pub fn power_iteration(m: &DenseMatrix, tol: f64, max_iter: usize) -> Result<EigenPair> {
    if !(tol > 0.0) {
        return Err(Error::invalid("solver tolerance must be positive"));
    }
    let n = m.dim();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let shift = 0.5 * m.norm_inf();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;

    for it in 1..=max_iter {
        m.mul_vec(&v, &mut w);
        let rq: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        residual = v
            .iter()
            .zip(&w)
            .map(|(x, y)| (y - rq * x).abs())
            .fold(0.0, f64::max);
        let scale = rq.abs().max(f64::MIN_POSITIVE);
        if (rq - prev).abs() <= tol * scale && residual <= tol * scale {
            return Ok(EigenPair {
                value: rq,
                vector: v,
                residual,
                iterations: it,
            });
        }
        prev = rq;

        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi += shift * vi;
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NoConvergence {
                iterations: it,
                residual,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// unsorted.
///
/// A sweep visits every off-diagonal pair once; iteration ends when the
/// off-diagonal Frobenius norm drops below `1e-15` of the matrix norm or
/// below the smallest normal number.
pub fn jacobi_eigenvalues(m: &DenseMatrix, max_sweeps: usize) -> Result<Vec<f64>> {
    let n = m.dim();
    let mut a = m.clone();
    let total: f64 = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = (1e-15 * total).max(f64::MIN_POSITIVE);

    let off_norm = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * a.get(p, q) * a.get(p, q);
            }
        }
        s.sqrt()
    };

    for _ in 0..max_sweeps {
        if off_norm(&a) <= threshold {
            return Ok((0..n).map(|k| a.get(k, k)).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp);
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq);
                }
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
            }
        }
    }
    if off_norm(&a) <= threshold {
        return Ok((0..n).map(|k| a.get(k, k)).collect());
    }
    Err(Error::NoConvergence {
        iterations: max_sweeps,
        residual: off_norm(&a),
    })
}
