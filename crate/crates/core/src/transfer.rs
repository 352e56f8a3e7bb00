//! Transfer matrix of the periodic chain and its spectrum.
//!
//! Entry `(a, b)` of the true matrix is `exp(x_ab)` with
//!
//! ```text
//! x_ab = -β·[ J_a·δ(a,b) + D·(d_a + d_b)/2 ]
//! ```
//!
//! so that `Z_N = Tr M^N`. Large `β` with negative couplings pushes `x_ab`
//! far beyond the range of `exp`, so the matrix is stored as
//! `entries·exp(log_scale)` with `log_scale = max x_ab` and every stored
//! entry in `(0, 1]`.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::{jacobi_eigenvalues, power_iteration, DenseMatrix};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-13;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 100_000;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    entries: DenseMatrix,
    log_scale: f64,
}

impl TransferMatrix {
    pub fn q(&self) -> usize {
        self.entries.dim()
    }

    /// Scaled entries; the true matrix is `entries · exp(log_scale)`.
    pub fn entries(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Same scaled entries, different bookkeeping scale. Multiplies the
    /// represented matrix by `exp(delta)`.
    pub fn shifted_scale(&self, delta: f64) -> Self {
        Self {
            entries: self.entries.clone(),
            log_scale: self.log_scale + delta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominantEigen {
    /// `log λ₁` of the true (unscaled) matrix.
    pub value_log: f64,
    /// `λ₁` of the scaled matrix.
    pub value_scaled: f64,
    /// Unit Perron vector.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn raw_exponent(params: &ModelParams, field: f64, a: usize, b: usize) -> f64 {
    let d = params.levels();
    let bond = if a == b { params.couplings()[a] } else { 0.0 };
    -params.beta() * (bond + field * 0.5 * (d[a] + d[b]))
}

fn exponents(params: &ModelParams, field: f64) -> Result<DenseMatrix> {
    let q = params.q();
    let mut upper = vec![0.0; q * q];
    for a in 0..q {
        for b in a..q {
            let x = raw_exponent(params, field, a, b);
            if !x.is_finite() {
                return Err(Error::invalid(format!(
                    "transfer-matrix exponent ({a},{b}) is not finite"
                )));
            }
            upper[a * q + b] = x;
        }
    }
    // each unordered pair evaluated once, mirrored
    Ok(DenseMatrix::from_fn(q, |a, b| {
        upper[a.min(b) * q + a.max(b)]
    }))
}

/// Transfer matrix at the model's own field, scaled so its largest entry is 1.
pub fn build_matrix(params: &ModelParams) -> Result<TransferMatrix> {
    let x = exponents(params, params.field())?;
    let q = x.dim();
    let log_scale = (0..q)
        .flat_map(|a| x.row(a).iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TransferMatrix {
        entries: DenseMatrix::from_fn(q, |a, b| (x.get(a, b) - log_scale).exp()),
        log_scale,
    })
}

/// Transfer matrix at field `D + offset`, expressed with a caller-chosen
/// `log_scale`. Finite-difference stencils use one scale for every
/// displaced matrix so that differences of scaled eigenvalues are scaled
/// differences of true ones.
pub fn build_matrix_offset(
    params: &ModelParams,
    offset: f64,
    log_scale: f64,
) -> Result<TransferMatrix> {
    let x = exponents(params, params.field() + offset)?;
    let entries = DenseMatrix::from_fn(x.dim(), |a, b| (x.get(a, b) - log_scale).exp());
    if let Some(a) = (0..x.dim()).find(|&a| entries.row(a).iter().any(|v| !v.is_finite())) {
        return Err(Error::invalid(format!(
            "displaced transfer matrix overflows in row {a}; reduce the field step"
        )));
    }
    Ok(TransferMatrix { entries, log_scale })
}

/// Largest eigenvalue and Perron vector by shifted power iteration.
pub fn dominant_eigenvalue(m: &TransferMatrix, tol: f64, max_iter: usize) -> Result<DominantEigen> {
    let pair = power_iteration(&m.entries, tol, max_iter)?;
    if !(pair.value > 0.0) {
        return Err(Error::NoConvergence {
            iterations: pair.iterations,
            residual: pair.residual,
        });
    }
    Ok(DominantEigen {
        value_log: pair.value.ln() + m.log_scale,
        value_scaled: pair.value,
        vector: pair.vector,
        residual: pair.residual,
        iterations: pair.iterations,
    })
}

/// `log Z_N = log Tr M^N` of the periodic ring from the full spectrum.
///
/// With scaled eigenvalues `μᵢ` and `μ₁ = max |μᵢ| > 0` (Perron root),
/// `log Z_N = N·s + N·log μ₁ + log(1 + Σᵢ₍≠₁₎ sign(μᵢ)^N·(|μᵢ|/μ₁)^N)`.
pub fn log_partition_function(params: &ModelParams, n_sites: usize) -> Result<f64> {
    if n_sites == 0 {
        return Err(Error::invalid("n_sites must be at least 1"));
    }
    let m = build_matrix(params)?;
    let mut spectrum = jacobi_eigenvalues(&m.entries, JACOBI_MAX_SWEEPS)?;
    spectrum.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let top = spectrum[0];
    if !(top > 0.0) {
        return Err(Error::NoConvergence {
            iterations: JACOBI_MAX_SWEEPS,
            residual: top,
        });
    }
    let n = n_sites as i32;
    let rest: f64 = spectrum[1..].iter().map(|&mu| (mu / top).powi(n)).sum();
    let nf = n_sites as f64;
    Ok(nf * m.log_scale + nf * top.ln() + rest.ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{log_partition_function_bruteforce, CouplingProfile};

    fn params(j: &[f64], beta: f64, field: f64) -> ModelParams {
        ModelParams::new(CouplingProfile::new(j.to_vec()).unwrap(), beta)
            .unwrap()
            .with_field(field)
            .unwrap()
    }

    fn true_entry(m: &TransferMatrix, a: usize, b: usize) -> f64 {
        m.entries().get(a, b) * m.log_scale().exp()
    }

    #[test]
    fn beta_zero_is_all_ones() {
        let m = build_matrix(&params(&[1.0, -3.0, 2.0, 0.5], 0.0, 0.7)).unwrap();
        assert_eq!(m.log_scale(), 0.0);
        for a in 0..4 {
            assert!(m.entries().row(a).iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn q2_matches_closed_matrix() {
        let (b, j0, j1, d) = (0.8, 0.4, -1.1, 0.3);
        let m = build_matrix(&params(&[j0, j1], b, d)).unwrap();
        let want = [
            [(-b * j0).exp(), (-b * d / 2.0).exp()],
            [(-b * d / 2.0).exp(), (-b * j1 - b * d).exp()],
        ];
        for (a, row) in want.iter().enumerate() {
            for (c, &w) in row.iter().enumerate() {
                let got = true_entry(&m, a, c);
                assert!((got - w).abs() < 1e-14 * w, "{a}{c}");
            }
        }
    }

    #[test]
    fn q3_case_one_matrix_in_x_y() {
        let (b, j, d) = (0.9, 0.6, 0.25);
        let m = build_matrix(&params(&[0.0, 0.0, j], b, d)).unwrap();
        let x = (-b * j).exp();
        let y = (-b * d / 2.0).exp();
        let want = [
            [1.0, y, y * y],
            [y, y * y, y.powi(3)],
            [y * y, y.powi(3), x * y.powi(4)],
        ];
        for (a, row) in want.iter().enumerate() {
            for (c, &w) in row.iter().enumerate() {
                let got = true_entry(&m, a, c);
                assert!((got - w).abs() < 1e-14, "{a}{c}");
            }
        }
    }

    #[test]
    fn matrix_is_exactly_symmetric_and_scaled() {
        let m = build_matrix(&params(&[-1.3, 0.2, 2.5, -0.7, 0.0], 2.2, -0.4)).unwrap();
        assert!(m.entries().is_symmetric());
        let max = (0..5)
            .flat_map(|a| m.entries().row(a).to_vec())
            .fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }

    #[test]
    fn non_finite_exponent_is_rejected() {
        let p = params(&[1e300, 0.0], 1e10, 0.0);
        assert!(matches!(build_matrix(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn dominant_eigenvalue_all_ones() {
        let m = build_matrix(&params(&[0.3, 0.1, -0.2], 0.0, 0.0)).unwrap();
        let e = dominant_eigenvalue(&m, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!((e.value_scaled - 3.0).abs() < 1e-14);
        let u = 1.0 / 3f64.sqrt();
        assert!(e.vector.iter().all(|v| (v - u).abs() < 1e-15));
    }

    #[test]
    fn dominant_eigenvalue_q2_formula() {
        for &(b, j0, j1) in &[(1.0, 1.0, -1.0), (0.4, 2.0, 0.5), (3.0, -0.2, 0.7)] {
            let m = build_matrix(&params(&[j0, j1], b, 0.0)).unwrap();
            let e = dominant_eigenvalue(&m, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
            let (e0, e1) = ((-b * j0).exp(), (-b * j1).exp());
            let theta =
                4.0 + (-2.0 * b * j0).exp() + (-2.0 * b * j1).exp() - 2.0 * (-b * (j0 + j1)).exp();
            let want = 0.5 * (e0 + e1 + theta.sqrt());
            assert!((e.value_log.exp() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn dominant_eigenvalue_q3_case_one_formula() {
        for &(b, j) in &[(1.0, 1.0), (0.5, -2.0), (4.0, 0.3)] {
            let m = build_matrix(&params(&[0.0, 0.0, j], b, 0.0)).unwrap();
            let e = dominant_eigenvalue(&m, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
            let x: f64 = (-b * j).exp();
            let want = 0.5 * (2.0 + x + (12.0 - 4.0 * x + x * x).sqrt());
            assert!((e.value_log.exp() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn huge_exponents_stay_finite() {
        let j: Vec<f64> = (0..10).map(|k| -((k + 1) as f64)).collect();
        let m = build_matrix(&params(&j, 200.0, 0.0)).unwrap();
        assert_eq!(m.log_scale(), 2000.0);
        let e = dominant_eigenvalue(&m, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAX_ITER).unwrap();
        assert!(e.value_log.is_finite());
        assert!((e.value_log - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn log_partition_function_beta_zero() {
        let p = params(&[0.5, -0.5, 1.0], 0.0, 0.0);
        for n in 1..=7 {
            let got = log_partition_function(&p, n).unwrap();
            assert!((got - n as f64 * 3f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn log_partition_function_matches_enumeration() {
        let p = params(&[1.0, -1.0], 0.7, 0.3);
        let a = log_partition_function(&p, 3).unwrap();
        let b = log_partition_function_bruteforce(&p, 3).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));

        let p = params(&[-1.62, 0.41, 1.93, -0.08], 1.3, -0.5);
        let a = log_partition_function(&p, 6).unwrap();
        let b = log_partition_function_bruteforce(&p, 6).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
    }

    #[test]
    fn odd_ring_with_negative_eigenvalue() {
        // positive couplings at large beta give a strongly negative second eigenvalue
        let p = params(&[2.0, 1.5, 1.0], 3.0, 0.0);
        for n in [3, 5, 7] {
            let a = log_partition_function(&p, n).unwrap();
            let b = log_partition_function_bruteforce(&p, n).unwrap();
            assert!(
                (a - b).abs() <= 1e-10 * b.abs().max(1.0),
                "n = {n}: {a} vs {b}"
            );
        }
    }
}
