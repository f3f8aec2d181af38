//! Cyclic Jacobi eigensolver.
//!
//! Plain full-matrix Jacobi: sweep the strict upper triangle in row order and
//! annihilate each entry with a Givens rotation. Quadratic convergence sets in
//! after a few sweeps; for the matrix sizes this crate handles (n in the tens)
//! it is accurate to close to machine precision, which is what certificate
//! checking needs. No external linear algebra is involved, so a verification
//! failure can only mean a bad certificate, not a mismatched backend.

use crate::error::{Error, Result};
use crate::spectra::SymMatrix;

const MAX_SWEEPS: usize = 30;
const OFF_DIAG_RTOL: f64 = 1e-14;

/// Eigenvalues in ascending order with matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Sweeps the solver used.
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// Computes the spectral decomposition of `m`.
    pub fn compute(m: &SymMatrix) -> Result<EigenDecomposition> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = m.n();
        let mut a = m.to_rows();
        let mut v: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        let goal = OFF_DIAG_RTOL * m.frobenius_norm();
        let mut sweeps = 0;
        while off_diag_norm(&a) > goal {
            if sweeps == MAX_SWEEPS {
                return Err(Error::SolverFailure { sweeps });
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
            sweeps += 1;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
        let values = order.iter().map(|&i| a[i][i]).collect();
        // Rows of v hold the accumulated rotations; eigenvector k is column k,
        // i.e. the k-th entry of each row.
        let vectors = order
            .iter()
            .map(|&k| (0..n).map(|i| v[i][k]).collect())
            .collect();
        Ok(EigenDecomposition {
            values,
            vectors,
            sweeps,
        })
    }

    /// `max_k ||M x_k - lambda_k x_k||_2`.
    pub fn residual(&self, m: &SymMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (lambda, x) in self.values.iter().zip(&self.vectors) {
            let mx = m.matvec(x);
            let err = mx
                .iter()
                .zip(x)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(err);
        }
        worst
    }

    /// `max_{k,l} |<x_k, x_l> - delta_kl|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, x) in self.vectors.iter().enumerate() {
            for (l, y) in self.vectors.iter().enumerate().skip(k) {
                let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                let target = f64::from(u8::from(k == l));
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

fn off_diag_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += a[i][j] * a[i][j];
        }
    }
    (2.0 * sum).sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut [Vec<f64>], v: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    // Smaller-angle root of t^2 + 2 t theta - 1 = 0, stable for large theta.
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.len();
    for k in 0..n {
        let akp = a[k][p];
        let akq = a[k][q];
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p][k];
        let aqk = a[q][k];
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    for row in v.iter_mut() {
        let rp = row[p];
        let rq = row[q];
        row[p] = c * rp - s * rq;
        row[q] = s * rp + c * rq;
    }
}
