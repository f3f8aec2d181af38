//! Symmetric matrices, their spectra, and certified witnesses.
//!
//! A *certificate* pairs a graph with a matrix that is claimed to lie in the
//! graph's off-diagonal zero pattern and to attain a given number of distinct
//! eigenvalues. Nothing in this crate hands out a certificate without
//! re-checking it: [`Certificate::verify`] runs the eigensolver and the
//! pattern test, and [`VerifiedCertificate`] can only be obtained from a
//! verification that passed.

mod certificate;
mod jacobi;

pub use certificate::{Certificate, Provenance, VerifiedCertificate, VerifyOutcome};
pub use jacobi::EigenDecomposition;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relative gap below which two adjacent eigenvalues are considered equal.
pub const CLUSTER_RTOL: f64 = 1e-6;
/// Relative threshold below which a matrix entry counts as structurally zero.
pub const PATTERN_RTOL: f64 = 1e-8;
/// Relative bound both for the eigen residual and for loss of orthonormality.
pub const RESIDUAL_RTOL: f64 = 1e-10;

/// A dense real symmetric matrix. Only the upper triangle is stored, so the
/// symmetry is structural rather than a property to be checked.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    /// Row-major upper triangle: `(i, j)` with `i <= j` at
    /// `i * n - i * (i - 1) / 2 + (j - i)`.
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from `f(i, j)`, consulted only for `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from full rows, requiring exact symmetry and square shape.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite);
                }
                if j < i && rows[j][i] != x {
                    return Err(Error::DimensionMismatch(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(SymMatrix::from_fn(n, |i, j| rows[i][j]))
    }

    /// The adjacency matrix of `g`.
    pub fn adjacency(g: &Graph) -> Self {
        SymMatrix::from_fn(g.vertex_count(), |i, j| {
            if g.has_edge(i, j) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// The combinatorial Laplacian of `g`.
    pub fn laplacian(g: &Graph) -> Self {
        SymMatrix::from_fn(g.vertex_count(), |i, j| {
            if i == j {
                g.degree(i) as f64
            } else if g.has_edge(i, j) {
                -1.0
            } else {
                0.0
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.idx(i, j);
        self.upper[k] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let x = self.get(i, j);
                sum += x * x;
            }
        }
        sum.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|x| x.is_finite())
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> Self {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// `self + c * I`.
    pub fn add_diag(&self, c: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, m.get(i, i) + c);
        }
        m
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `self * self`; the square of a symmetric matrix is symmetric.
    pub fn square(&self) -> Self {
        SymMatrix::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * self.get(k, j)).sum()
        })
    }

    /// Assembles `[[a, x], [x, d]]` from equally sized blocks.
    pub fn block2(a: &SymMatrix, x: &SymMatrix, d: &SymMatrix) -> Self {
        let n = a.n;
        assert!(x.n == n && d.n == n);
        SymMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.get(i, j),
            (true, false) => x.get(i, j - n),
            (false, false) => d.get(i - n, j - n),
            (false, true) => unreachable!("from_fn only visits i <= j"),
        })
    }

    /// Appends one row and column: `[[self, b], [b^T, corner]]`.
    pub fn border(&self, b: &[f64], corner: f64) -> Self {
        assert_eq!(b.len(), self.n);
        SymMatrix::from_fn(self.n + 1, |i, j| {
            if j < self.n {
                self.get(i, j)
            } else if i < self.n {
                b[i]
            } else {
                corner
            }
        })
    }

    /// Direct sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &SymMatrix) -> Self {
        let n = self.n;
        SymMatrix::from_fn(n + other.n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if i >= n {
                other.get(i - n, j - n)
            } else {
                0.0
            }
        })
    }

    /// Maps the spectrum affinely so that `lambda1 -> mu1` and
    /// `lambda2 -> mu2`; returns `alpha * self + beta * I`.
    pub fn affine_normalize(&self, lambda1: f64, lambda2: f64, mu1: f64, mu2: f64) -> Result<Self> {
        let span = lambda1 - lambda2;
        if span == 0.0 || !span.is_finite() {
            return Err(Error::InvalidArgument(
                "affine normalization needs two distinct source eigenvalues".into(),
            ));
        }
        let alpha = (mu1 - mu2) / span;
        let beta = mu1 - alpha * lambda1;
        Ok(self.scaled(alpha).add_diag(beta))
    }
}

/// Result of grouping a sorted eigenvalue list into numerically equal runs.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Clustering {
    /// `(representative value, multiplicity)` in ascending value order. The
    /// representative is the mean of the run.
    pub groups: Vec<(f64, usize)>,
    /// Absolute gap threshold that was applied.
    pub threshold: f64,
}

impl Clustering {
    /// Groups `values` (ascending) by splitting at gaps larger than
    /// `rtol * max(1, spread)`.
    pub fn from_sorted(values: &[f64], rtol: f64) -> Self {
        if values.is_empty() {
            return Clustering {
                groups: Vec::new(),
                threshold: rtol,
            };
        }
        let spread = values[values.len() - 1] - values[0];
        let threshold = rtol * spread.max(1.0);
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=values.len() {
            if i == values.len() || values[i] - values[i - 1] > threshold {
                let run = &values[start..i];
                let mean = run.iter().sum::<f64>() / run.len() as f64;
                groups.push((mean, run.len()));
                start = i;
            }
        }
        Clustering { groups, threshold }
    }

    pub fn distinct_count(&self) -> usize {
        self.groups.len()
    }

    /// Multiplicities in ascending eigenvalue order.
    pub fn ordered_multiplicities(&self) -> Vec<usize> {
        self.groups.iter().map(|&(_, m)| m).collect()
    }

    /// Multiplicities sorted descending.
    pub fn multiplicity_profile(&self) -> Vec<usize> {
        let mut p = self.ordered_multiplicities();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }
}

/// Result of testing whether a matrix lies in the pattern of a graph.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PatternCheck {
    /// Edge positions whose entry is numerically zero.
    pub vanishing_edges: Vec<(usize, usize)>,
    /// Non-edge off-diagonal positions whose entry is numerically nonzero.
    pub spurious_entries: Vec<(usize, usize)>,
    /// Absolute threshold separating zero from nonzero.
    pub zero_tol: f64,
}

impl PatternCheck {
    pub fn ok(&self) -> bool {
        self.vanishing_edges.is_empty() && self.spurious_entries.is_empty()
    }
}

/// Tests whether the off-diagonal support of `m` matches the edges of `g`.
///
/// Entries with magnitude at most `PATTERN_RTOL * max(1, max |entry|)` count
/// as zero; diagonal entries are unconstrained.
pub fn in_pattern(g: &Graph, m: &SymMatrix) -> Result<PatternCheck> {
    let n = g.vertex_count();
    if m.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but the graph has {n} vertices",
            m.n(),
            m.n()
        )));
    }
    let zero_tol = PATTERN_RTOL * m.max_abs().max(1.0);
    let mut vanishing = Vec::new();
    let mut spurious = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let present = m.get(i, j).abs() > zero_tol;
            match (g.has_edge(i, j), present) {
                (true, false) => vanishing.push((i, j)),
                (false, true) => spurious.push((i, j)),
                _ => {}
            }
        }
    }
    Ok(PatternCheck {
        vanishing_edges: vanishing,
        spurious_entries: spurious,
        zero_tol,
    })
}
