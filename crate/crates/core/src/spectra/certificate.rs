//! Certificates: a graph, a matrix, and a claimed distinct-eigenvalue count,
//! plus the machinery that checks the claim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectra::{
    in_pattern, Clustering, EigenDecomposition, PatternCheck, SymMatrix, CLUSTER_RTOL,
    RESIDUAL_RTOL,
};

/// How a certificate's matrix was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Provenance {
    /// A closed-form construction; `name` identifies which one.
    ClosedForm { name: String },
    /// Weighted sum of clique indicator blocks over a cover of this size.
    CliqueCover { size: usize },
    /// Found by randomized alternating-projection search.
    Search { seed: u64, restarts: u32 },
    /// Supplied from outside the crate.
    External,
}

/// Serializable witness that `q(G) <= claimed_q` (with equality of the
/// distinct count for the given matrix).
///
/// Matrix entries are decimal strings with 17 significant digits, enough to
/// reproduce every `f64` bit for bit, so verification after a round trip
/// through disk sees exactly the matrix that was checked.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub graph6: String,
    pub matrix: Vec<Vec<String>>,
    pub claimed_q: usize,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifyOutcome>,
}

/// Everything the checker measured, and whether it all passed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub failures: Vec<String>,
    pub eigenvalues: Vec<f64>,
    pub distinct: usize,
    pub claimed: usize,
    pub multiplicities: Vec<usize>,
    pub residual: f64,
    pub residual_bound: f64,
    pub orthonormality: f64,
    pub orthonormality_bound: f64,
    pub pattern_ok: bool,
    pub pattern_zero_tol: f64,
    pub cluster_threshold: f64,
}

/// A certificate that has passed verification in this process. The only
/// constructor is [`VerifiedCertificate::check`], so holding one implies the
/// claim was re-derived by the internal eigensolver.
#[derive(Clone, Debug)]
pub struct VerifiedCertificate {
    graph: Graph,
    matrix: SymMatrix,
    claimed_q: usize,
    provenance: Provenance,
    outcome: VerifyOutcome,
}

/// Runs every certificate check on `(graph, matrix, claimed)` and reports the
/// measurements. Returns `Err` only when no assessment is possible (shape
/// mismatch, non-finite entries, eigensolver failure); check failures are
/// reported through [`VerifyOutcome::ok`].
pub fn assess(graph: &Graph, matrix: &SymMatrix, claimed: usize) -> Result<VerifyOutcome> {
    if !matrix.is_finite() {
        return Err(Error::NonFinite);
    }
    let pattern: PatternCheck = in_pattern(graph, matrix)?;
    let eigen = EigenDecomposition::compute(matrix)?;
    let clusters = Clustering::from_sorted(&eigen.values, CLUSTER_RTOL);
    let residual = eigen.residual(matrix);
    let residual_bound = RESIDUAL_RTOL * matrix.frobenius_norm().max(1.0);
    let orthonormality = eigen.orthonormality_defect();
    let distinct = clusters.distinct_count();

    let mut failures = Vec::new();
    for &(i, j) in &pattern.vanishing_edges {
        failures.push(format!("entry ({i}, {j}) vanishes on an edge"));
    }
    for &(i, j) in &pattern.spurious_entries {
        failures.push(format!("nonzero entry ({i}, {j}) off the edge set"));
    }
    if residual > residual_bound {
        failures.push(format!(
            "eigen residual {residual:.3e} exceeds {residual_bound:.3e}"
        ));
    }
    if orthonormality > RESIDUAL_RTOL {
        failures.push(format!(
            "orthonormality defect {orthonormality:.3e} exceeds {RESIDUAL_RTOL:.3e}"
        ));
    }
    if distinct != claimed {
        failures.push(format!(
            "matrix has {distinct} distinct eigenvalues, certificate claims {claimed}"
        ));
    }

    Ok(VerifyOutcome {
        ok: failures.is_empty(),
        failures,
        eigenvalues: eigen.values,
        distinct,
        claimed,
        multiplicities: clusters.ordered_multiplicities(),
        residual,
        residual_bound,
        orthonormality,
        orthonormality_bound: RESIDUAL_RTOL,
        pattern_ok: pattern.ok(),
        pattern_zero_tol: pattern.zero_tol,
        cluster_threshold: clusters.threshold,
    })
}

impl VerifiedCertificate {
    /// Verifies the claim and, on success, packages the witness. Any check
    /// failure is promoted to an error naming the failed checks.
    pub fn check(
        graph: Graph,
        matrix: SymMatrix,
        claimed_q: usize,
        provenance: Provenance,
    ) -> Result<VerifiedCertificate> {
        let outcome = assess(&graph, &matrix, claimed_q)?;
        if !outcome.ok {
            return Err(Error::Construction(format!(
                "certificate for {} failed verification: {}",
                graph
                    .to_graph6()
                    .unwrap_or_else(|_| format!("<{} vertices>", graph.vertex_count())),
                outcome.failures.join("; ")
            )));
        }
        Ok(VerifiedCertificate {
            graph,
            matrix,
            claimed_q,
            provenance,
            outcome,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn claimed_q(&self) -> usize {
        self.claimed_q
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn outcome(&self) -> &VerifyOutcome {
        &self.outcome
    }

    /// Converts to the serializable form. Fails if the graph does not fit the
    /// one-byte graph6 encoding (more than 62 vertices).
    pub fn to_certificate(&self) -> Result<Certificate> {
        Ok(Certificate {
            graph6: self.graph.to_graph6()?,
            matrix: self
                .matrix
                .to_rows()
                .iter()
                .map(|row| row.iter().map(|&x| format_entry(x)).collect())
                .collect(),
            claimed_q: self.claimed_q,
            provenance: self.provenance.clone(),
            verification: Some(self.outcome.clone()),
        })
    }
}

impl Certificate {
    pub fn graph(&self) -> Result<Graph> {
        Graph::from_graph6(&self.graph6)
    }

    pub fn to_sym_matrix(&self) -> Result<SymMatrix> {
        let rows = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_entry(s)).collect())
            .collect::<Result<Vec<Vec<f64>>>>()?;
        SymMatrix::from_rows(&rows)
    }

    /// Re-runs verification from scratch, ignoring any stored outcome.
    pub fn verify(&self) -> Result<VerifyOutcome> {
        let graph = self.graph()?;
        let matrix = self.to_sym_matrix()?;
        assess(&graph, &matrix, self.claimed_q)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::CertificateFile(format!("serialization failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text)
            .map_err(|e| Error::CertificateFile(format!("malformed certificate: {e}")))
    }
}

fn format_entry(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_entry(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::CertificateFile(format!("bad matrix entry {s:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite)
    }
}
