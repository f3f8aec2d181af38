//! Batch processing of graph6 streams.
//!
//! A survey runs the full pipeline on every input graph: combinatorial
//! bounds, seed certificates (adjacency matrix and a weighted clique
//! cover), and, for small graphs, the spectral search. Rows are computed in
//! parallel but emitted in input order, and every random draw is keyed to
//! the input index, so output is byte-identical across runs and across
//! worker counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundReport, LowerBound, Obstruction};
use crate::constructions;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::search::{self, EstimateOptions, SearchStats};
use crate::spectra::{Certificate, VerifiedCertificate};

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub seed: u64,
    /// Search restart budget per candidate profile; 0 disables the search.
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Largest vertex count on which the search runs.
    pub search_limit: usize,
    /// Cap on multiplicity profiles tried per candidate count.
    pub max_profiles: usize,
}

impl Default for SurveyOptions {
    fn default() -> SurveyOptions {
        SurveyOptions {
            seed: 0,
            restarts: 16,
            max_sweeps: 2000,
            search_limit: 8,
            max_profiles: 50,
        }
    }
}

/// One processed input line: the bracket on `q`, the evidence behind it,
/// and the best certificate found. `exact` is set only when the bracket
/// collapses onto a verified certificate.
#[derive(Clone, Debug, Serialize)]
pub struct SurveyRow {
    pub graph6: String,
    pub vertices: usize,
    pub edges: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    /// Lower-bound rules that fired, in evaluation order.
    pub rules: Vec<String>,
    /// Candidate counts the search visited, with per-count statistics.
    pub searched: Vec<(usize, SearchStats)>,
    pub bounds: BoundReport,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveySummary {
    pub graphs: usize,
    pub exact: usize,
    pub unresolved: usize,
    /// Number of graphs per exactly determined value.
    pub by_value: BTreeMap<usize, usize>,
    /// graph6 tokens of graphs with exactly two distinct eigenvalues.
    pub two_valued: Vec<String>,
    /// graph6 tokens of graphs with `q = |V| - 1`.
    pub order_minus_one: Vec<String>,
}

fn rule_name(ob: &Obstruction) -> &'static str {
    match ob {
        Obstruction::PendantVertex { .. } => "pendant-vertex",
        Obstruction::CutEdge { .. } => "cut-edge",
        Obstruction::UniqueCommonNeighbor { .. } => "unique-common-neighbor",
        Obstruction::UnbalancedBipartition { .. } => "unbalanced-bipartition",
        Obstruction::IndependentSetCount { .. } => "independent-set-count",
    }
}

fn rule_names(lower: &LowerBound) -> Vec<String> {
    let mut out = Vec::new();
    if lower.unique_path.is_some() {
        out.push("unique-path".to_string());
    }
    if lower.tree_diameter.is_some() {
        out.push("tree-diameter".to_string());
    }
    if let Some(ob) = &lower.q2_obstruction {
        out.push(rule_name(ob).to_string());
    }
    out
}

fn survey_row(token: &str, index: usize, opts: &SurveyOptions) -> Result<SurveyRow> {
    let g = Graph::from_graph6(token)?;
    let seed = opts.seed.wrapping_add((index as u64).wrapping_mul(SEED_STRIDE));

    let report = BoundReport::compute(&g)?;
    let mut seeds = vec![constructions::adjacency_certificate(&g)?];
    match constructions::clique_cover_certificate(&g, &report.upper.cover.cliques, seed) {
        Ok(cover) => seeds.push(cover),
        Err(Error::Construction(_)) => {}
        Err(e) => return Err(e),
    }

    let search_on = opts.restarts > 0 && g.vertex_count() <= opts.search_limit;
    let (lower, upper, certificates, searched) = if search_on {
        let est = search::estimate_q(
            &g,
            &seeds,
            &EstimateOptions {
                restarts: opts.restarts,
                max_sweeps: opts.max_sweeps,
                seed,
                max_profiles: opts.max_profiles,
            },
        )?;
        (est.lower, est.upper, est.certificates, est.searched)
    } else {
        let mut upper = report.upper.value;
        let mut certs: Vec<VerifiedCertificate> = Vec::new();
        for cert in seeds {
            if cert.claimed_q() < upper {
                upper = cert.claimed_q();
                certs.clear();
            }
            if cert.claimed_q() == upper {
                certs.push(cert);
            }
        }
        (report.lower.value, upper, certs, Vec::new())
    };

    let certificate = match certificates.first() {
        Some(c) => Some(c.to_certificate()?),
        None => None,
    };
    let exact = (lower == upper && certificate.is_some()).then_some(upper);
    Ok(SurveyRow {
        graph6: g.to_graph6()?,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        lower,
        upper,
        exact,
        rules: rule_names(&report.lower),
        searched,
        bounds: report,
        certificate,
    })
}

/// Runs the pipeline over graph6 tokens (blank lines and `>>` header lines
/// are skipped), in parallel, preserving input order. A malformed line
/// aborts the survey with its line number.
pub fn run_survey(lines: &[&str], opts: &SurveyOptions) -> Result<Vec<SurveyRow>> {
    let tokens: Vec<(usize, &str)> = lines
        .iter()
        .enumerate()
        .map(|(i, line)| (i, line.trim()))
        .filter(|(_, t)| !t.is_empty() && !t.starts_with(">>"))
        .collect();
    tokens
        .par_iter()
        .enumerate()
        .map(|(index, &(line_no, token))| {
            survey_row(token, index, opts).map_err(|e| {
                Error::InvalidArgument(format!("input line {}: {e}", line_no + 1))
            })
        })
        .collect()
}

pub fn summarize(rows: &[SurveyRow]) -> SurveySummary {
    let mut by_value = BTreeMap::new();
    let mut two_valued = Vec::new();
    let mut order_minus_one = Vec::new();
    let mut exact = 0usize;
    for row in rows {
        if let Some(q) = row.exact {
            exact += 1;
            *by_value.entry(q).or_insert(0usize) += 1;
            if q == 2 {
                two_valued.push(row.graph6.clone());
            }
            if q + 1 == row.vertices {
                order_minus_one.push(row.graph6.clone());
            }
        }
    }
    SurveySummary {
        graphs: rows.len(),
        exact,
        unresolved: rows.len() - exact,
        by_value,
        two_valued,
        order_minus_one,
    }
}

pub const TSV_HEADER: &str = "graph6\tvertices\tedges\tlower\tupper\texact\trules";

impl SurveyRow {
    pub fn to_tsv(&self) -> String {
        let exact = self
            .exact
            .map_or_else(|| "-".to_string(), |q| q.to_string());
        let rules = if self.rules.is_empty() {
            "-".to_string()
        } else {
            self.rules.join(",")
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.graph6, self.vertices, self.edges, self.lower, self.upper, exact, rules
        )
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::CertificateFile(e.to_string()))
    }
}

impl SurveySummary {
    /// Comment block appended after the TSV table.
    pub fn to_tsv_block(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# graphs\t{}", self.graphs);
        let _ = writeln!(s, "# exact\t{}", self.exact);
        let _ = writeln!(s, "# unresolved\t{}", self.unresolved);
        for (q, count) in &self.by_value {
            let _ = writeln!(s, "# by-value\t{q}\t{count}");
        }
        let list = |items: &[String]| {
            if items.is_empty() {
                "-".to_string()
            } else {
                items.join(",")
            }
        };
        let _ = writeln!(s, "# two-valued\t{}", list(&self.two_valued));
        let _ = write!(s, "# order-minus-one\t{}", list(&self.order_minus_one));
        s
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::CertificateFile(e.to_string()))
    }
}
