//! Randomized alternating-projection search for matrices with few distinct
//! eigenvalues inside a prescribed off-diagonal zero pattern.
//!
//! The search alternates between two projections: replace the spectrum by the
//! target spectrum (keeping the eigenbasis), then force the off-diagonal
//! pattern back onto the graph. A fixed point of both is a witness matrix.
//! Failure proves nothing; success is always re-verified through
//! [`VerifiedCertificate::check`].

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectra::{EigenDecomposition, Provenance, SymMatrix, VerifiedCertificate};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_MAX_SWEEPS: usize = 5000;
/// Convergence test: max-norm distance between the two projections.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Smallest magnitude allowed on an edge entry during pattern projection.
pub const DEFAULT_MIN_EDGE: f64 = 1e-3;

/// What the spectrum of the sought matrix should look like.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchTarget {
    /// Eigenvalues in `{-1, +1}`, i.e. an involution; two distinct values.
    Involution,
    /// Prescribed distinct values (strictly decreasing) with multiplicities.
    Profile {
        values: Vec<f64>,
        multiplicities: Vec<usize>,
    },
}

impl SearchTarget {
    /// Number of distinct eigenvalues the target prescribes.
    pub fn classes(&self) -> usize {
        match self {
            SearchTarget::Involution => 2,
            SearchTarget::Profile { values, .. } => values.len(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            SearchTarget::Involution => {
                if n < 2 {
                    return Err(Error::InvalidArgument(
                        "involution search needs at least two vertices".into(),
                    ));
                }
            }
            SearchTarget::Profile {
                values,
                multiplicities,
            } => {
                if values.is_empty() || values.len() != multiplicities.len() {
                    return Err(Error::InvalidArgument(
                        "profile needs matching nonempty value and multiplicity lists".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite);
                }
                if values.windows(2).any(|w| w[0] <= w[1]) {
                    return Err(Error::InvalidArgument(
                        "profile values must be strictly decreasing".into(),
                    ));
                }
                if multiplicities.iter().any(|&m| m == 0)
                    || multiplicities.iter().sum::<usize>() != n
                {
                    return Err(Error::InvalidArgument(format!(
                        "multiplicities must be positive and sum to {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Target spectrum in ascending order, one entry per dimension.
    fn ascending_spectrum(&self, n: usize) -> Option<Vec<f64>> {
        match self {
            SearchTarget::Involution => None,
            SearchTarget::Profile {
                values,
                multiplicities,
            } => {
                let mut out = Vec::with_capacity(n);
                for (v, m) in values.iter().zip(multiplicities).rev() {
                    out.extend(std::iter::repeat(*v).take(*m));
                }
                Some(out)
            }
        }
    }
}

/// A fully specified search instance. Identical problems (including `seed`)
/// produce identical outcomes; restarts are tried in ascending index order
/// and the first success wins, which matches the lowest-index success under
/// any parallel schedule.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub graph: Graph,
    pub target: SearchTarget,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
    /// Edge entries smaller than this in magnitude are pushed back to it.
    pub min_edge: f64,
    pub tolerance: f64,
}

impl SearchProblem {
    pub fn involution(graph: Graph) -> SearchProblem {
        SearchProblem {
            graph,
            target: SearchTarget::Involution,
            restarts: DEFAULT_RESTARTS,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            seed: 0,
            min_edge: DEFAULT_MIN_EDGE,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_profile(graph: Graph, values: Vec<f64>, multiplicities: Vec<usize>) -> SearchProblem {
        SearchProblem {
            target: SearchTarget::Profile {
                values,
                multiplicities,
            },
            ..SearchProblem::involution(graph)
        }
    }

    pub fn seeded(mut self, seed: u64) -> SearchProblem {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, restarts: usize, max_sweeps: usize) -> SearchProblem {
        self.restarts = restarts;
        self.max_sweeps = max_sweeps;
        self
    }
}

/// Work performed by a search run, whether or not it succeeded.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub restarts_tried: usize,
    /// Index of the restart that converged, if any.
    pub success_restart: Option<usize>,
    pub total_sweeps: usize,
    /// Smallest projection gap seen anywhere in the run.
    pub best_gap: f64,
}

/// Outcome of a search: maybe a verified witness, always statistics.
#[derive(Debug)]
pub struct SearchOutcome {
    pub certificate: Option<VerifiedCertificate>,
    pub stats: SearchStats,
}

/// Searches for an involution in the pattern of `problem.graph`. A verified
/// result certifies `q = 2` for the graph.
pub fn find_involution(problem: &SearchProblem) -> Result<SearchOutcome> {
    if problem.graph.edge_count() == 0 {
        return Err(Error::InvalidArgument(
            "involution search needs at least one edge".into(),
        ));
    }
    run(problem)
}

/// Searches for a matrix whose spectrum matches the profile in
/// `problem.target` (which must be `SearchTarget::Profile`).
pub fn find_with_multiplicities(problem: &SearchProblem) -> Result<SearchOutcome> {
    if matches!(problem.target, SearchTarget::Involution) {
        return Err(Error::InvalidArgument(
            "find_with_multiplicities needs a profile target".into(),
        ));
    }
    run(problem)
}

fn run(problem: &SearchProblem) -> Result<SearchOutcome> {
    let g = &problem.graph;
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument("search needs a nonempty graph".into()));
    }
    problem.target.validate(n)?;
    if !(problem.tolerance > 0.0) || !(problem.min_edge > 0.0) {
        return Err(Error::InvalidArgument(
            "search tolerances must be positive".into(),
        ));
    }

    let ascending = problem.target.ascending_spectrum(n);
    let mut stats = SearchStats {
        restarts_tried: 0,
        success_restart: None,
        total_sweeps: 0,
        best_gap: f64::INFINITY,
    };

    for restart in 0..problem.restarts {
        stats.restarts_tried = restart + 1;
        let mut rng = restart_rng(problem.seed, restart);
        match attempt(g, ascending.as_deref(), problem, &mut rng, &mut stats)? {
            Some(matrix) => {
                let provenance = Provenance::Search {
                    seed: problem.seed,
                    restarts: restart as u32,
                };
                match VerifiedCertificate::check(
                    g.clone(),
                    matrix,
                    problem.target.classes(),
                    provenance,
                ) {
                    Ok(cert) => {
                        stats.success_restart = Some(restart);
                        return Ok(SearchOutcome {
                            certificate: Some(cert),
                            stats,
                        });
                    }
                    // A borderline fixed point can fail strict verification;
                    // that restart just counts as a miss.
                    Err(Error::Construction(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            None => continue,
        }
    }

    Ok(SearchOutcome {
        certificate: None,
        stats,
    })
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One restart of the alternating projection. Returns the converged matrix,
/// or `None` when the sweep budget runs out or the eigensolver gives up.
fn attempt(
    g: &Graph,
    ascending: Option<&[f64]>,
    problem: &SearchProblem,
    rng: &mut ChaCha8Rng,
    stats: &mut SearchStats,
) -> Result<Option<SymMatrix>> {
    let mut a = random_pattern_matrix(g, rng);
    let mut best: Option<(f64, SymMatrix)> = None;
    for _ in 0..problem.max_sweeps {
        stats.total_sweeps += 1;
        let eig = match EigenDecomposition::compute(&a) {
            Ok(e) => e,
            Err(Error::SolverFailure { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let spectral = reassemble(&eig, ascending);
        let (projected, gap) = pattern_project(g, &spectral, problem.min_edge);
        a = projected;
        if gap < stats.best_gap {
            stats.best_gap = gap;
        }
        if gap <= problem.tolerance {
            return Ok(Some(a));
        }
        if best.as_ref().is_none_or(|(b, _)| gap < *b) {
            best = Some((gap, a.clone()));
        }
    }
    // A stalled restart that got close is handed to the quadratic polish,
    // then subjected to the same projection-gap acceptance as any iterate.
    if let (Some(targets), Some((near, stalled))) = (ascending, best) {
        if near <= POLISH_GAP_THRESHOLD {
            if let Some(polished) = polish_spectrum(g, &stalled, targets, problem.min_edge) {
                stats.total_sweeps += 1;
                let eig = match EigenDecomposition::compute(&polished) {
                    Ok(e) => e,
                    Err(Error::SolverFailure { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let spectral = reassemble(&eig, Some(targets));
                let (projected, gap) = pattern_project(g, &spectral, problem.min_edge);
                if gap < stats.best_gap {
                    stats.best_gap = gap;
                }
                if gap <= problem.tolerance {
                    return Ok(Some(projected));
                }
            }
        }
    }
    Ok(None)
}

/// Projection distance below which the quadratic polish takes over from a
/// stalled alternating projection.
const POLISH_GAP_THRESHOLD: f64 = 1e-2;
const POLISH_MAX_ITERS: usize = 60;
/// Scaled eigenvalue residual the polish must reach to report success.
const POLISH_RESIDUAL_STOP: f64 = 1e-13;

/// Local refinement for profile targets. The alternating projection slows
/// from geometric to power-law convergence when the isospectral manifold
/// meets the pattern space at a small angle, which repeated target values
/// force routinely. Once a restart has stalled close to the intersection,
/// this switches to damped Gauss-Newton on the scaled eigenvalue residuals
/// over the free pattern entries (diagonal plus edges), whose quadratic
/// local rate finishes what the projection started. Steps that would push
/// an edge magnitude below `min_edge` are rejected, so the result cannot
/// drift toward a degenerate limit outside the pattern. Returns a refined
/// in-pattern matrix only on full convergence; the caller re-applies the
/// projection-gap acceptance test, so a failed polish can never manufacture
/// a witness.
fn polish_spectrum(
    g: &Graph,
    start: &SymMatrix,
    ascending: &[f64],
    min_edge: f64,
) -> Option<SymMatrix> {
    let n = g.vertex_count();
    let edges = g.edges();
    let npar = n + edges.len();
    let scale = ascending.iter().fold(1.0f64, |s, t| s.max(t.abs()));

    let rebuild = |theta: &[f64]| {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, theta[i]);
        }
        for (k, &(u, v)) in edges.iter().enumerate() {
            m.set(u, v, theta[n + k]);
        }
        m
    };
    let evaluate = |m: &SymMatrix| -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        let eig = EigenDecomposition::compute(m).ok()?;
        let mut resid = vec![0.0f64; n];
        let mut jac = vec![vec![0.0f64; npar]; n];
        for i in 0..n {
            resid[i] = (eig.values[i] - ascending[i]) / scale;
            let vec_i = &eig.vectors[i];
            let row = &mut jac[i];
            for (slot, &component) in row.iter_mut().zip(vec_i) {
                *slot = component * component / scale;
            }
            for (k, &(u, v)) in edges.iter().enumerate() {
                row[n + k] = 2.0 * vec_i[u] * vec_i[v] / scale;
            }
        }
        Some((resid, jac))
    };
    let max_abs = |r: &[f64]| r.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let norm2 = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();

    let mut theta: Vec<f64> = (0..n)
        .map(|i| start.get(i, i))
        .chain(edges.iter().map(|&(u, v)| start.get(u, v)))
        .collect();
    let (mut resid, mut jac) = evaluate(&rebuild(&theta))?;
    let mut cost = norm2(&resid);
    let mut mu = 1e-8f64;
    for _ in 0..POLISH_MAX_ITERS {
        if max_abs(&resid) <= POLISH_RESIDUAL_STOP {
            return Some(rebuild(&theta));
        }
        let mut gram = vec![vec![0.0f64; n]; n];
        for (i, ri) in jac.iter().enumerate() {
            for (j, rj) in jac.iter().enumerate().take(i + 1) {
                let dot = ri.iter().zip(rj).map(|(a, b)| a * b).sum::<f64>();
                gram[i][j] = dot;
                gram[j][i] = dot;
            }
        }
        let mut accepted = false;
        for _ in 0..12 {
            let mut ridged = gram.clone();
            for (i, row) in ridged.iter_mut().enumerate() {
                row[i] += mu;
            }
            let Some(y) = solve_dense(ridged, resid.clone()) else {
                mu = (mu * 10.0).min(1e8);
                continue;
            };
            let candidate: Vec<f64> = theta
                .iter()
                .enumerate()
                .map(|(idx, &t)| {
                    let step: f64 = jac.iter().zip(&y).map(|(row, yi)| row[idx] * yi).sum();
                    t - step
                })
                .collect();
            if candidate[n..].iter().any(|b| b.abs() < min_edge) {
                mu = (mu * 10.0).min(1e8);
                continue;
            }
            let Some((cr, cj)) = evaluate(&rebuild(&candidate)) else {
                mu = (mu * 10.0).min(1e8);
                continue;
            };
            let ccost = norm2(&cr);
            if ccost < cost {
                theta = candidate;
                resid = cr;
                jac = cj;
                cost = ccost;
                mu = (mu / 3.0).max(1e-14);
                accepted = true;
                break;
            }
            mu = (mu * 10.0).min(1e8);
        }
        if !accepted {
            return None;
        }
    }
    (max_abs(&resid) <= POLISH_RESIDUAL_STOP).then(|| rebuild(&theta))
}

/// Gaussian elimination with partial pivoting; `None` on a singular system.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let l = b.len();
    for col in 0..l {
        let piv = (col..l).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].abs() > 1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..l {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..l {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..l).rev() {
        let mut sum = b[col];
        for k in col + 1..l {
            sum -= a[col][k] * b[k];
        }
        b[col] = sum / a[col][col];
    }
    Some(b)
}

fn random_pattern_matrix(g: &Graph, rng: &mut ChaCha8Rng) -> SymMatrix {
    let n = g.vertex_count();
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, rng.gen_range(-1.0..1.0));
    }
    for &(u, v) in g.edges() {
        m.set(u, v, rng.gen_range(-1.0..1.0));
    }
    m
}

/// Keeps the eigenbasis and replaces eigenvalues: by their signs (ties at
/// zero go to `+1`) for the involution target, by the sorted target spectrum
/// otherwise.
fn reassemble(eig: &EigenDecomposition, ascending: Option<&[f64]>) -> SymMatrix {
    let n = eig.values.len();
    let targets: Vec<f64> = match ascending {
        Some(t) => t.to_vec(),
        None => eig
            .values
            .iter()
            .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
            .collect(),
    };
    SymMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| targets[k] * eig.vectors[k][i] * eig.vectors[k][j])
            .sum()
    })
}

/// Projects onto the pattern: non-edges are zeroed, edge entries keep their
/// sign but are pushed away from zero to at least `min_edge` (an exact zero
/// becomes `+min_edge`), the diagonal is free. Returns the projected matrix
/// and the max-norm distance moved.
fn pattern_project(g: &Graph, m: &SymMatrix, min_edge: f64) -> (SymMatrix, f64) {
    let n = m.n();
    let mut out = SymMatrix::zeros(n);
    let mut gap = 0.0f64;
    for i in 0..n {
        out.set(i, i, m.get(i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let value = m.get(i, j);
            let projected = if g.has_edge(i, j) {
                if value.abs() >= min_edge {
                    value
                } else if value == 0.0 {
                    min_edge
                } else {
                    value.signum() * min_edge
                }
            } else {
                0.0
            };
            out.set(i, j, projected);
            gap = gap.max((value - projected).abs());
        }
    }
    (out, gap)
}

const JACOBI_PAIR_MAX_ITERS: usize = 120;
/// Couplings may not cross this magnitude during the iteration.
const JACOBI_PAIR_STEP_FLOOR: f64 = 1e-3;
/// Accepted solutions must keep every coupling at least this large.
const JACOBI_PAIR_ACCEPT_FLOOR: f64 = 1e-2;
/// Scaled eigenvalue residual at which a block pair counts as solved.
const JACOBI_PAIR_RESIDUAL_STOP: f64 = 1e-13;

/// Searches for a matrix in an even cycle's pattern whose spectrum consists
/// of the profile's values, each with multiplicity exactly two.
///
/// Alternating projection stalls on such targets: the isospectral manifold
/// meets the pattern space tangentially wherever eigenvalues repeat, and
/// random iterates drift toward degenerate limits in which an edge entry
/// vanishes and the cycle falls apart into two paths. This routine removes
/// the degeneracy with symmetry instead. A cycle matrix invariant under the
/// reflection `i -> n-1-i`, which fixes no vertex but maps two opposite
/// edges to themselves, block-diagonalizes into two Jacobi matrices of size
/// `n/2` that share every interior entry and differ only in their corner
/// diagonals, by plus or minus the weights of the two reflection-fixed
/// edges. When both blocks have the same spectrum every eigenvalue of the
/// cycle matrix doubles; and because Jacobi spectra are simple, matching
/// them is a smooth system that a damped Gauss-Newton iteration solves
/// quadratically from random starts. For this routine `best_gap` and
/// `total_sweeps` report the smallest scaled eigenvalue residual and the
/// iteration count. Successes are re-verified through
/// [`VerifiedCertificate::check`] like every other search result.
pub fn find_doubled_cycle_spectrum(problem: &SearchProblem) -> Result<SearchOutcome> {
    let g = &problem.graph;
    let n = g.vertex_count();
    let SearchTarget::Profile {
        values,
        multiplicities,
    } = &problem.target
    else {
        return Err(Error::InvalidArgument(
            "doubled-spectrum search needs a profile target".into(),
        ));
    };
    problem.target.validate(n)?;
    if multiplicities.iter().any(|&m| m != 2) {
        return Err(Error::InvalidArgument(
            "doubled-spectrum search needs every multiplicity equal to two".into(),
        ));
    }
    if n < 4 || n % 2 != 0 || g.edge_count() != n || !(0..n).all(|i| g.has_edge(i, (i + 1) % n)) {
        return Err(Error::InvalidArgument(
            "doubled-spectrum search needs a cycle on consecutively labelled vertices".into(),
        ));
    }

    let m = n / 2;
    let lam: Vec<f64> = values.iter().rev().copied().collect();
    let scale = lam.iter().fold(1.0f64, |s, t| s.max(t.abs()));
    let npar = 2 * m + 1;

    // Parameters: shared diagonals a_0..a_{m-1}, shared interior couplings
    // b_0..b_{m-2}, then the weights of the two reflection-fixed edges
    // (n-1, 0) and (m-1, m), which enter the blocks with opposite signs.
    let block = |theta: &[f64], sign: f64| -> SymMatrix {
        let mut j = SymMatrix::zeros(m);
        for i in 0..m {
            j.set(i, i, theta[i]);
        }
        for k in 0..m - 1 {
            j.set(k, k + 1, theta[m + k]);
        }
        j.set(0, 0, theta[0] + sign * theta[2 * m - 1]);
        j.set(m - 1, m - 1, theta[m - 1] + sign * theta[2 * m]);
        j
    };
    let evaluate = |theta: &[f64]| -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        let mut resid = vec![0.0f64; 2 * m];
        let mut jac = vec![vec![0.0f64; npar]; 2 * m];
        for (half, sign) in [(0usize, 1.0f64), (1, -1.0)] {
            let eig = EigenDecomposition::compute(&block(theta, sign)).ok()?;
            for i in 0..m {
                resid[half * m + i] = (eig.values[i] - lam[i]) / scale;
                let vec_i = &eig.vectors[i];
                let row = &mut jac[half * m + i];
                for (slot, &component) in row.iter_mut().zip(vec_i) {
                    *slot = component * component / scale;
                }
                for k in 0..m - 1 {
                    row[m + k] = 2.0 * vec_i[k] * vec_i[k + 1] / scale;
                }
                row[2 * m - 1] = sign * vec_i[0] * vec_i[0] / scale;
                row[2 * m] = sign * vec_i[m - 1] * vec_i[m - 1] / scale;
            }
        }
        Some((resid, jac))
    };
    let lift = |theta: &[f64]| -> SymMatrix {
        let mut out = SymMatrix::zeros(n);
        for i in 0..m {
            out.set(i, i, theta[i]);
            out.set(n - 1 - i, n - 1 - i, theta[i]);
        }
        for k in 0..m - 1 {
            out.set(k, k + 1, theta[m + k]);
            out.set(n - 2 - k, n - 1 - k, theta[m + k]);
        }
        out.set(n - 1, 0, theta[2 * m - 1]);
        out.set(m - 1, m, theta[2 * m]);
        out
    };
    let max_abs = |r: &[f64]| r.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let norm2 = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let min_coupling = |theta: &[f64]| theta[m..].iter().fold(f64::INFINITY, |s, x| s.min(x.abs()));

    let mut stats = SearchStats {
        restarts_tried: 0,
        success_restart: None,
        total_sweeps: 0,
        best_gap: f64::INFINITY,
    };
    for restart in 0..problem.restarts {
        stats.restarts_tried = restart + 1;
        let mut rng = restart_rng(problem.seed, restart);
        let mut theta: Vec<f64> = (0..npar)
            .map(|i| {
                if i < m {
                    rng.gen_range(-0.5..0.5)
                } else {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    sign * rng.gen_range(0.3..1.5)
                }
            })
            .collect();
        let Some((mut resid, mut jac)) = evaluate(&theta) else {
            continue;
        };
        let mut cost = norm2(&resid);
        let mut mu = 1e-8f64;
        for _ in 0..JACOBI_PAIR_MAX_ITERS {
            stats.best_gap = stats.best_gap.min(max_abs(&resid));
            if max_abs(&resid) <= JACOBI_PAIR_RESIDUAL_STOP {
                break;
            }
            stats.total_sweeps += 1;
            let mut gram = vec![vec![0.0f64; 2 * m]; 2 * m];
            for (i, ri) in jac.iter().enumerate() {
                for (j, rj) in jac.iter().enumerate().take(i + 1) {
                    let dot = ri.iter().zip(rj).map(|(a, b)| a * b).sum::<f64>();
                    gram[i][j] = dot;
                    gram[j][i] = dot;
                }
            }
            let mut accepted = false;
            for _ in 0..14 {
                let mut ridged = gram.clone();
                for (i, row) in ridged.iter_mut().enumerate() {
                    row[i] += mu;
                }
                let Some(y) = solve_dense(ridged, resid.clone()) else {
                    mu = (mu * 10.0).min(1e8);
                    continue;
                };
                let candidate: Vec<f64> = theta
                    .iter()
                    .enumerate()
                    .map(|(idx, &t)| {
                        let step: f64 = jac.iter().zip(&y).map(|(row, yi)| row[idx] * yi).sum();
                        t - step
                    })
                    .collect();
                if min_coupling(&candidate) < JACOBI_PAIR_STEP_FLOOR {
                    mu = (mu * 10.0).min(1e8);
                    continue;
                }
                let Some((cr, cj)) = evaluate(&candidate) else {
                    mu = (mu * 10.0).min(1e8);
                    continue;
                };
                let ccost = norm2(&cr);
                if ccost < cost {
                    theta = candidate;
                    resid = cr;
                    jac = cj;
                    cost = ccost;
                    mu = (mu / 3.0).max(1e-14);
                    accepted = true;
                    break;
                }
                mu = (mu * 10.0).min(1e8);
            }
            if !accepted {
                break;
            }
        }
        stats.best_gap = stats.best_gap.min(max_abs(&resid));
        if max_abs(&resid) > JACOBI_PAIR_RESIDUAL_STOP
            || min_coupling(&theta) < JACOBI_PAIR_ACCEPT_FLOOR
        {
            continue;
        }
        let provenance = Provenance::Search {
            seed: problem.seed,
            restarts: restart as u32,
        };
        match VerifiedCertificate::check(g.clone(), lift(&theta), values.len(), provenance) {
            Ok(cert) => {
                stats.success_restart = Some(restart);
                return Ok(SearchOutcome {
                    certificate: Some(cert),
                    stats,
                });
            }
            Err(Error::Construction(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(SearchOutcome {
        certificate: None,
        stats,
    })
}

/// Options for [`estimate_q`].
#[derive(Clone, Debug)]
pub struct EstimateOptions {
    /// Restart budget per multiplicity profile.
    pub restarts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
    /// Cap on multiplicity profiles tried per candidate count.
    pub max_profiles: usize,
}

impl Default for EstimateOptions {
    fn default() -> EstimateOptions {
        EstimateOptions {
            restarts: 16,
            max_sweeps: 2000,
            seed: 0,
            max_profiles: 50,
        }
    }
}

/// A bracket `lower <= q(G) <= upper` plus every certificate that backs the
/// upper end. `exact()` reports the value when the bracket collapses.
#[derive(Debug)]
pub struct QEstimate {
    pub report: BoundReport,
    pub lower: usize,
    pub upper: usize,
    /// Certificates achieving `upper`, best (fewest distinct) first.
    pub certificates: Vec<VerifiedCertificate>,
    /// Per-candidate-count search statistics, ascending.
    pub searched: Vec<(usize, SearchStats)>,
}

impl QEstimate {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// Brackets `q(G)`: combinatorial lower bound, then searches candidate
/// counts upward from it until a verified certificate matches or the seeded
/// upper bound is reached. `seed_certificates` (typically the adjacency
/// matrix and a weighted clique cover) tighten the upper end before any
/// search runs; entries for other graphs are ignored.
pub fn estimate_q(
    g: &Graph,
    seed_certificates: &[VerifiedCertificate],
    opts: &EstimateOptions,
) -> Result<QEstimate> {
    let report = BoundReport::compute(g)?;
    let lower = report.lower.value;
    let mut upper = report.upper.value;
    let mut certificates: Vec<VerifiedCertificate> = Vec::new();

    for cert in seed_certificates {
        if !same_graph(cert.graph(), g) {
            continue;
        }
        if cert.claimed_q() < upper {
            upper = cert.claimed_q();
            certificates.clear();
        }
        if cert.claimed_q() == upper {
            certificates.push(cert.clone());
        }
    }

    let mut searched = Vec::new();
    let n = g.vertex_count();
    for k in lower..upper {
        if k < 2 {
            continue;
        }
        let (outcome, stats) = search_for_count(g, n, k, opts)?;
        match outcome {
            Some(cert) => {
                upper = k;
                certificates.clear();
                certificates.push(cert);
                searched.push((k, stats));
                break;
            }
            None => searched.push((k, stats)),
        }
    }

    Ok(QEstimate {
        report,
        lower,
        upper,
        certificates,
        searched,
    })
}

/// Searches for a matrix with exactly `k` distinct eigenvalues: an
/// involution for `k = 2`, otherwise Chebyshev-spaced values over every
/// multiplicity profile within the budget. No bound checks; callers wanting
/// the bracketed pipeline should use [`estimate_q`].
pub fn find_distinct_count(
    g: &Graph,
    k: usize,
    opts: &EstimateOptions,
) -> Result<(Option<VerifiedCertificate>, SearchStats)> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "searchable counts start at 2".into(),
        ));
    }
    search_for_count(g, g.vertex_count(), k, opts)
}

fn search_for_count(
    g: &Graph,
    n: usize,
    k: usize,
    opts: &EstimateOptions,
) -> Result<(Option<VerifiedCertificate>, SearchStats)> {
    let mut merged = SearchStats {
        restarts_tried: 0,
        success_restart: None,
        total_sweeps: 0,
        best_gap: f64::INFINITY,
    };
    if k == 2 {
        let problem = SearchProblem::involution(g.clone())
            .seeded(opts.seed)
            .with_budget(opts.restarts, opts.max_sweeps);
        let outcome = find_involution(&problem)?;
        return Ok((outcome.certificate, outcome.stats));
    }
    let values = chebyshev_values(k);
    for (index, profile) in multiplicity_profiles(n, k, opts.max_profiles)
        .into_iter()
        .enumerate()
    {
        let problem = SearchProblem::with_profile(g.clone(), values.clone(), profile)
            .seeded(opts.seed.wrapping_add(index as u64))
            .with_budget(opts.restarts, opts.max_sweeps);
        let outcome = find_with_multiplicities(&problem)?;
        merged.restarts_tried += outcome.stats.restarts_tried;
        merged.total_sweeps += outcome.stats.total_sweeps;
        merged.best_gap = merged.best_gap.min(outcome.stats.best_gap);
        if let Some(cert) = outcome.certificate {
            merged.success_restart = outcome.stats.success_restart;
            return Ok((Some(cert), merged));
        }
    }
    Ok((None, merged))
}

/// Chebyshev points in `(-1, 1)`, strictly decreasing.
pub fn chebyshev_values(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|i| (std::f64::consts::PI * (2 * i - 1) as f64 / (2 * k) as f64).cos())
        .collect()
}

/// Multiplicity profiles for `k` distinct values over dimension `n`:
/// compositions of `n` into `k` positive parts, most balanced partitions
/// first, each partition expanded into its distinct arrangements in
/// lexicographic order, truncated at `cap`.
pub fn multiplicity_profiles(n: usize, k: usize, cap: usize) -> Vec<Vec<usize>> {
    if k == 0 || k > n || cap == 0 {
        return Vec::new();
    }
    let mut partitions = Vec::new();
    let mut current = Vec::with_capacity(k);
    collect_partitions(n, k, n, &mut current, &mut partitions);
    partitions.sort_by_key(|p| {
        (
            p[0],
            p.iter().map(|&m| m * m).sum::<usize>(),
            p.clone(),
        )
    });

    let mut out = Vec::new();
    for partition in partitions {
        let mut arrangement: Vec<usize> = {
            let mut a = partition;
            a.reverse();
            a
        };
        loop {
            if out.len() == cap {
                return out;
            }
            out.push(arrangement.clone());
            if !next_permutation(&mut arrangement) {
                break;
            }
        }
    }
    out
}

/// Partitions of `n` into exactly `k` parts, each at most `limit`, parts
/// weakly decreasing.
fn collect_partitions(
    n: usize,
    k: usize,
    limit: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == 0 {
        if n == 0 {
            out.push(current.clone());
        }
        return;
    }
    let max_part = limit.min(n + 1 - k);
    let min_part = n.div_ceil(k).max(1);
    for part in (min_part..=max_part).rev() {
        current.push(part);
        collect_partitions(n - part, k - 1, part, current, out);
        current.pop();
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count() && a.edges() == b.edges()
}
