//! Closed-form certificate builders for structured families.
//!
//! Each function assembles an explicit matrix in the pattern of its graph,
//! states how many distinct eigenvalues it achieves, and runs the full
//! verification pipeline via [`VerifiedCertificate::check`]; nothing is
//! returned on trust. Formula failures (a construction applied outside its
//! range, an entry landing on zero) surface as `Error::Construction`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Family, Graph};
use crate::search::{self, SearchProblem};
use crate::spectra::{
    Clustering, EigenDecomposition, Provenance, SymMatrix, VerifiedCertificate, CLUSTER_RTOL,
};

fn closed_form(name: &str) -> Provenance {
    Provenance::ClosedForm { name: name.into() }
}

fn construction_error(msg: impl Into<String>) -> Error {
    Error::Construction(msg.into())
}

/// Distinct eigenvalue count of `m` at the standard clustering tolerance.
pub fn measured_distinct(m: &SymMatrix) -> Result<usize> {
    let eig = EigenDecomposition::compute(m)?;
    Ok(Clustering::from_sorted(&eig.values, CLUSTER_RTOL).distinct_count())
}

/// Representatives of the smallest and largest eigenvalue clusters.
fn extreme_representatives(cert: &VerifiedCertificate) -> (f64, f64) {
    let clusters = Clustering::from_sorted(&cert.outcome().eigenvalues, CLUSTER_RTOL);
    let lo = clusters.groups.first().map(|g| g.0).unwrap_or(0.0);
    let hi = clusters.groups.last().map(|g| g.0).unwrap_or(0.0);
    (lo, hi)
}

/// Affinely rescales a two-eigenvalue certificate matrix so its spectrum
/// becomes `{-1, +1}` (up to the certified clustering accuracy).
fn normalize_to_involution(cert: &VerifiedCertificate) -> Result<SymMatrix> {
    if cert.claimed_q() != 2 {
        return Err(Error::InvalidArgument(format!(
            "normalization needs a two-eigenvalue certificate, got {}",
            cert.claimed_q()
        )));
    }
    let (lo, hi) = extreme_representatives(cert);
    cert.matrix().affine_normalize(hi, lo, 1.0, -1.0)
}

/// Certificate from the adjacency matrix itself; the claim is whatever
/// distinct count it measures. Always succeeds on a valid graph, so it is
/// the universal upper-bound seed.
pub fn adjacency_certificate(g: &Graph) -> Result<VerifiedCertificate> {
    let a = SymMatrix::adjacency(g);
    let claimed = measured_distinct(&a)?;
    VerifiedCertificate::check(g.clone(), a, claimed, closed_form("adjacency"))
}

/// Weighted clique-cover certificate: `A = sum_i c_i 1_{Q_i} 1_{Q_i}^T` with
/// random weights `c_i` in `[1, 2)`. The rank bound gives at most
/// `cover.len() + 1` distinct eigenvalues; the claim is the measured count.
/// Degenerate weight draws (an entry cancelling to zero) are retried with
/// fresh weights.
pub fn clique_cover_certificate(
    g: &Graph,
    cover: &[Vec<usize>],
    seed: u64,
) -> Result<VerifiedCertificate> {
    let n = g.vertex_count();
    let mut covered = std::collections::HashSet::new();
    for clique in cover {
        if clique.is_empty() {
            return Err(Error::InvalidArgument("cover contains an empty clique".into()));
        }
        for (a, &u) in clique.iter().enumerate() {
            if u >= n {
                return Err(Error::InvalidArgument(format!(
                    "cover vertex {u} out of range"
                )));
            }
            for &v in &clique[a + 1..] {
                if u == v || !g.has_edge(u, v) {
                    return Err(Error::InvalidArgument(format!(
                        "cover block is not a clique: ({u}, {v})"
                    )));
                }
                covered.insert((u.min(v), u.max(v)));
            }
        }
    }
    if covered.len() != g.edge_count() {
        return Err(Error::InvalidArgument(
            "cover does not cover every edge".into(),
        ));
    }

    let mut last = None;
    for attempt in 0..32u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut a = SymMatrix::zeros(n);
        for clique in cover {
            let c: f64 = rng.gen_range(1.0..2.0);
            for (idx, &u) in clique.iter().enumerate() {
                a.set(u, u, a.get(u, u) + c);
                for &v in &clique[idx + 1..] {
                    a.set(u, v, a.get(u, v) + c);
                }
            }
        }
        let claimed = measured_distinct(&a)?;
        match VerifiedCertificate::check(
            g.clone(),
            a,
            claimed,
            Provenance::CliqueCover { size: cover.len() },
        ) {
            Ok(cert) => return Ok(cert),
            Err(Error::Construction(msg)) => last = Some(msg),
            Err(e) => return Err(e),
        }
    }
    Err(construction_error(format!(
        "clique-cover weights failed after 32 draws: {}",
        last.unwrap_or_default()
    )))
}

/// `K_n`: the adjacency matrix has spectrum `{n-1, -1}`, so two distinct
/// values for `n >= 2` (one for `K_1`).
pub fn complete_certificate(n: usize) -> Result<VerifiedCertificate> {
    let g = Family::Complete { n }.generate()?;
    let a = SymMatrix::adjacency(&g);
    let claimed = if n >= 2 { 2 } else { 1 };
    VerifiedCertificate::check(g, a, claimed, closed_form("complete"))
}

/// `K_n` minus the edge `{0, n-1}`. Two distinct eigenvalues for every
/// `n >= 4` via an explicit involution; `n = 3` is the path (three values),
/// `n = 2` is edgeless (one value).
pub fn complete_minus_edge_certificate(n: usize) -> Result<VerifiedCertificate> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "complete-minus-edge needs at least two vertices".into(),
        ));
    }
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !(u == 0 && v == n - 1));
    let g = Graph::new(n, edges)?;

    let (matrix, claimed) = match n {
        2 => (SymMatrix::identity(2), 1),
        3 => (SymMatrix::adjacency(&g), 3),
        4 => {
            let s = 6.0f64.sqrt() / 4.0;
            let rows = [
                vec![-0.5, s, s, 0.0],
                vec![s, 0.0, 0.5, s],
                vec![s, 0.5, 0.0, -s],
                vec![0.0, s, -s, 0.5],
            ];
            (SymMatrix::from_rows(&rows)?, 2)
        }
        _ => {
            // Reflection through the span of two unit vectors chosen so the
            // only vanishing off-diagonal entry is the missing pair.
            let mut u1 = vec![1.0; n];
            u1[n - 1] = 0.0;
            let mut u2 = vec![1.0; n];
            u2[0] = 0.0;
            u2[n - 2] = -((n - 3) as f64);
            let s1 = ((n - 1) as f64).sqrt();
            let s2 = (((n - 3) * (n - 2) + 1) as f64).sqrt();
            for x in &mut u1 {
                *x /= s1;
            }
            for x in &mut u2 {
                *x /= s2;
            }
            let q = SymMatrix::from_fn(n, |i, j| {
                let p = u1[i] * u1[j] + u2[i] * u2[j];
                if i == j {
                    1.0 - 2.0 * p
                } else {
                    -2.0 * p
                }
            });
            (q, 2)
        }
    };
    VerifiedCertificate::check(g, matrix, claimed, closed_form("complete-minus-edge"))
}

/// `K_{m,n}`. Balanced parts admit an involution built from an orthogonal
/// block with no zero entries; unbalanced parts use the adjacency matrix
/// (three distinct values), which is optimal.
pub fn complete_bipartite_certificate(m: usize, n: usize) -> Result<VerifiedCertificate> {
    let g = Family::CompleteBipartite { m, n }.generate()?;
    if m != n {
        let a = SymMatrix::adjacency(&g);
        return VerifiedCertificate::check(g, a, 3, closed_form("bipartite-adjacency"));
    }
    // Orthogonal symmetric block with all entries nonzero: a scaled
    // Hadamard block for n = 2 (where I - (2/n)J degenerates), the
    // reflection I - (2/n)J otherwise.
    let b = if n == 2 {
        SymMatrix::from_rows(&[
            vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ])?
    } else {
        let c = 2.0 / n as f64;
        SymMatrix::from_fn(n, |i, j| if i == j { 1.0 - c } else { -c })
    };
    let a = SymMatrix::block2(&SymMatrix::zeros(n), &b, &SymMatrix::zeros(n));
    VerifiedCertificate::check(g, a, 2, closed_form("bipartite-involution"))
}

/// Diagnostics from the join-self fixed-point iteration.
#[derive(Clone, Debug)]
pub struct JoinSelfReport {
    pub iterations: usize,
    /// Max-norm residual of `(I - Y)^2 + P - I` at the fixed point.
    pub sq_residual: f64,
    /// Smallest magnitude in the cross block `I - Y`.
    pub min_cross_abs: f64,
    /// Max-norm of `Q^2 - I` for the assembled certificate matrix.
    pub involution_residual: f64,
}

const JOIN_EPS_ITER: f64 = 1e-14;
const JOIN_MAX_ITER: usize = 1_000_000;
const JOIN_STALL_WINDOW: usize = 1000;
/// Spectral radius of the scaled diagonal blocks; the square-root series
/// needs it strictly below one.
const JOIN_CONTRACTION: f64 = 0.999;

/// Certificate that `q(G v G) = 2` for any connected `G`. With `s` the
/// spectral radius of the adjacency matrix `A`, let `M = I + A/s` (just `I`
/// when `G` has no edges) and `c = 0.999 / lambda_max(M)`, so `cM` has
/// spectrum inside `[0, 0.999]`. The iteration `Y <- (P + Y^2)/2` with
/// `P = (cM)^2` converges to `Y* = I - sqrt(I - P)`, whose cross block
/// `I - Y*` is entrywise nonzero: the series for the square root has a term
/// for every power of `M`, and the identity component in `M` lets those
/// powers reach every vertex pair whatever the parity of its distance. The
/// block matrix `[[cM, I - Y*], [I - Y*, -cM]]` is then an involution in the
/// pattern of the join. Keeping `c` at the largest value the square root
/// allows, instead of order `1/n`, keeps the far cross entries, which decay
/// like scaled walk counts, well above the pattern tolerance even for
/// high-diameter factors.
pub fn join_self_certificate(g: &Graph) -> Result<(VerifiedCertificate, JoinSelfReport)> {
    if !g.is_connected() {
        return Err(Error::Disconnected("join-self factor must be connected"));
    }
    let n = g.vertex_count();
    let a = SymMatrix::adjacency(g);
    let radius = EigenDecomposition::compute(&a)?
        .values
        .iter()
        .fold(0.0f64, |s, v| s.max(v.abs()));
    let m = if radius > 1e-9 {
        a.scaled(1.0 / radius).add_diag(1.0)
    } else {
        SymMatrix::zeros(n).add_diag(1.0)
    };
    let top = EigenDecomposition::compute(&m)?
        .values
        .last()
        .copied()
        .unwrap_or(1.0);
    let c = JOIN_CONTRACTION / top;
    let p = m.square().scaled(c * c);

    let mut y = SymMatrix::zeros(n);
    let mut best = f64::INFINITY;
    let mut since_best = 0usize;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > JOIN_MAX_ITER {
            return Err(construction_error("join-self iteration exceeded its budget"));
        }
        let next = p.add(&y.square()).scaled(0.5);
        let delta = next.sub(&y).max_abs();
        y = next;
        if delta <= JOIN_EPS_ITER {
            break;
        }
        if delta < best {
            best = delta;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= JOIN_STALL_WINDOW {
                return Err(construction_error("join-self iteration stalled"));
            }
        }
    }

    let cross = y.scaled(-1.0).add_diag(1.0);
    let mut min_cross = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            min_cross = min_cross.min(cross.get(i, j).abs());
        }
    }
    if !(min_cross > 1e-12) {
        return Err(construction_error(format!(
            "join-self cross block has a vanishing entry ({min_cross:.3e})"
        )));
    }
    let sq_residual = cross.square().add(&p).add_diag(-1.0).max_abs();
    if sq_residual > 1e-10 {
        return Err(construction_error(format!(
            "join-self square-equation residual {sq_residual:.3e} exceeds 1e-10"
        )));
    }

    let cm = m.scaled(c);
    let q = SymMatrix::block2(&cm, &cross, &cm.scaled(-1.0));
    let involution_residual = q.square().add_diag(-1.0).max_abs();
    if involution_residual > 1e-8 {
        return Err(construction_error(format!(
            "join-self involution residual {involution_residual:.3e} exceeds 1e-8"
        )));
    }

    let cert = VerifiedCertificate::check(g.join(g), q, 2, closed_form("join-self"))?;
    Ok((
        cert,
        JoinSelfReport {
            iterations,
            sq_residual,
            min_cross_abs: min_cross,
            involution_residual,
        },
    ))
}

pub const DEFAULT_CARTESIAN_WEIGHT: f64 = FRAC_1_SQRT_2;

/// Certificate for `G x K_2` (Cartesian product) from a certificate for `G`:
/// after rescaling the input spectrum so its extreme clusters sit at `-1` and
/// `+1`, the block matrix `[[aA, bI], [bI, -aA]]` folds those extremes
/// together, giving at most `2 q(A) - 2` distinct values.
pub fn cartesian_k2_certificate(
    cert: &VerifiedCertificate,
    alpha: f64,
    beta: f64,
) -> Result<VerifiedCertificate> {
    if alpha == 0.0 || beta == 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidArgument(
            "cartesian-k2 weights must be finite and nonzero".into(),
        ));
    }
    if cert.claimed_q() < 2 {
        return Err(Error::InvalidArgument(
            "cartesian-k2 needs at least two distinct input eigenvalues".into(),
        ));
    }
    let (lo, hi) = extreme_representatives(cert);
    let a = cert.matrix().affine_normalize(hi, lo, 1.0, -1.0)?;
    let n = a.n();
    let cross = SymMatrix::from_fn(n, |i, j| if i == j { beta } else { 0.0 });
    let b = SymMatrix::block2(&a.scaled(alpha), &cross, &a.scaled(-alpha));

    let k2 = Family::Complete { n: 2 }.generate()?;
    let product = cert.graph().cartesian_product(&k2);
    let claimed = measured_distinct(&b)?;
    if claimed > 2 * cert.claimed_q() - 2 {
        return Err(construction_error(format!(
            "cartesian-k2 produced {claimed} distinct values, above the bound {}",
            2 * cert.claimed_q() - 2
        )));
    }
    VerifiedCertificate::check(product, b, claimed, closed_form("cartesian-k2"))
}

/// Certificate that `q(Q_d) = 2`: iterated `cartesian_k2` over exact
/// involutions, starting from `K_2`. Capped at `d = 7` (128 vertices) to
/// keep dense eigensolves reasonable.
pub fn hypercube_certificate(d: usize) -> Result<VerifiedCertificate> {
    if d == 0 || d > 7 {
        return Err(Error::InvalidArgument(
            "hypercube certificates cover 1 <= d <= 7".into(),
        ));
    }
    let mut cert = complete_certificate(2)?;
    for _ in 1..d {
        cert = cartesian_k2_certificate(&cert, DEFAULT_CARTESIAN_WEIGHT, DEFAULT_CARTESIAN_WEIGHT)?;
    }
    let expected = Family::Hypercube { d }.generate()?;
    if cert.graph().edges() != expected.edges() {
        return Err(construction_error(
            "iterated product disagrees with the hypercube labeling",
        ));
    }
    VerifiedCertificate::check(expected, cert.matrix().clone(), 2, closed_form("hypercube"))
}

/// Certificate for the corona `G o K_1` (a pendant neighbor on every
/// vertex): `B = [[A, I], [I, 0]]` maps each eigenvalue `mu` of `A` to the
/// two roots of `x^2 - mu x - 1`, so at most `2 q(A)` distinct values, and
/// `B` is invertible. Both facts are re-checked numerically.
pub fn corona_certificate(cert: &VerifiedCertificate) -> Result<VerifiedCertificate> {
    let a = cert.matrix();
    let n = a.n();
    let b = SymMatrix::block2(a, &SymMatrix::identity(n), &SymMatrix::zeros(n));
    let graph = cert.graph().corona_k1();

    let eig_a = EigenDecomposition::compute(a)?;
    let eig_b = EigenDecomposition::compute(&b)?;
    let scale = eig_a.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for &lambda in &eig_b.values {
        if lambda.abs() <= 1e-8 {
            return Err(construction_error(
                "corona matrix unexpectedly has a near-zero eigenvalue",
            ));
        }
        let mu = (lambda * lambda - 1.0) / lambda;
        let nearest = eig_a
            .values
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min((mu - v).abs()));
        if nearest > 1e-8 * scale {
            return Err(construction_error(format!(
                "corona eigenvalue {lambda} does not project onto the input spectrum"
            )));
        }
    }

    let claimed = measured_distinct(&b)?;
    if claimed > 2 * cert.claimed_q() {
        return Err(construction_error(format!(
            "corona produced {claimed} distinct values, above 2 * {}",
            cert.claimed_q()
        )));
    }
    VerifiedCertificate::check(graph, b, claimed, closed_form("corona"))
}

/// Certificate that `q(C_n) = ceil(n/2)`. Odd cycles: the adjacency matrix
/// already has `(n+1)/2` distinct values. Even cycles: search for a matrix
/// with every value `2 cos(2 pi j / n)`, `j = 1..n/2`, doubled.
pub fn cycle_certificate(n: usize) -> Result<VerifiedCertificate> {
    let g = Family::Cycle { n }.generate()?;
    if n % 2 == 1 {
        let a = SymMatrix::adjacency(&g);
        return VerifiedCertificate::check(g, a, n.div_ceil(2), closed_form("cycle-adjacency"));
    }
    let values: Vec<f64> = (1..=n / 2)
        .map(|j| 2.0 * (2.0 * PI * j as f64 / n as f64).cos())
        .collect();
    let multiplicities = vec![2; n / 2];
    let problem = SearchProblem::with_profile(g, values, multiplicities).seeded(0);
    let outcome = search::find_doubled_cycle_spectrum(&problem)?;
    outcome.certificate.ok_or_else(|| {
        construction_error(format!(
            "search failed to realize the doubled even-cycle spectrum for n = {n}"
        ))
    })
}

/// Certificate that the clique-plus-path graph achieves exactly `k` distinct
/// eigenvalues: a weighted cover by one clique and `k - 2` tail edges has
/// rank `k - 1`, hence at most `k` values; the path through the tail forces
/// at least `k`.
pub fn clique_path_certificate(n: usize, k: usize) -> Result<VerifiedCertificate> {
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(
            "clique-path certificates need 2 <= k <= n".into(),
        ));
    }
    let g = Family::CliquePath { n, k }.generate()?;
    let clique_end = n - k + 2;
    let mut cover: Vec<Vec<usize>> = vec![(0..clique_end).collect()];
    for v in clique_end..n {
        cover.push(vec![v - 1, v]);
    }
    let seed = ((n as u64) << 8) | k as u64;
    let cert = clique_cover_certificate(&g, &cover, seed)?;
    if cert.claimed_q() != k {
        return Err(construction_error(format!(
            "clique-path cover measured {} distinct values instead of {k}",
            cert.claimed_q()
        )));
    }
    Ok(cert)
}

// ----- S-graphs ---------------------------------------------------------

/// Weights `x_i > 0` on `targets` with `sum x_i = 1` and
/// `sum x_i t_i = corner`, from the affine ansatz
/// `x_i = 1/N + (corner - mean)(t_i - mean) / sum (t_j - mean)^2`.
/// Returns `None` when any weight fails strict positivity.
fn corner_weights(targets: &[f64], corner: f64) -> Option<Vec<f64>> {
    let nf = targets.len() as f64;
    let mu = targets.iter().sum::<f64>() / nf;
    let s2: f64 = targets.iter().map(|t| (t - mu) * (t - mu)).sum();
    if s2 == 0.0 {
        return None;
    }
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        let x = 1.0 / nf + (corner - mu) * (t - mu) / s2;
        if !(x > 1e-9) {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

/// Jacobi matrix (diagonal, positive subdiagonal) with spectrum `targets`
/// and first diagonal entry `sum weights_i targets_i`, by the Lanczos
/// recurrence on `diag(targets)` started from the unit vector of square
/// roots of `weights`, fully reorthogonalized.
fn lanczos_tridiagonal(targets: &[f64], weights: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = targets.len();
    let mut q1: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let norm = q1.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut q1 {
        *x /= norm;
    }
    let mut basis = vec![q1];
    let mut diag = Vec::with_capacity(n);
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n {
        let qj = &basis[j];
        let v: Vec<f64> = (0..n).map(|i| targets[i] * qj[i]).collect();
        let alpha: f64 = v.iter().zip(qj).map(|(a, b)| a * b).sum();
        diag.push(alpha);
        if j + 1 == n {
            break;
        }
        let mut w = v;
        for q in &basis {
            let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
        // second reorthogonalization pass for stability
        for q in &basis {
            let c: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < 1e-10 {
            return Err(construction_error(
                "Lanczos recurrence terminated early; degenerate spectral data",
            ));
        }
        for x in &mut w {
            *x /= beta;
        }
        sub.push(beta);
        basis.push(w);
    }
    Ok((diag, sub))
}

/// Lower-bidiagonal Cholesky factor of a positive (semi)definite tridiagonal
/// matrix given by `diag` and `sub`. With `singular` set, the final pivot
/// must vanish (the matrix has a zero eigenvalue) and is dropped, leaving
/// one fewer column than rows.
fn bidiagonal_cholesky(diag: &[f64], sub: &[f64], singular: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = diag.len();
    let scale = diag.iter().fold(1.0f64, |m, d| m.max(d.abs()));
    let mut pivots: Vec<f64> = Vec::with_capacity(r);
    let mut offs = Vec::with_capacity(r.saturating_sub(1));
    for k in 0..r {
        let o = if k == 0 { 0.0 } else { sub[k - 1] / pivots[k - 1] };
        if k > 0 {
            offs.push(o);
        }
        let d2 = diag[k] - o * o;
        if k + 1 == r && singular {
            if d2.abs() > 1e-8 * scale {
                return Err(construction_error(format!(
                    "expected a singular tridiagonal, final pivot^2 = {d2:.3e}"
                )));
            }
            pivots.push(0.0);
        } else {
            if d2 <= 1e-12 * scale {
                return Err(construction_error(
                    "tridiagonal factorization lost positive definiteness",
                ));
            }
            pivots.push(d2.sqrt());
        }
    }
    Ok((pivots, offs))
}

/// Combination scan: subsets of `pool` of size `want`, in lexicographic
/// order over a nearest-to-`corner`-first reordering, returning the first
/// whose targets (with `prefix` appended) admit strictly positive corner
/// weights. Capped at 2000 candidates.
fn pick_subset(
    pool: &[f64],
    want: usize,
    prefix: &[f64],
    corner: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    if want > pool.len() {
        return None;
    }
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = ((pool[a] - corner).abs(), pool[a]);
        let kb = ((pool[b] - corner).abs(), pool[b]);
        ka.partial_cmp(&kb).unwrap()
    });

    let mut combo: Vec<usize> = (0..want).collect();
    let mut tried = 0usize;
    loop {
        tried += 1;
        if tried > 2000 {
            return None;
        }
        let mut targets: Vec<f64> = combo.iter().map(|&i| pool[order[i]]).collect();
        targets.extend_from_slice(prefix);
        targets.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if let Some(weights) = corner_weights(&targets, corner) {
            return Some((targets, weights));
        }
        // advance the combination
        let mut i = want;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if combo[i] != i + pool.len() - want {
                combo[i] += 1;
                for j in i + 1..want {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

struct ChainPlan {
    /// Spectrum of the chain's row Gram block, descending.
    targets: Vec<f64>,
    weights: Vec<f64>,
    /// Zero eigenvalue expected (odd path length).
    singular: bool,
}

/// Spectral plan for both chains of `S_{m,n}`: the longer chain carries a
/// full spread of values with weighted mean 2 (the corner forced by the
/// rotation), the shorter chain a sub-multiset of them.
fn s_graph_plan(hi: usize, lo: usize) -> Result<(ChainPlan, ChainPlan)> {
    let even = hi % 2 == 0;
    let long = if even {
        let t = hi / 2 + 1;
        let targets: Vec<f64> = (1..=t)
            .map(|j| 2.0 + (PI * (2 * j - 1) as f64 / (2 * t) as f64).cos())
            .collect();
        let weights = corner_weights(&targets, 2.0)
            .ok_or_else(|| construction_error("long-chain corner weights failed"))?;
        ChainPlan {
            targets,
            weights,
            singular: false,
        }
    } else {
        let r = (hi + 1) / 2;
        let center = 2.0 + 2.0 / r as f64;
        let mut targets: Vec<f64> = (1..=r)
            .map(|j| center + (PI * (2 * j - 1) as f64 / (2 * r) as f64).cos())
            .collect();
        targets.push(0.0);
        let weights = corner_weights(&targets, 2.0)
            .ok_or_else(|| construction_error("long-chain corner weights failed"))?;
        ChainPlan {
            targets,
            weights,
            singular: true,
        }
    };

    let short = if lo == hi {
        ChainPlan {
            targets: long.targets.clone(),
            weights: long.weights.clone(),
            singular: long.singular,
        }
    } else if even {
        let s = lo / 2 + 1;
        let (targets, weights) = pick_subset(&long.targets, s, &[], 2.0)
            .ok_or_else(|| construction_error("no valid short-chain value subset"))?;
        ChainPlan {
            targets,
            weights,
            singular: false,
        }
    } else {
        let r2 = (lo + 1) / 2;
        let positives = &long.targets[..long.targets.len() - 1];
        let (targets, weights) = pick_subset(positives, r2, &[0.0], 2.0)
            .ok_or_else(|| construction_error("no valid short-chain value subset"))?;
        ChainPlan {
            targets,
            weights,
            singular: true,
        }
    };
    Ok((long, short))
}

/// Writes one chain's bidiagonal factor onto the path hanging from `anchor`
/// (path vertices `base..base + len`). Row 0 of the factor was consumed by
/// the exact rotation back onto the two cross vertices.
fn place_chain(
    a: &mut SymMatrix,
    anchor: usize,
    base: usize,
    len: usize,
    pivots: &[f64],
    offs: &[f64],
) {
    let rows = pivots.len();
    let cols = if pivots.last() == Some(&0.0) { rows - 1 } else { rows };
    for k in 1..rows {
        let row_v = base + 2 * k - 2;
        let col_prev = if k == 1 { anchor } else { base + 2 * (k - 1) - 1 };
        a.set(row_v, col_prev, offs[k - 1]);
        if k < cols {
            a.set(row_v, base + 2 * k - 1, pivots[k]);
        }
    }
    debug_assert_eq!(rows - 1 + cols.saturating_sub(1), len);
}

/// Certificate that `q(S_{m,n}) = max(m, n) + 2` for paths of equal parity.
///
/// `S_{m,n}` is a 4-cycle `v1 u1 v2 u2` with paths of `m` and `n` vertices
/// grafted onto `v1` and `v2`. Rotating the `u1, u2` coordinates decouples
/// the row Gram matrix into two chains whose leading entries are forced to
/// 2; inverse-eigenvalue machinery (corner weights, Lanczos, Cholesky)
/// realizes a spectrum of `max(m, n) + 2` distinct values, the combinatorial
/// minimum. Falls back to a spectral search if the closed form degenerates.
pub fn s_graph_certificate(m: usize, n: usize) -> Result<VerifiedCertificate> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("grafted paths must be nonempty".into()));
    }
    if m % 2 != n % 2 {
        return Err(Error::InvalidArgument(
            "s-graph certificates need paths of equal parity".into(),
        ));
    }
    let g = Family::SGraph { m, n }.generate()?;
    match s_graph_closed_form(&g, m, n) {
        Ok(cert) => Ok(cert),
        Err(Error::Construction(_)) => s_graph_search(&g, m, n),
        Err(e) => Err(e),
    }
}

fn s_graph_closed_form(g: &Graph, m: usize, n: usize) -> Result<VerifiedCertificate> {
    let (hi, lo) = (m.max(n), m.min(n));
    let (long, short) = s_graph_plan(hi, lo)?;

    let factor = |plan: &ChainPlan| -> Result<(Vec<f64>, Vec<f64>)> {
        let (diag, sub) = lanczos_tridiagonal(&plan.targets, &plan.weights)?;
        if (diag[0] - 2.0).abs() > 1e-8 {
            return Err(construction_error("chain corner drifted from 2"));
        }
        let (pivots, offs) = bidiagonal_cholesky(&diag, &sub, plan.singular)?;
        if (pivots[0] - SQRT_2).abs() > 1e-8 {
            return Err(construction_error("chain pivot drifted from sqrt(2)"));
        }
        Ok((pivots, offs))
    };
    let long_factor = factor(&long)?;
    let short_factor = if lo == hi {
        long_factor.clone()
    } else {
        factor(&short)?
    };

    let total = m + n + 4;
    let mut a = SymMatrix::zeros(total);
    a.set(0, 1, 1.0);
    a.set(1, 2, 1.0);
    a.set(0, 3, -1.0);
    a.set(2, 3, 1.0);
    let (first, second) = if m >= n {
        (&long_factor, &short_factor)
    } else {
        (&short_factor, &long_factor)
    };
    place_chain(&mut a, 0, 4, m, &first.0, &first.1);
    place_chain(&mut a, 2, 4 + m, n, &second.0, &second.1);

    VerifiedCertificate::check(g.clone(), a, hi + 2, closed_form("s-graph"))
}

/// Search fallback with the planned spectrum: doubled values where both
/// chains share them, simple elsewhere, plus a doubled zero for odd paths.
fn s_graph_search(g: &Graph, m: usize, n: usize) -> Result<VerifiedCertificate> {
    let (hi, lo) = (m.max(n), m.min(n));
    let (long, short) = s_graph_plan(hi, lo)?;
    let shared: Vec<f64> = short.targets.clone();
    let mut values = Vec::new();
    let mut mult = Vec::new();
    let mut push = |v: f64, m_: usize| {
        values.push(v);
        mult.push(m_);
    };
    let positives: Vec<f64> = long
        .targets
        .iter()
        .copied()
        .filter(|&t| t > 0.0)
        .collect();
    for &t in &positives {
        let m_ = if shared.contains(&t) { 2 } else { 1 };
        push(t.sqrt(), m_);
    }
    if long.singular {
        push(0.0, 2);
    }
    for &t in positives.iter().rev() {
        let m_ = if shared.contains(&t) { 2 } else { 1 };
        push(-t.sqrt(), m_);
    }
    let problem = SearchProblem::with_profile(g.clone(), values, mult).seeded(1);
    let outcome = search::find_with_multiplicities(&problem)?;
    outcome
        .certificate
        .ok_or_else(|| construction_error("s-graph spectrum search failed"))
}

// ----- bordered pentagon variants ---------------------------------------

fn p4_laplacian() -> SymMatrix {
    SymMatrix::from_rows(&[
        vec![1.0, -1.0, 0.0, 0.0],
        vec![-1.0, 2.0, -1.0, 0.0],
        vec![0.0, -1.0, 2.0, -1.0],
        vec![0.0, 0.0, -1.0, 1.0],
    ])
    .expect("fixed rows are symmetric")
}

/// Certificate that the house graph (5-cycle plus one chord) has `q = 3`:
/// the path Laplacian bordered by a vector chosen in the span of two of its
/// eigenvectors, with the entry over the lone non-neighbor exactly zero.
/// Spectrum: `{0, 0, (5 - sqrt 2)/2, 2 + sqrt 2, 2 + sqrt 2}`.
pub fn house_certificate() -> Result<VerifiedCertificate> {
    let g = Family::House.generate()?;
    let ap = (3.0 * PI / 8.0).cos();
    let bp = (PI / 8.0).cos();
    let c1 = 2.0f64.powf(0.25);
    let s = c1 * FRAC_1_SQRT_2;
    let b = [s * (ap + bp), 0.0, -2.0 * s * ap, s * (ap - bp)];
    let corner = (3.0 * SQRT_2 + 1.0) / 2.0;
    let a = p4_laplacian().border(&b, corner);
    VerifiedCertificate::check(g, a, 3, closed_form("house-border"))
}

/// Certificate that the gem (path plus a universal vertex) has `q = 3`: the
/// path Laplacian bordered inside the span of its two middle eigenvectors.
/// Spectrum: `{0, 0, 2, 2, 18 - 9 sqrt 2}`.
pub fn gem_certificate() -> Result<VerifiedCertificate> {
    let g = Family::Gem.generate()?;
    let ap = (3.0 * PI / 8.0).cos();
    let bp = (PI / 8.0).cos();
    let alpha = -(13.0 - 9.0 * SQRT_2).sqrt();
    let beta = 2.0;
    let hi = (2.0 + SQRT_2) * alpha;
    let lo = (2.0 - SQRT_2) * beta;
    let b = [
        (hi * ap + lo * bp) * FRAC_1_SQRT_2,
        (-hi * bp + lo * ap) * FRAC_1_SQRT_2,
        (hi * bp - lo * ap) * FRAC_1_SQRT_2,
        (-hi * ap - lo * bp) * FRAC_1_SQRT_2,
    ];
    let corner = 16.0 - 9.0 * SQRT_2;
    let a = p4_laplacian().border(&b, corner);
    VerifiedCertificate::check(g, a, 3, closed_form("gem-border"))
}

/// The three pentagon-based graphs that separate `q` from both classical
/// bounds: the 5-cycle, the house, and the gem, each with `q = 3`.
pub fn exceptional_certificates() -> Result<[VerifiedCertificate; 3]> {
    Ok([cycle_certificate(5)?, house_certificate()?, gem_certificate()?])
}

/// Certificate that the octahedron `K_{2,2,2}` has `q = 2`: an explicit
/// symmetric orthogonal matrix with zero 2x2 diagonal blocks, built from
/// three orthonormal 2-frames.
pub fn octahedron_certificate() -> Result<VerifiedCertificate> {
    let g = Family::CompleteMultipartite {
        parts: vec![2, 2, 2],
    }
    .generate()?;
    let h = 0.5;
    let a = SymMatrix::from_rows(&[
        vec![0.0, 0.0, -h, h, h, h],
        vec![0.0, 0.0, -h, h, -h, -h],
        vec![-h, -h, 0.0, 0.0, h, -h],
        vec![h, h, 0.0, 0.0, h, -h],
        vec![h, -h, h, h, 0.0, 0.0],
        vec![h, -h, -h, -h, 0.0, 0.0],
    ])?;
    VerifiedCertificate::check(g, a, 2, closed_form("octahedron"))
}

/// Certificate that a complete multipartite graph whose part sizes pair up
/// has `q = 2`, by writing it as a join of a smaller multipartite graph with
/// itself. `[2, 2, 2]` (no pairing) is covered by the explicit octahedron
/// witness.
pub fn multipartite_certificate(parts: &[usize]) -> Result<VerifiedCertificate> {
    if parts.is_empty() || parts.iter().any(|&p| p == 0) {
        return Err(Error::InvalidArgument(
            "multipartite parts must be nonempty".into(),
        ));
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    if sorted == [2, 2, 2] {
        return octahedron_certificate();
    }
    let mut half = Vec::new();
    let mut iter = sorted.iter().peekable();
    while let Some(&p) = iter.next() {
        match iter.peek() {
            Some(&&q) if q == p => {
                half.push(p);
                iter.next();
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "part sizes must pair up (appear an even number of times); \
                     [2, 2, 2] is the covered exception"
                        .into(),
                ))
            }
        }
    }
    if half.len() == 1 {
        return complete_bipartite_certificate(half[0], half[0]);
    }
    let factor = Family::CompleteMultipartite { parts: half }.generate()?;
    join_self_certificate(&factor).map(|(cert, _)| cert)
}

/// Certificate that a disjoint union of two graphs with `q = 2` again has
/// `q = 2`: normalize both witnesses to involutions and take the direct sum.
pub fn union_certificate(
    c1: &VerifiedCertificate,
    c2: &VerifiedCertificate,
) -> Result<VerifiedCertificate> {
    let m1 = normalize_to_involution(c1)?;
    let m2 = normalize_to_involution(c2)?;
    let graph = c1.graph().union(c2.graph());
    VerifiedCertificate::check(graph, m1.direct_sum(&m2), 2, closed_form("disjoint-union"))
}

/// Upper bound for a bipartite graph from a block matrix on its bipartition:
/// with `A = [[0, B], [B^T, 0]]`, every distinct eigenvalue is `0` or
/// `+/- sigma` for a singular value `sigma` of `B`, so
/// `q(A) <= 2 q(B B^T) + 1` (no `+1` when `B` is square). Returns the bound
/// together with the verified certificate for the measured count, ordering
/// block rows by the smaller side of the bipartition.
pub fn bipartite_upper(g: &Graph, block: &[Vec<f64>]) -> Result<(usize, VerifiedCertificate)> {
    let colors = g
        .bipartition()
        .ok_or_else(|| Error::InvalidArgument("graph is not bipartite".into()))?;
    let left: Vec<usize> = (0..g.vertex_count()).filter(|&v| colors[v] == 0).collect();
    let right: Vec<usize> = (0..g.vertex_count()).filter(|&v| colors[v] == 1).collect();
    if block.len() != left.len() || block.iter().any(|row| row.len() != right.len()) {
        return Err(Error::DimensionMismatch(format!(
            "block must be {} x {} for this bipartition",
            left.len(),
            right.len()
        )));
    }

    let mut a = SymMatrix::zeros(g.vertex_count());
    for (i, &u) in left.iter().enumerate() {
        for (j, &v) in right.iter().enumerate() {
            a.set(u, v, block[i][j]);
        }
    }

    let (r, c) = (left.len(), right.len());
    let gram = if r <= c {
        SymMatrix::from_fn(r, |i, k| (0..c).map(|j| block[i][j] * block[k][j]).sum())
    } else {
        SymMatrix::from_fn(c, |j, l| (0..r).map(|i| block[i][j] * block[i][l]).sum())
    };
    let q_gram = measured_distinct(&gram)?;
    let bound = 2 * q_gram + usize::from(r != c);

    let measured = measured_distinct(&a)?;
    if measured > bound {
        return Err(construction_error(format!(
            "measured {measured} distinct values, above the block bound {bound}"
        )));
    }
    let cert = VerifiedCertificate::check(g.clone(), a, measured, closed_form("bipartite-block"))?;
    Ok((bound, cert))
}
