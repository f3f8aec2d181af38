//! End-to-end checks of the library's published claims. Each test exercises
//! one family or property through the full pipeline (bounds, construction or
//! search, verification) and prints a single PASS/FAIL line, so running with
//! `--nocapture` yields a one-line-per-claim report.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use qgraph_core::bounds::{self, BoundReport};
use qgraph_core::constructions;
use qgraph_core::search::{self, SearchProblem};
use qgraph_core::spectra::{EigenDecomposition, SymMatrix, CLUSTER_RTOL};
use qgraph_core::survey::{run_survey, SurveyOptions};
use qgraph_core::{Family, Graph, Obstruction, Provenance};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn criterion(name: &str, body: impl FnOnce() -> String) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("acceptance {name}: PASS [{detail}]"),
        Err(cause) => {
            println!("acceptance {name}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn corpus_lines(name: &str) -> Vec<String> {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {path}: {e}"))
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_owned)
        .collect()
}

/// Canonical form by minimizing the edge bitmask over all vertex
/// relabelings; only usable for the small orders surveyed here.
fn canonical(g: &Graph) -> (usize, u64) {
    let n = g.vertex_count();
    assert!(n <= 8, "canonical form is exhaustive over permutations");
    let pair_bit = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        1u64 << (b * (b - 1) / 2 + a)
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mut mask = 0u64;
        for &(u, v) in g.edges() {
            mask |= pair_bit(perm[u], perm[v]);
        }
        best = best.min(mask);
        // lexicographic successor
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    (n, best)
}

#[test]
fn cycles() {
    criterion("cycles", || {
        let mut searched_even = 0;
        for n in 3..=12 {
            let expect = n / 2 + n % 2;
            let g = Family::Cycle { n }.generate().unwrap();
            let report = BoundReport::compute(&g).unwrap();
            assert_eq!(report.lower.value, expect, "C_{n} lower bound");
            let cert = constructions::cycle_certificate(n).unwrap();
            assert_eq!(cert.claimed_q(), expect, "C_{n} certificate");
            assert!(cert.outcome().ok);
            match cert.provenance() {
                Provenance::Search { .. } => {
                    assert_eq!(n % 2, 0, "search is the even-order route");
                    searched_even += 1;
                }
                Provenance::ClosedForm { .. } => assert_eq!(n % 2, 1),
                other => panic!("C_{n}: unexpected provenance {other:?}"),
            }
        }
        format!(
            "n=3..12 exact ceil(n/2); {searched_even} even orders found by \
             search and clustered at rtol {CLUSTER_RTOL:.0e}"
        )
    });
}

#[test]
fn complete_family() {
    criterion("complete-family", || {
        for n in 2..=50 {
            let cert = constructions::complete_certificate(n).unwrap();
            assert_eq!(cert.claimed_q(), 2, "K_{n}");
            let report = BoundReport::compute(cert.graph()).unwrap();
            assert_eq!(report.lower.value, 2, "K_{n} lower bound");
        }
        let mut worst_defect = 0.0f64;
        for n in 2..=12 {
            let cert = constructions::complete_minus_edge_certificate(n).unwrap();
            let expect = match n {
                2 => 1,
                3 => 3,
                _ => 2,
            };
            assert_eq!(cert.claimed_q(), expect, "K_{n} minus an edge");
            if n >= 4 {
                let defect = cert.matrix().square().add_diag(-1.0).max_abs();
                assert!(defect <= 1e-9, "K_{n}-e involution defect {defect:.3e}");
                worst_defect = worst_defect.max(defect);
            }
        }
        format!(
            "K_n exact 2 for n=2..50; K_n-e split 1/3/2 for n=2..12 with \
             involution defect <= {worst_defect:.2e}"
        )
    });
}

#[test]
fn complete_bipartite() {
    criterion("complete-bipartite", || {
        let (mut balanced, mut stars, mut unbalanced) = (0, 0, 0);
        for n in 1..=8 {
            for m in 1..=n {
                let g = Family::CompleteBipartite { m, n }.generate().unwrap();
                let report = BoundReport::compute(&g).unwrap();
                let cert = constructions::complete_bipartite_certificate(m, n).unwrap();
                if m == n {
                    assert_eq!(report.lower.value, 2, "K_{{{m},{n}}} lower bound");
                    assert_eq!(cert.claimed_q(), 2, "K_{{{m},{n}}} certificate");
                    balanced += 1;
                    continue;
                }
                assert_eq!(report.lower.value, 3, "K_{{{m},{n}}} lower bound");
                assert_eq!(cert.claimed_q(), 3, "K_{{{m},{n}}} certificate");
                assert!(
                    bounds::rule_out_q2(&g).is_some(),
                    "K_{{{m},{n}}} should carry an obstruction to two eigenvalues"
                );
                if m == 1 {
                    // pendant spokes push the path bound past 2 on their own,
                    // so the report never consults the obstruction rules
                    assert!(report.lower.unique_path.is_some());
                    assert!(report.lower.q2_obstruction.is_none());
                    stars += 1;
                } else {
                    match report.lower.q2_obstruction {
                        Some(Obstruction::UnbalancedBipartition { sizes }) => {
                            let mut s = [sizes.0, sizes.1];
                            s.sort_unstable();
                            assert_eq!(s, [m, n]);
                        }
                        ref other => {
                            panic!("K_{{{m},{n}}}: expected bipartition obstruction, got {other:?}")
                        }
                    }
                    unbalanced += 1;
                }
            }
        }
        format!(
            "m=n exact 2 ({balanced} cases); m<n exact 3 ({stars} stars via \
             unique paths, {unbalanced} via unbalanced bipartition)"
        )
    });
}

fn pruefer_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::new();
    for &v in &seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges).unwrap()
}

#[test]
fn join_self() {
    criterion("join-self", || {
        let mut graphs: Vec<(String, Graph)> = Vec::new();
        for k in 2..=10 {
            graphs.push((format!("P_{k}"), Family::Path { n: k }.generate().unwrap()));
        }
        for k in 3..=10 {
            graphs.push((format!("C_{k}"), Family::Cycle { n: k }.generate().unwrap()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(414);
        for n in 6..=10 {
            graphs.push((format!("tree_{n}"), pruefer_tree(n, &mut rng)));
        }
        for n in 5..=9 {
            let mut seed = rng.gen();
            let g = loop {
                let g = Family::Gnp { n, p: 0.5, seed }.generate().unwrap();
                if g.is_connected() {
                    break g;
                }
                seed = seed.wrapping_add(1);
            };
            graphs.push((format!("gnp_{n}_{seed}"), g));
        }
        assert!(graphs.len() >= 20);

        let mut max_iters = 0usize;
        let mut min_cross = f64::INFINITY;
        let mut worst_involution = 0.0f64;
        let mut worst_sq = 0.0f64;
        for (name, g) in &graphs {
            let (cert, info) = constructions::join_self_certificate(g).unwrap();
            assert_eq!(cert.claimed_q(), 2, "{name} join");
            assert!(
                info.min_cross_abs > 1e-12,
                "{name}: cross-block entry {:.3e} too close to zero",
                info.min_cross_abs
            );
            assert!(
                info.involution_residual <= 1e-8,
                "{name}: involution residual {:.3e}",
                info.involution_residual
            );
            assert!(
                info.sq_residual <= 1e-10,
                "{name}: fixed-point residual {:.3e}",
                info.sq_residual
            );
            max_iters = max_iters.max(info.iterations);
            min_cross = min_cross.min(info.min_cross_abs);
            worst_involution = worst_involution.max(info.involution_residual);
            worst_sq = worst_sq.max(info.sq_residual);
        }
        format!(
            "{} joins G+G verified q=2; <= {max_iters} iterations, cross \
             entries >= {min_cross:.2e}, involution defect <= {worst_involution:.2e}, \
             fixed-point residual <= {worst_sq:.2e}",
            graphs.len()
        )
    });
}

#[test]
fn hypercubes() {
    criterion("hypercubes", || {
        let mut gaps = Vec::new();
        for d in 1..=6 {
            let cert = constructions::hypercube_certificate(d).unwrap();
            assert_eq!(cert.claimed_q(), 2, "Q_{d}");
            assert_eq!(cert.graph().vertex_count(), 1 << d);
            let g = Family::Hypercube { d }.generate().unwrap();
            assert_eq!(g.diameter().unwrap(), d);
            gaps.push(d as isize - 2);
        }
        format!("d=1..6 verified q=2 while the diameter-vs-q gap grows as {gaps:?}")
    });
}

#[test]
fn s_graphs() {
    criterion("s-graphs", || {
        let c44 = constructions::s_graph_certificate(4, 4).unwrap();
        assert_eq!(c44.claimed_q(), 6);
        let g44 = Family::SGraph { m: 4, n: 4 }.generate().unwrap();
        let r44 = BoundReport::compute(&g44).unwrap();
        assert_eq!(r44.lower.value, 6, "S(4,4) lower bound");
        assert!(r44.lower.unique_path.is_some());

        let c22 = constructions::s_graph_certificate(2, 2).unwrap();
        assert_eq!(c22.claimed_q(), 4);
        let g22 = Family::SGraph { m: 2, n: 2 }.generate().unwrap();
        assert_eq!(BoundReport::compute(&g22).unwrap().lower.value, 4);

        let bumped = Family::SGraphPlusEdge { m: 4 }.generate().unwrap();
        let rb = BoundReport::compute(&bumped).unwrap();
        assert!(rb.lower.value >= 10, "edge-added lower bound {}", rb.lower.value);
        assert!(rb.lower.value - c44.claimed_q() >= 4);
        format!(
            "S(4,4) exact 6 and S(2,2) exact 4; adding one edge lifts the \
             lower bound to {} (jump of {})",
            rb.lower.value,
            rb.lower.value - 6
        )
    });
}

#[test]
fn clique_paths() {
    criterion("clique-paths", || {
        let mut pairs = 0;
        for n in 2..=8 {
            for k in 2..=n {
                let g = Family::CliquePath { n, k }.generate().unwrap();
                let report = BoundReport::compute(&g).unwrap();
                assert_eq!(report.lower.value, k, "G({n},{k}) path lower bound");
                assert_eq!(report.upper.value, k, "G({n},{k}) cover upper bound");
                let cert = constructions::clique_path_certificate(n, k).unwrap();
                assert_eq!(cert.claimed_q(), k, "G({n},{k}) certificate");
                pairs += 1;
            }
        }
        format!("q = k on all {pairs} pairs 2 <= k <= n <= 8, with both bounds already meeting at k")
    });
}

#[test]
fn exceptional_trio() {
    criterion("exceptional-trio", || {
        let certs = constructions::exceptional_certificates().unwrap();
        for (cert, name) in certs.iter().zip(["C_5", "house", "gem"]) {
            assert_eq!(cert.claimed_q(), 3, "{name}");
            assert_eq!(cert.graph().vertex_count(), 5, "{name}");
            assert!(cert.outcome().ok, "{name}");
        }
        let gem = &certs[2];
        let expect = [0.0, 0.0, 2.0, 2.0, 18.0 - 9.0 * 2f64.sqrt()];
        let mut worst = 0.0f64;
        for (got, want) in gem.outcome().eigenvalues.iter().zip(expect) {
            let err = (got - want).abs();
            assert!(err <= 1e-8, "gem eigenvalue {got} vs {want}");
            worst = worst.max(err);
        }
        format!(
            "three five-vertex graphs of diameter 2 verified q=3; gem \
             spectrum matches 0,0,2,2,18-9*sqrt(2) to {worst:.1e}"
        )
    });
}

#[test]
fn known_values() {
    criterion("known-values", || {
        let petersen = Family::Petersen.generate().unwrap();
        let report = BoundReport::compute(&petersen).unwrap();
        assert_eq!(report.lower.value, 3);
        assert!(report.lower.unique_path.is_some());
        let pet_cert = constructions::adjacency_certificate(&petersen).unwrap();
        assert_eq!(pet_cert.claimed_q(), 3);

        let octa = constructions::octahedron_certificate().unwrap();
        assert_eq!(octa.claimed_q(), 2);
        let octa_graph = Family::CompleteMultipartite { parts: vec![2, 2, 2] }.generate().unwrap();
        let searched = search::find_involution(&SearchProblem::involution(octa_graph)).unwrap();
        assert!(searched.certificate.is_some(), "octahedron involution search");

        let twins: [(&[usize], &[usize]); 3] =
            [(&[1, 1], &[1]), (&[1, 1, 2, 2], &[1, 2]), (&[2, 2, 3, 3], &[2, 3])];
        for (full, half) in twins {
            let hg = Family::CompleteMultipartite { parts: half.to_vec() }.generate().unwrap();
            let (cert, _) = constructions::join_self_certificate(&hg).unwrap();
            assert_eq!(cert.claimed_q(), 2, "doubled parts {full:?}");
            // the complement of a complete multipartite graph is a disjoint
            // union of cliques, one per part
            let comp = cert.graph().complement();
            let mut sizes = Vec::new();
            for verts in comp.components() {
                let sub = comp.induced(&verts).unwrap();
                assert_eq!(sub.edge_count(), verts.len() * (verts.len() - 1) / 2);
                sizes.push(verts.len());
            }
            sizes.sort_unstable();
            assert_eq!(sizes, full, "part sizes after joining");
        }
        format!(
            "Petersen exact 3 (unique path + adjacency witness); octahedron \
             q=2 by explicit matrix and by search; three doubled-part \
             multipartite graphs verified q=2 via self-join"
        )
    });
}

#[test]
fn survey_catalogues() {
    criterion("survey-catalogues", || {
        let lines = corpus_lines("connected_le5.g6");
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let rows = run_survey(&refs, &SurveyOptions::default()).unwrap();
        assert_eq!(rows.len(), 31);
        let mut near_order = BTreeSet::new();
        for row in &rows {
            let q = row
                .exact
                .unwrap_or_else(|| panic!("{} unresolved in [{}, {}]", row.graph6, row.lower, row.upper));
            if q + 1 == row.vertices {
                near_order.insert(canonical(&Graph::from_graph6(&row.graph6).unwrap()));
            }
        }
        let mut expected = BTreeSet::new();
        for n in 3..=5 {
            for i in 1..=n - 2 {
                expected.insert(canonical(&Family::PathPlusChord { n, i }.generate().unwrap()));
            }
        }
        for n in 4..=5 {
            for i in 2..=n - 2 {
                expected.insert(canonical(&Family::PathPlusLeaf { n, i }.generate().unwrap()));
            }
        }
        assert_eq!(near_order, expected, "graphs with q = n-1 on at most five vertices");
        let shapes_small = expected.len();

        let lines = corpus_lines("trees_le7.g6");
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        // Trees hide their doubled-value witnesses in rarer basins; give the
        // survey the search module's own default budget.
        let deep = SurveyOptions {
            restarts: search::DEFAULT_RESTARTS,
            max_sweeps: search::DEFAULT_MAX_SWEEPS,
            ..SurveyOptions::default()
        };
        let rows = run_survey(&refs, &deep).unwrap();
        assert_eq!(rows.len(), 25);
        let mut near_order = BTreeSet::new();
        for row in &rows {
            let q = row
                .exact
                .unwrap_or_else(|| panic!("{} unresolved in [{}, {}]", row.graph6, row.lower, row.upper));
            let g = Graph::from_graph6(&row.graph6).unwrap();
            assert!(g.is_tree());
            assert_eq!(q, g.diameter().unwrap() + 1, "{}: tree q vs diameter", row.graph6);
            if q + 1 == row.vertices {
                near_order.insert(canonical(&g));
            }
        }
        let mut expected = BTreeSet::new();
        for n in 4..=7 {
            for i in 2..=n - 2 {
                expected.insert(canonical(&Family::PathPlusLeaf { n, i }.generate().unwrap()));
            }
        }
        assert_eq!(near_order, expected, "trees with q = n-1 on at most seven vertices");
        format!(
            "all 31 connected graphs on <=5 vertices resolved exactly, with \
             q=n-1 exactly on {shapes_small} chord/leaf shapes; all 25 trees \
             on <=7 vertices resolved at diameter+1, q=n-1 exactly on {} \
             pendant shapes",
            expected.len()
        )
    });
}

fn brute_shortest(g: &Graph, s: usize, t: usize) -> Option<(usize, u64)> {
    fn dfs(
        g: &Graph,
        v: usize,
        t: usize,
        visited: u64,
        len: usize,
        best: &mut Option<usize>,
        count: &mut u64,
    ) {
        if v == t {
            match *best {
                Some(b) if len > b => {}
                Some(b) if len == b => *count += 1,
                _ => {
                    *best = Some(len);
                    *count = 1;
                }
            }
            return;
        }
        if let Some(b) = *best {
            if len >= b {
                return;
            }
        }
        for &u in g.neighbors(v) {
            if visited & (1 << u) == 0 {
                dfs(g, u, t, visited | (1 << u), len + 1, best, count);
            }
        }
    }
    let mut best = None;
    let mut count = 0;
    dfs(g, s, t, 1 << s, 0, &mut best, &mut count);
    best.map(|b| (b, count))
}

#[test]
fn property_suites() {
    criterion("property-suites", || {
        // certificates never undercut the combinatorial lower bound
        let mut corpus: Vec<String> = Vec::new();
        for name in ["connected_le5.g6", "connected_6.g6", "connected_7.g6"] {
            corpus.extend(corpus_lines(name));
        }
        assert_eq!(corpus.len(), 996);
        let mut cover_skips = 0;
        for line in &corpus {
            let g = Graph::from_graph6(line).unwrap();
            let report = BoundReport::compute(&g).unwrap();
            assert!(report.lower.value <= report.upper.value, "{line} bracket");
            let adj = constructions::adjacency_certificate(&g).unwrap();
            assert!(
                report.lower.value <= adj.claimed_q(),
                "{line}: lower {} above adjacency witness {}",
                report.lower.value,
                adj.claimed_q()
            );
            match constructions::clique_cover_certificate(&g, &report.upper.cover.cliques, 1) {
                Ok(cover) => assert!(
                    report.lower.value <= cover.claimed_q(),
                    "{line}: lower {} above cover witness {}",
                    report.lower.value,
                    cover.claimed_q()
                ),
                Err(_) => cover_skips += 1,
            }
        }

        // eigensolver invariants on random dense symmetric matrices
        let mut rng = ChaCha8Rng::seed_from_u64(20260823);
        for trial in 0..1000 {
            let n = rng.gen_range(1..=20);
            let mut m = SymMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    m.set(i, j, rng.gen_range(-1.0..=1.0));
                }
            }
            let eig = EigenDecomposition::compute(&m).unwrap();
            let fro = m.frobenius_norm();
            let sum: f64 = eig.values.iter().sum();
            let sum_sq: f64 = eig.values.iter().map(|v| v * v).sum();
            assert!(
                (sum - m.trace()).abs() <= 1e-9 * 1f64.max(fro),
                "trial {trial}: eigenvalue sum vs trace"
            );
            assert!(
                (sum_sq - fro * fro).abs() <= 1e-9 * 1f64.max(fro * fro),
                "trial {trial}: eigenvalue power sum vs Frobenius norm"
            );
            assert!(
                eig.residual(&m) <= 1e-10 * 1f64.max(fro),
                "trial {trial}: reconstruction residual"
            );
            assert!(
                eig.orthonormality_defect() <= 1e-10,
                "trial {trial}: eigenvector orthonormality"
            );
        }

        // counting geodesics agrees with brute-force path enumeration
        for line in &corpus {
            let g = Graph::from_graph6(line).unwrap();
            let n = g.vertex_count();
            for s in 0..n {
                let (dist, counts) = bounds::shortest_path_counts(&g, s);
                for t in 0..n {
                    if s == t {
                        continue;
                    }
                    let (bd, bc) = brute_shortest(&g, s, t).unwrap();
                    assert_eq!(dist[t], Some(bd), "{line}: distance {s}->{t}");
                    assert_eq!(counts[t], bc, "{line}: geodesic count {s}->{t}");
                }
            }
        }

        // an obstruction to q=2 is never contradicted by the search
        let mut obstructed = 0;
        for line in corpus_lines("connected_le5.g6").iter().chain(corpus_lines("connected_6.g6").iter()) {
            let g = Graph::from_graph6(line).unwrap();
            if bounds::rule_out_q2(&g).is_none() {
                continue;
            }
            obstructed += 1;
            let problem = SearchProblem::involution(g).with_budget(4, 500);
            let outcome = search::find_involution(&problem).unwrap();
            assert!(outcome.certificate.is_none(), "{line}: false q=2 witness");
            assert_eq!(outcome.stats.restarts_tried, 4, "{line}: budget not exhausted");
        }
        let p3 = Family::Path { n: 3 }.generate().unwrap();
        assert!(bounds::rule_out_q2(&p3).is_some());
        let outcome = search::find_involution(&SearchProblem::involution(p3).with_budget(4, 500)).unwrap();
        assert!(outcome.certificate.is_none(), "P_3 admits no two-eigenvalue matrix");

        format!(
            "bounds below every witness on 996 graphs ({cover_skips} cover \
             skips); 1000 eigensolves within tolerance; geodesic counts match \
             brute force; {obstructed} obstructed graphs defeated a 4x500 \
             involution search"
        )
    });
}
