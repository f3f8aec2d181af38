//! Combinatorial bounds on the number of distinct eigenvalues.
//!
//! Lower bounds come from two sources. A pair of vertices joined by a unique
//! shortest path of length `d` forces at least `d + 1` distinct eigenvalues
//! (powers of a matrix up to `d` are linearly independent on such a pair).
//! Separately, several structural rules each certify that two distinct
//! eigenvalues are impossible; see [`rule_out_q2`].
//!
//! The upper bound is spectral: if the edges of `G` admit a cover by `c`
//! cliques, a positively weighted sum of clique indicator blocks lies in the
//! pattern of `G`, is positive semidefinite, and has rank at most `c`, so it
//! has at most `c + 1` distinct eigenvalues.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;

/// Largest independent set size tried by [`rule_out_q2`].
const INDEPENDENT_KMAX_CAP: usize = 12;
/// Cap on how many independent sets are enumerated per component.
const INDEPENDENT_SET_BUDGET: usize = 100_000;
/// Node budget for the exact clique-cover branch and bound.
const COVER_BUDGET: u64 = 10_000_000;
/// Components larger than this skip the exact cover search.
const COVER_EXACT_MAX_N: usize = 16;

/// A structural witness that two distinct eigenvalues are impossible.
///
/// Each variant encodes one argument. Briefly, with `A` scaled so `A^2 = I`:
/// a vertex of degree one forces a zero row product that cannot happen; a cut
/// edge similarly; a non-adjacent pair with exactly one common neighbor `w`
/// makes `(A^2)_{uv}` a single nonzero product; an independent set whose rows
/// must be pairwise orthogonal needs as many support columns as active
/// members; and a connected bipartite graph with `A^2 = I` forces its two
/// sides to have equal size.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Obstruction {
    PendantVertex { v: usize },
    CutEdge { u: usize, v: usize },
    UniqueCommonNeighbor { u: usize, v: usize, w: usize },
    IndependentSetCount {
        set: Vec<usize>,
        /// Members of `set` that share a neighbor with another member.
        active_members: usize,
        /// Size of the union of the pairwise common neighborhoods.
        support_size: usize,
    },
    UnbalancedBipartition { sizes: (usize, usize) },
}

impl Obstruction {
    fn relabel(self, map: &[usize]) -> Obstruction {
        use Obstruction::*;
        match self {
            PendantVertex { v } => PendantVertex { v: map[v] },
            CutEdge { u, v } => CutEdge { u: map[u], v: map[v] },
            UniqueCommonNeighbor { u, v, w } => UniqueCommonNeighbor {
                u: map[u],
                v: map[v],
                w: map[w],
            },
            IndependentSetCount {
                set,
                active_members,
                support_size,
            } => IndependentSetCount {
                set: set.into_iter().map(|v| map[v]).collect(),
                active_members,
                support_size,
            },
            UnbalancedBipartition { sizes } => UnbalancedBipartition { sizes },
        }
    }
}

/// A vertex pair joined by a unique shortest path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniquePathWitness {
    pub u: usize,
    pub v: usize,
    pub distance: usize,
}

/// The combined lower bound with the evidence that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBound {
    pub value: usize,
    pub unique_path: Option<UniquePathWitness>,
    /// Set when the graph is a tree; the bound then equals diameter + 1.
    pub tree_diameter: Option<usize>,
    pub q2_obstruction: Option<Obstruction>,
}

/// An edge clique cover; `exact` marks whether its size is proven minimal.
#[derive(Clone, Debug, Serialize)]
pub struct CliqueCover {
    pub cliques: Vec<Vec<usize>>,
    pub exact: bool,
}

/// Upper bound `cover size + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct UpperBound {
    pub value: usize,
    pub cover: CliqueCover,
}

/// Lower and upper bounds side by side; `exact` is set when they meet.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub lower: LowerBound,
    pub upper: UpperBound,
    pub exact: Option<usize>,
}

impl BoundReport {
    pub fn compute(g: &Graph) -> Result<BoundReport> {
        let lower = lower_bound(g);
        let upper = upper_bound(g)?;
        let exact = (lower.value == upper.value).then_some(lower.value);
        Ok(BoundReport {
            n: g.vertex_count(),
            lower,
            upper,
            exact,
        })
    }
}

/// Shortest-path distances and path counts from `start`. Counts saturate,
/// which cannot affect whether a count equals one.
pub fn shortest_path_counts(g: &Graph, start: usize) -> (Vec<Option<usize>>, Vec<u64>) {
    let dist = g.bfs_distances(start);
    let mut order: Vec<usize> = (0..g.vertex_count()).filter(|&v| dist[v].is_some()).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut count = vec![0u64; g.vertex_count()];
    count[start] = 1;
    for &v in &order {
        if v == start {
            continue;
        }
        let d = dist[v].unwrap();
        for &w in g.neighbors(v) {
            if dist[w] == Some(d - 1) {
                count[v] = count[v].saturating_add(count[w]);
            }
        }
    }
    (dist, count)
}

/// The unique-shortest-path lower bound: `max (d(u, v) + 1)` over pairs with
/// exactly one shortest `u`-`v` path. Any vertex alone gives 1; any edge
/// gives 2.
pub fn unique_path_bound(g: &Graph) -> (usize, Option<UniquePathWitness>) {
    let mut best = 0usize;
    let mut witness = None;
    for u in 0..g.vertex_count() {
        let (dist, count) = shortest_path_counts(g, u);
        for v in 0..g.vertex_count() {
            if let Some(d) = dist[v] {
                if count[v] == 1 && d + 1 > best {
                    best = d + 1;
                    witness = Some(UniquePathWitness { u, v, distance: d });
                }
            }
        }
    }
    (best, witness)
}

/// Looks for a structural reason why a connected graph cannot be realized
/// with two distinct eigenvalues. `None` means no rule fired, not that two
/// eigenvalues are attainable. Graphs with fewer than three vertices are
/// never rejected.
pub fn rule_out_q2(g: &Graph) -> Option<Obstruction> {
    let n = g.vertex_count();
    if n < 3 || !g.is_connected() {
        return None;
    }

    if let Some(&v) = g.pendant_vertices().first() {
        return Some(Obstruction::PendantVertex { v });
    }
    if let Some(&(u, v)) = g.cut_edges().first() {
        return Some(Obstruction::CutEdge { u, v });
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                let common = g.common_neighbors(u, v);
                if common.len() == 1 {
                    return Some(Obstruction::UniqueCommonNeighbor {
                        u,
                        v,
                        w: common[0],
                    });
                }
            }
        }
    }
    if let Some(colors) = g.bipartition() {
        let p = colors.iter().filter(|&&c| c == 0).count();
        if 2 * p != n {
            return Some(Obstruction::UnbalancedBipartition { sizes: (p, n - p) });
        }
    }

    let kmax = n.saturating_sub(1).min(INDEPENDENT_KMAX_CAP).max(2);
    for set in g.independent_sets_up_to(kmax, INDEPENDENT_SET_BUDGET) {
        let mut support = std::collections::BTreeSet::new();
        let mut active = vec![false; set.len()];
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                let common = g.common_neighbors(set[a], set[b]);
                if !common.is_empty() {
                    active[a] = true;
                    active[b] = true;
                    support.extend(common);
                }
            }
        }
        let active_members = active.iter().filter(|&&x| x).count();
        if support.len() < active_members {
            return Some(Obstruction::IndependentSetCount {
                set,
                active_members,
                support_size: support.len(),
            });
        }
    }
    None
}

/// The combined lower bound, taken per component.
pub fn lower_bound(g: &Graph) -> LowerBound {
    if g.vertex_count() == 0 {
        return LowerBound {
            value: 0,
            unique_path: None,
            tree_diameter: None,
            q2_obstruction: None,
        };
    }
    let (mut value, unique_path) = unique_path_bound(g);
    let tree_diameter = if g.is_tree() {
        g.diameter().ok()
    } else {
        None
    };
    let mut q2_obstruction = None;
    if value == 2 {
        for comp in g.components() {
            if comp.len() < 3 {
                continue;
            }
            let sub = g.induced(&comp).expect("component vertices are valid");
            if let Some(obs) = rule_out_q2(&sub) {
                q2_obstruction = Some(obs.relabel(&comp));
                value = 3;
                break;
            }
        }
    }
    LowerBound {
        value,
        unique_path,
        tree_diameter,
        q2_obstruction,
    }
}

/// A minimum (or, over budget, greedy) edge clique cover, computed per
/// component.
pub fn min_clique_cover(g: &Graph) -> Result<CliqueCover> {
    let mut cliques = Vec::new();
    let mut exact = true;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let sub = g.induced(&comp)?;
        if sub.edge_count() == 0 {
            continue;
        }
        let cover = component_cover(&sub)?;
        exact &= cover.exact;
        for clique in cover.cliques {
            cliques.push(clique.into_iter().map(|v| comp[v]).collect());
        }
    }
    Ok(CliqueCover { cliques, exact })
}

fn component_cover(g: &Graph) -> Result<CliqueCover> {
    let cliques = g.maximal_cliques()?;
    let edges = g.edges();
    let triangle_free = cliques.iter().all(|c| c.len() <= 2);
    if triangle_free {
        // Every clique covers at most one edge, so the edge set itself is a
        // minimum cover.
        return Ok(CliqueCover {
            cliques: edges.iter().map(|&(u, v)| vec![u, v]).collect(),
            exact: true,
        });
    }

    let edge_index: std::collections::BTreeMap<(usize, usize), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    // clique_edges[c] = indices of the edges inside clique c.
    let clique_edges: Vec<Vec<usize>> = cliques
        .iter()
        .map(|c| {
            let mut es = Vec::new();
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    es.push(edge_index[&(c[a].min(c[b]), c[a].max(c[b]))]);
                }
            }
            es
        })
        .collect();

    let greedy = greedy_cover(&clique_edges, edges.len());
    if g.vertex_count() > COVER_EXACT_MAX_N || edges.len() > 120 {
        return Ok(CliqueCover {
            cliques: greedy.iter().map(|&c| cliques[c].clone()).collect(),
            exact: false,
        });
    }

    // Small component: edge sets fit a u128 mask, run the exact search.
    let masks: Vec<u128> = clique_edges
        .iter()
        .map(|es| es.iter().fold(0u128, |m, &e| m | (1 << e)))
        .collect();
    let all = (1u128 << edges.len()) - 1;
    let mut best: Vec<usize> = greedy;
    let mut budget = COVER_BUDGET;
    let mut chosen = Vec::new();
    let complete = search_cover(&masks, all, 0, &mut chosen, &mut best, &mut budget);
    Ok(CliqueCover {
        cliques: best.iter().map(|&c| cliques[c].clone()).collect(),
        exact: complete,
    })
}

fn greedy_cover(clique_edges: &[Vec<usize>], edge_count: usize) -> Vec<usize> {
    let mut uncovered = vec![true; edge_count];
    let mut left = edge_count;
    let mut picked = Vec::new();
    while left > 0 {
        let best = (0..clique_edges.len())
            .max_by_key(|&c| clique_edges[c].iter().filter(|&&e| uncovered[e]).count())
            .expect("maximal cliques cover every edge");
        picked.push(best);
        for &e in &clique_edges[best] {
            if uncovered[e] {
                uncovered[e] = false;
                left -= 1;
            }
        }
    }
    picked
}

/// Exhaustive cover search. Returns false when the node budget ran out, in
/// which case `best` holds the best cover seen but minimality is unproven.
fn search_cover(
    masks: &[u128],
    uncovered: u128,
    used: usize,
    chosen: &mut Vec<usize>,
    best: &mut Vec<usize>,
    budget: &mut u64,
) -> bool {
    if uncovered == 0 {
        if used < best.len() {
            *best = chosen.clone();
        }
        return true;
    }
    // Finishing needs at least one more clique, so only continue if that
    // could still beat the incumbent.
    if used + 1 >= best.len() {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;

    // Branch on the uncovered edge with the fewest covering cliques.
    let target = {
        let mut best_edge = None;
        let mut best_count = usize::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let count = masks.iter().filter(|&&m| m >> e & 1 == 1).count();
            if count < best_count {
                best_count = count;
                best_edge = Some(e);
            }
        }
        best_edge.expect("uncovered is nonzero")
    };

    let mut complete = true;
    let mut candidates: Vec<usize> = (0..masks.len())
        .filter(|&c| masks[c] >> target & 1 == 1)
        .collect();
    candidates.sort_by_key(|&c| std::cmp::Reverse((masks[c] & uncovered).count_ones()));
    for c in candidates {
        chosen.push(c);
        complete &= search_cover(masks, uncovered & !masks[c], used + 1, chosen, best, budget);
        chosen.pop();
    }
    complete
}

/// Clique-cover upper bound: `q(G) <= cover size + 1`.
pub fn upper_bound(g: &Graph) -> Result<UpperBound> {
    if g.vertex_count() == 0 {
        return Ok(UpperBound {
            value: 0,
            cover: CliqueCover {
                cliques: Vec::new(),
                exact: true,
            },
        });
    }
    let cover = min_clique_cover(g)?;
    Ok(UpperBound {
        value: cover.cliques.len() + 1,
        cover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    fn gen(f: Family) -> Graph {
        f.generate().unwrap()
    }

    #[test]
    fn path_counts_on_cycle() {
        let g = gen(Family::Cycle { n: 6 });
        let (dist, count) = shortest_path_counts(&g, 0);
        assert_eq!(dist[3], Some(3));
        assert_eq!(count[3], 2);
        assert_eq!(count[2], 1);
        assert_eq!(count[0], 1);
    }

    #[test]
    fn unique_path_bound_on_familiar_graphs() {
        let (b, w) = unique_path_bound(&gen(Family::Path { n: 6 }));
        assert_eq!(b, 6);
        let w = w.unwrap();
        assert_eq!(w.distance, 5);
        assert_eq!(unique_path_bound(&gen(Family::Cycle { n: 4 })).0, 2);
        assert_eq!(unique_path_bound(&gen(Family::Cycle { n: 5 })).0, 3);
        assert_eq!(unique_path_bound(&gen(Family::Cycle { n: 9 })).0, 5);
        assert_eq!(unique_path_bound(&gen(Family::Complete { n: 5 })).0, 2);
        assert_eq!(unique_path_bound(&gen(Family::Petersen)).0, 3);
        assert_eq!(unique_path_bound(&gen(Family::Hypercube { d: 4 })).0, 2);
        assert_eq!(unique_path_bound(&Graph::empty(3)).0, 1);
        assert_eq!(unique_path_bound(&Graph::empty(0)).0, 0);
    }

    #[test]
    fn q2_rules_fire_in_order() {
        // Pendant first.
        let paw = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(rule_out_q2(&paw), Some(Obstruction::PendantVertex { v: 3 }));

        // Two triangles sharing nothing, linked by an edge: no pendant, a cut
        // edge.
        let barbell = Graph::new(
            6,
            [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)],
        )
        .unwrap();
        assert_eq!(rule_out_q2(&barbell), Some(Obstruction::CutEdge { u: 2, v: 3 }));

        // Petersen: every non-adjacent pair has exactly one common neighbor.
        assert!(matches!(
            rule_out_q2(&gen(Family::Petersen)),
            Some(Obstruction::UniqueCommonNeighbor { .. })
        ));

        // Unbalanced bipartite.
        assert_eq!(
            rule_out_q2(&gen(Family::CompleteBipartite { m: 3, n: 4 })),
            Some(Obstruction::UnbalancedBipartition { sizes: (3, 4) })
        );
    }

    #[test]
    fn q2_rules_stay_quiet_when_two_values_are_attainable() {
        assert_eq!(rule_out_q2(&gen(Family::Complete { n: 5 })), None);
        assert_eq!(rule_out_q2(&gen(Family::Cycle { n: 4 })), None);
        assert_eq!(rule_out_q2(&gen(Family::CompleteBipartite { m: 3, n: 3 })), None);
        assert_eq!(rule_out_q2(&gen(Family::Hypercube { d: 3 })), None);
        assert_eq!(rule_out_q2(&gen(Family::Hypercube { d: 4 })), None);
        let octahedron = gen(Family::CompleteMultipartite { parts: vec![2, 2, 2] });
        assert_eq!(rule_out_q2(&octahedron), None);
    }

    #[test]
    fn independent_set_rule_catches_shared_neighborhoods() {
        // Book graph: an edge {0, 1} with four pages 2..=5 glued to both
        // ends. No pendant, no cut edge, every non-adjacent pair shares two
        // neighbors, and a triangle rules out bipartiteness, so only the
        // counting rule can fire: pages {2, 3, 4} are three mutually
        // orthogonal rows supported on the two columns {0, 1}.
        let book = Graph::new(
            6,
            [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)],
        )
        .unwrap();
        assert_eq!(
            rule_out_q2(&book),
            Some(Obstruction::IndependentSetCount {
                set: vec![2, 3, 4],
                active_members: 3,
                support_size: 2,
            })
        );
    }

    #[test]
    fn lower_bound_merges_components() {
        let g = gen(Family::Path { n: 3 }).union(&gen(Family::Complete { n: 2 }));
        let lb = lower_bound(&g);
        assert_eq!(lb.value, 3);
        let g = Graph::empty(4);
        assert_eq!(lower_bound(&g).value, 1);
        assert_eq!(lower_bound(&Graph::empty(0)).value, 0);
    }

    #[test]
    fn lower_bound_annotates_trees() {
        let t = gen(Family::PathPlusLeaf { n: 7, i: 3 });
        let lb = lower_bound(&t);
        assert_eq!(lb.tree_diameter, Some(5));
        assert_eq!(lb.value, 6);
    }

    #[test]
    fn cover_of_known_graphs() {
        let cases: Vec<(Graph, usize)> = vec![
            (gen(Family::Complete { n: 6 }), 1),
            (gen(Family::Cycle { n: 6 }), 6),
            (gen(Family::Path { n: 5 }), 4),
            (gen(Family::Petersen), 15),
            (Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap(), 2),
            (gen(Family::CompleteMultipartite { parts: vec![2, 2, 2] }), 4),
            (gen(Family::Cycle { n: 4 }).join(&Graph::empty(1)), 4),
            (Graph::empty(5), 0),
            (gen(Family::Complete { n: 3 }).union(&gen(Family::Complete { n: 3 })), 2),
        ];
        for (g, want) in cases {
            let cover = min_clique_cover(&g).unwrap();
            assert!(cover.exact);
            assert_eq!(cover.cliques.len(), want, "graph {:?}", g.edges());
            let mut covered: std::collections::BTreeSet<(usize, usize)> =
                Default::default();
            for c in &cover.cliques {
                for a in 0..c.len() {
                    for b in a + 1..c.len() {
                        let e = (c[a].min(c[b]), c[a].max(c[b]));
                        assert!(g.has_edge(e.0, e.1));
                        covered.insert(e);
                    }
                }
            }
            assert_eq!(covered.len(), g.edge_count());
        }
    }

    /// Brute-force minimum cover by trying all subsets of maximal cliques in
    /// increasing size order.
    fn brute_cover_size(g: &Graph) -> usize {
        let cliques = g.maximal_cliques().unwrap();
        let edges = g.edges();
        if edges.is_empty() {
            return 0;
        }
        let masks: Vec<u128> = cliques
            .iter()
            .map(|c| {
                let mut m = 0u128;
                for a in 0..c.len() {
                    for b in a + 1..c.len() {
                        let e = (c[a].min(c[b]), c[a].max(c[b]));
                        let idx = edges.iter().position(|&x| x == e).unwrap();
                        m |= 1 << idx;
                    }
                }
                m
            })
            .collect();
        let all = (1u128 << edges.len()) - 1;
        for k in 1..=cliques.len() {
            let mut found = false;
            subset_scan(&masks, 0, k, 0, all, &mut found);
            if found {
                return k;
            }
        }
        unreachable!("maximal cliques cover all edges");
    }

    fn subset_scan(masks: &[u128], from: usize, k: usize, acc: u128, all: u128, found: &mut bool) {
        if *found {
            return;
        }
        if k == 0 {
            if acc == all {
                *found = true;
            }
            return;
        }
        for c in from..masks.len() {
            subset_scan(masks, c + 1, k - 1, acc | masks[c], all, found);
            if *found {
                return;
            }
        }
    }

    #[test]
    fn cover_matches_brute_force_on_random_graphs() {
        for seed in 0..30u64 {
            let n = 4 + (seed % 4) as usize;
            let g = gen(Family::Gnp { n, p: 0.55, seed });
            let cover = min_clique_cover(&g).unwrap();
            assert!(cover.exact);
            assert_eq!(cover.cliques.len(), brute_cover_size(&g), "seed {seed}");
        }
    }

    #[test]
    fn large_triangle_free_components_are_still_exact() {
        let q5 = gen(Family::Hypercube { d: 5 });
        let cover = min_clique_cover(&q5).unwrap();
        assert!(cover.exact);
        assert_eq!(cover.cliques.len(), q5.edge_count());
    }

    #[test]
    fn reports_meet_on_paths_and_cliques() {
        let r = BoundReport::compute(&gen(Family::Path { n: 6 })).unwrap();
        assert_eq!(r.exact, Some(6));
        let r = BoundReport::compute(&gen(Family::Complete { n: 7 })).unwrap();
        assert_eq!(r.exact, Some(2));
        let r = BoundReport::compute(&Graph::empty(5)).unwrap();
        assert_eq!(r.exact, Some(1));
        let r = BoundReport::compute(&Graph::empty(0)).unwrap();
        assert_eq!(r.exact, Some(0));
        let r = BoundReport::compute(&gen(Family::Cycle { n: 5 })).unwrap();
        assert_eq!(r.exact, None);
        assert_eq!(r.lower.value, 3);
        assert_eq!(r.upper.value, 6);
    }
}
