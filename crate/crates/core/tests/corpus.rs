//! Validates the checked-in graph6 corpora: line counts, connectivity, and
//! pairwise non-isomorphism. The files are fixed inputs, not regenerated
//! here; these tests pin down exactly what they contain.

use std::collections::BTreeSet;

use qgraph_core::Graph;

fn corpus(name: &str) -> Vec<String> {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {path}: {e}"))
        .lines()
        .map(str::to_string)
        .collect()
}

fn pair_bit(a: usize, b: usize) -> u64 {
    1u64 << (b * (b - 1) / 2 + a)
}

/// Minimum edge bitmask over all vertex relabelings; equal masks mean
/// isomorphic graphs. Exhaustive over permutations, so only for n <= 7.
fn canonical_form(g: &Graph) -> (usize, u64) {
    let n = g.vertex_count();
    assert!(n <= 7, "exhaustive canonical form is for tiny graphs only");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mut mask = 0u64;
        for &(u, v) in g.edges() {
            let (a, b) = if perm[u] < perm[v] {
                (perm[u], perm[v])
            } else {
                (perm[v], perm[u])
            };
            mask |= pair_bit(a, b);
        }
        best = best.min(mask);
        let mut i = n.saturating_sub(1);
        while i > 0 && perm[i - 1] >= perm[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while perm[j] <= perm[i - 1] {
            j -= 1;
        }
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    (n, best)
}

fn load_distinct(name: &str) -> Vec<Graph> {
    let lines = corpus(name);
    let graphs: Vec<Graph> = lines
        .iter()
        .map(|l| Graph::from_graph6(l).unwrap_or_else(|e| panic!("{name}: bad line {l:?}: {e}")))
        .collect();
    let forms: BTreeSet<(usize, u64)> = graphs.iter().map(canonical_form).collect();
    assert_eq!(forms.len(), graphs.len(), "{name} has isomorphic duplicates");
    graphs
}

fn count_by_order(graphs: &[Graph]) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for g in graphs {
        let n = g.vertex_count();
        match counts.iter_mut().find(|(order, _)| *order == n) {
            Some((_, c)) => *c += 1,
            None => counts.push((n, 1)),
        }
    }
    counts
}

#[test]
fn connected_up_to_five_vertices() {
    let graphs = load_distinct("connected_le5.g6");
    assert_eq!(graphs.len(), 31);
    assert_eq!(
        count_by_order(&graphs),
        vec![(1, 1), (2, 1), (3, 2), (4, 6), (5, 21)]
    );
    for g in &graphs {
        assert!(g.is_connected(), "{:?}", g.edges());
    }
    let lines = corpus("connected_le5.g6");
    assert!(lines.iter().any(|l| l == "Bw"), "K_3 present");
    assert!(lines.iter().any(|l| l == "C~"), "K_4 present");
}

#[test]
fn connected_six_vertices() {
    let graphs = load_distinct("connected_6.g6");
    assert_eq!(graphs.len(), 112);
    for g in &graphs {
        assert_eq!(g.vertex_count(), 6);
        assert!(g.is_connected());
    }
}

#[test]
fn connected_seven_vertices() {
    let graphs = load_distinct("connected_7.g6");
    assert_eq!(graphs.len(), 853);
    for g in &graphs {
        assert_eq!(g.vertex_count(), 7);
        assert!(g.is_connected());
    }
}

#[test]
fn trees_up_to_seven_vertices() {
    let trees = load_distinct("trees_le7.g6");
    assert_eq!(trees.len(), 25);
    assert_eq!(
        count_by_order(&trees),
        vec![(1, 1), (2, 1), (3, 1), (4, 2), (5, 3), (6, 6), (7, 11)]
    );
    for t in &trees {
        assert!(t.is_connected());
        assert_eq!(t.edge_count(), t.vertex_count() - 1, "not a tree");
    }

    // every tree also appears in the connected corpus of its order
    let mut connected: BTreeSet<(usize, u64)> = BTreeSet::new();
    for name in ["connected_le5.g6", "connected_6.g6", "connected_7.g6"] {
        for line in corpus(name) {
            connected.insert(canonical_form(&Graph::from_graph6(&line).unwrap()));
        }
    }
    for t in &trees {
        assert!(connected.contains(&canonical_form(t)));
    }
}
