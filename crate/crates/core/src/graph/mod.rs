//! Simple undirected graphs on vertex set `0..n`, their codecs, and the
//! standard families and products used elsewhere in the crate.

mod families;
mod g6;
mod text;

pub use families::Family;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// An immutable simple graph. Vertices are `0..n`; edges are stored with
/// endpoints ordered, so `(u, v)` always has `u < v`. Optional vertex labels
/// are carried for presentation only and are ignored by equality and codecs.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from an edge list. Loops are rejected; duplicate edges
    /// collapse to one.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adj,
            labels: None,
        })
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph::new(n, []).expect("empty graph is always valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with ordered endpoints, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        let labels = self.labels.clone();
        let mut g = Graph::new(self.n, edges)?;
        g.labels = labels;
        Ok(g)
    }

    // ----- traversal ---------------------------------------------------

    /// BFS distances from `start`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = Some(0);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n >= 1 && (self.n == 1 || self.components().len() == 1)
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.is_connected() && self.edges.len() == self.n - 1
    }

    /// A proper 2-coloring (`colors[v]` in `{0, 1}`) if one exists. Works per
    /// component; each component's least vertex gets color 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Longest shortest-path distance. Errors on disconnected input.
    pub fn diameter(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("diameter of the null graph".into()));
        }
        let mut best = 0;
        for u in 0..self.n {
            for d in self.bfs_distances(u) {
                match d {
                    Some(d) => best = best.max(d),
                    None => return Err(Error::Disconnected("diameter")),
                }
            }
        }
        Ok(best)
    }

    // ----- structure queries -------------------------------------------

    /// Vertices of degree one.
    pub fn pendant_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Bridges: edges whose removal disconnects their component.
    pub fn cut_edges(&self) -> Vec<(usize, usize)> {
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut out = Vec::new();
        let mut timer = 0usize;
        // Iterative DFS: (vertex, parent, neighbor cursor).
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while !stack.is_empty() {
                let top = stack.len() - 1;
                let (u, parent, cursor) = stack[top];
                if cursor < self.adj[u].len() {
                    stack[top].2 += 1;
                    let w = self.adj[u][cursor];
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > disc[p] {
                            out.push((p.min(u), p.max(u)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertices adjacent to both `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        self.adj[u]
            .iter()
            .filter(|w| self.adj[v].binary_search(w).is_ok())
            .copied()
            .collect()
    }

    /// Independent sets of size 2 through `kmax`, in lexicographic order,
    /// truncated to at most `max_sets` entries.
    pub fn independent_sets_up_to(&self, kmax: usize, max_sets: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_independent(0, kmax, max_sets, &mut current, &mut out);
        out
    }

    fn extend_independent(
        &self,
        from: usize,
        kmax: usize,
        max_sets: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() >= kmax || out.len() >= max_sets {
            return;
        }
        for v in from..self.n {
            if out.len() >= max_sets {
                return;
            }
            if current.iter().any(|&u| self.has_edge(u, v)) {
                continue;
            }
            current.push(v);
            if current.len() >= 2 {
                out.push(current.clone());
            }
            self.extend_independent(v + 1, kmax, max_sets, current, out);
            current.pop();
        }
    }

    /// The subgraph induced by `verts`; vertex `k` of the result corresponds
    /// to `verts[k]`. Vertices must be distinct and in range.
    pub fn induced(&self, verts: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in verts.iter().enumerate() {
            if v >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} out of range for {} vertices",
                    self.n
                )));
            }
            if index[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {v} listed twice")));
            }
            index[v] = k;
        }
        let edges = self.edges.iter().filter_map(|&(u, v)| {
            match (index[u], index[v]) {
                (a, b) if a != usize::MAX && b != usize::MAX => Some((a, b)),
                _ => None,
            }
        });
        Graph::new(verts.len(), edges)
    }

    /// All maximal cliques (Bron–Kerbosch with pivoting), each sorted, the
    /// list ordered lexicographically. Supports up to 128 vertices.
    pub fn maximal_cliques(&self) -> Result<Vec<Vec<usize>>> {
        if self.n > 128 {
            return Err(Error::InvalidArgument(
                "maximal clique enumeration supports at most 128 vertices".into(),
            ));
        }
        let masks: Vec<u128> = (0..self.n)
            .map(|v| self.adj[v].iter().fold(0u128, |m, &w| m | (1 << w)))
            .collect();
        let mut out = Vec::new();
        let all = if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        };
        self.bron_kerbosch(0, all, 0, &masks, &mut out);
        let mut cliques: Vec<Vec<usize>> = out
            .into_iter()
            .map(|m| (0..self.n).filter(|&v| m >> v & 1 == 1).collect())
            .collect();
        cliques.sort();
        Ok(cliques)
    }

    fn bron_kerbosch(&self, r: u128, mut p: u128, mut x: u128, masks: &[u128], out: &mut Vec<u128>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = {
            let candidates = p | x;
            let mut best = usize::MAX;
            let mut best_count = usize::MAX;
            for v in 0..self.n {
                if candidates >> v & 1 == 1 {
                    let count = (p & !masks[v]).count_ones() as usize;
                    if count < best_count {
                        best_count = count;
                        best = v;
                    }
                }
            }
            best
        };
        let mut rest = p & !masks[pivot];
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let bit = 1u128 << v;
            self.bron_kerbosch(r | bit, p & masks[v], x & masks[v], masks, out);
            p &= !bit;
            x |= bit;
        }
    }

    // ----- composition -------------------------------------------------

    /// Disjoint union; `other`'s vertices are shifted by `self.n`.
    pub fn union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        Graph::new(n, edges).expect("union of valid graphs is valid")
    }

    /// Join: disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let cross = (0..self.n).flat_map(|u| (0..other.n).map(move |v| (u, v + self.n)));
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)))
            .chain(cross)
            .collect::<Vec<_>>();
        Graph::new(n, edges).expect("join of valid graphs is valid")
    }

    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(self.n, edges).expect("complement of a valid graph is valid")
    }

    /// Cartesian product. Vertex `(a, b)` maps to index `b * self.n + a`, so
    /// a product with `K_2` lists one full copy of `self` before the other.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let n = self.n * other.n;
        let idx = |a: usize, b: usize| b * self.n + a;
        let mut edges = Vec::new();
        for b in 0..other.n {
            for &(u, v) in &self.edges {
                edges.push((idx(u, b), idx(v, b)));
            }
        }
        for a in 0..self.n {
            for &(b, c) in &other.edges {
                edges.push((idx(a, b), idx(a, c)));
            }
        }
        Graph::new(n, edges).expect("product of valid graphs is valid")
    }

    /// Corona with `K_1`: one new pendant neighbor for every vertex; the
    /// pendant of vertex `v` is `self.n + v`.
    pub fn corona_k1(&self) -> Graph {
        let n = 2 * self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain((0..self.n).map(|v| (v, v + self.n)));
        Graph::new(n, edges).expect("corona of a valid graph is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Family::Path { n }.generate().unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Family::Cycle { n }.generate().unwrap()
    }

    #[test]
    fn new_rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(1, 1)]).is_err());
    }

    #[test]
    fn new_dedupes_and_sorts() {
        let g = Graph::new(4, [(2, 1), (1, 2), (0, 3)]).unwrap();
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn adjacency_lists_are_sorted() {
        let g = Graph::new(5, [(0, 4), (0, 2), (0, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 4]);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn components_and_connectivity() {
        let g = Graph::new(6, [(0, 2), (2, 4), (1, 5)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 2, 4], vec![1, 5], vec![3]]);
        assert!(!g.is_connected());
        assert!(path(6).is_connected());
        assert!(!Graph::empty(0).is_connected());
    }

    #[test]
    fn trees_and_diameter() {
        assert!(path(7).is_tree());
        assert!(!cycle(4).is_tree());
        assert_eq!(path(7).diameter().unwrap(), 6);
        assert_eq!(cycle(8).diameter().unwrap(), 4);
        assert_eq!(Family::Petersen.generate().unwrap().diameter().unwrap(), 2);
        assert!(Graph::empty(2).diameter().is_err());
    }

    #[test]
    fn bipartition_colors_least_vertex_zero() {
        let g = cycle(6);
        assert_eq!(g.bipartition().unwrap(), vec![0, 1, 0, 1, 0, 1]);
        assert!(cycle(5).bipartition().is_none());
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.bipartition().unwrap(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn pendants_and_bridges() {
        let g = path(5);
        assert_eq!(g.pendant_vertices(), vec![0, 4]);
        assert_eq!(g.cut_edges(), g.edges().to_vec());
        assert!(cycle(5).cut_edges().is_empty());
        let lollipop = Graph::new(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(lollipop.cut_edges(), vec![(2, 3), (3, 4)]);
    }

    #[test]
    fn common_neighbors_of_diamond() {
        let diamond = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(diamond.common_neighbors(0, 3), vec![1, 2]);
        assert_eq!(diamond.common_neighbors(1, 2), vec![0, 3]);
    }

    #[test]
    fn independent_sets_enumeration() {
        let g = cycle(5);
        let sets = g.independent_sets_up_to(2, usize::MAX);
        assert_eq!(sets, vec![
            vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4],
        ]);
        let bigger = cycle(6).independent_sets_up_to(3, usize::MAX);
        assert!(bigger.contains(&vec![0, 2, 4]));
        assert!(bigger.iter().all(|s| s.len() >= 2 && s.len() <= 3));
        assert_eq!(cycle(6).independent_sets_up_to(3, 4).len(), 4);
    }

    #[test]
    fn induced_subgraphs() {
        let g = cycle(5);
        let h = g.induced(&[0, 1, 2]).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
        let swapped = g.induced(&[2, 1, 0]).unwrap();
        assert_eq!(swapped.edges(), &[(0, 1), (1, 2)]);
        assert!(g.induced(&[0, 0]).is_err());
        assert!(g.induced(&[9]).is_err());
    }

    #[test]
    fn maximal_cliques_of_small_graphs() {
        let diamond = Graph::new(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            diamond.maximal_cliques().unwrap(),
            vec![vec![0, 1, 2], vec![1, 2, 3]]
        );
        let k4 = Family::Complete { n: 4 }.generate().unwrap();
        assert_eq!(k4.maximal_cliques().unwrap(), vec![vec![0, 1, 2, 3]]);
        let c5 = cycle(5);
        assert_eq!(c5.maximal_cliques().unwrap().len(), 5);
    }

    #[test]
    fn union_offsets_second_operand() {
        let g = path(2).union(&path(3));
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edges(), &[(0, 1), (2, 3), (3, 4)]);
    }

    #[test]
    fn join_is_complete_between_sides() {
        let w4 = cycle(4).join(&Graph::empty(1));
        assert_eq!(w4.vertex_count(), 5);
        assert_eq!(w4.degree(4), 4);
        assert_eq!(w4.edge_count(), 8);
    }

    #[test]
    fn complement_of_path() {
        let g = path(4).complement();
        assert_eq!(g.edges(), &[(0, 2), (0, 3), (1, 3)]);
        assert_eq!(path(4).complement().complement(), path(4));
    }

    #[test]
    fn product_with_k2_stacks_two_copies() {
        let base = path(3);
        let k2 = Family::Complete { n: 2 }.generate().unwrap();
        let g = base.cartesian_product(&k2);
        assert_eq!(g.vertex_count(), 6);
        for (u, v) in base.edges() {
            assert!(g.has_edge(*u, *v));
            assert!(g.has_edge(*u + 3, *v + 3));
        }
        for v in 0..3 {
            assert!(g.has_edge(v, v + 3));
        }
        assert_eq!(g.edge_count(), 2 * base.edge_count() + 3);
    }

    #[test]
    fn square_of_k2_is_four_cycle() {
        let k2 = Family::Complete { n: 2 }.generate().unwrap();
        let q2 = k2.cartesian_product(&k2);
        assert_eq!(q2.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn corona_hangs_one_pendant_per_vertex() {
        let g = cycle(3).corona_k1();
        assert_eq!(g.vertex_count(), 6);
        for v in 0..3 {
            assert!(g.has_edge(v, v + 3));
            assert_eq!(g.degree(v + 3), 1);
        }
    }
}
