//! Named graph families.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A parameterized graph family.
///
/// `SGraph { m, n }` is a four-cycle `v1 u1 v2 u2` with a path of `m` edges
/// grafted onto `v1` and a path of `n` edges grafted onto `v2`. Vertices are
/// indexed `[v1, u1, v2, u2]` followed by the first path's vertices in path
/// order, then the second path's. `SGraphPlusEdge { m }` additionally joins
/// `u1` (index 1) to the first path vertex (index 4).
///
/// `CliquePath { n, k }` is a clique on vertices `0..n-k+2` with a path of
/// `k - 2` further edges appended to its last vertex; `k = 2` gives the
/// complete graph and `k = n` the path. `k = 1` is the edgeless graph.
///
/// `House` is the 5-cycle plus one chord; `Gem` is the path on four vertices
/// plus a vertex adjacent to all of it.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Empty { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    CompleteBipartite { m: usize, n: usize },
    CompleteMultipartite { parts: Vec<usize> },
    Hypercube { d: usize },
    SGraph { m: usize, n: usize },
    SGraphPlusEdge { m: usize },
    CliquePath { n: usize, k: usize },
    House,
    Gem,
    Petersen,
    PathPlusChord { n: usize, i: usize },
    PathPlusLeaf { n: usize, i: usize },
    Gnp { n: usize, p: f64, seed: u64 },
}

impl Family {
    pub fn generate(&self) -> Result<Graph> {
        match *self {
            Family::Empty { n } => Ok(Graph::empty(n)),
            Family::Path { n } => {
                require(n >= 1, "path needs at least one vertex")?;
                Graph::new(n, (1..n).map(|v| (v - 1, v)))
            }
            Family::Cycle { n } => {
                require(n >= 3, "cycle needs at least three vertices")?;
                Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
            }
            Family::Complete { n } => {
                require(n >= 1, "complete graph needs at least one vertex")?;
                Graph::new(n, pairs(0, n))
            }
            Family::CompleteBipartite { m, n } => {
                require(m >= 1 && n >= 1, "bipartite parts must be nonempty")?;
                Graph::new(m + n, (0..m).flat_map(|u| (m..m + n).map(move |v| (u, v))))
            }
            Family::CompleteMultipartite { ref parts } => complete_multipartite(parts),
            Family::Hypercube { d } => {
                require(d <= 16, "hypercube dimension capped at 16")?;
                let k2 = Family::Complete { n: 2 }.generate()?;
                let mut g = Family::Complete { n: 1 }.generate()?;
                for _ in 0..d {
                    g = g.cartesian_product(&k2);
                }
                Ok(g)
            }
            Family::SGraph { m, n } => s_graph(m, n),
            Family::SGraphPlusEdge { m } => {
                require(m >= 1, "grafted paths must be nonempty")?;
                s_graph(m, m)?.with_edge(1, 4)
            }
            Family::CliquePath { n, k } => clique_path(n, k),
            Family::House => {
                let c5 = Family::Cycle { n: 5 }.generate()?;
                c5.with_edge(2, 4)
            }
            Family::Gem => {
                let c5 = Family::Cycle { n: 5 }.generate()?;
                c5.with_edge(1, 4)?.with_edge(2, 4)
            }
            Family::Petersen => {
                let outer = (0..5).map(|i| (i, (i + 1) % 5));
                let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
                let spokes = (0..5).map(|i| (i, i + 5));
                Graph::new(10, outer.chain(inner).chain(spokes))
            }
            Family::PathPlusChord { n, i } => {
                require(n >= 3 && (1..=n - 2).contains(&i), "chord {v_i, v_i+2} needs 1 <= i <= n-2")?;
                let path = Family::Path { n }.generate()?;
                path.with_edge(i - 1, i + 1)
            }
            Family::PathPlusLeaf { n, i } => {
                require(
                    n >= 4 && (2..=n - 2).contains(&i),
                    "leaf attaches to an interior vertex: 2 <= i <= n-2",
                )?;
                let spine = (1..n - 1).map(|v| (v - 1, v));
                Graph::new(n, spine.chain([(i - 1, n - 1)]))
            }
            Family::Gnp { n, p, seed } => {
                require((0.0..=1.0).contains(&p), "edge probability must be in [0, 1]")?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::new(n, edges)
            }
        }
    }

    /// Parses a family from a name and textual parameters, as used by the
    /// command-line interface.
    pub fn parse(name: &str, args: &[String]) -> Result<Family> {
        let bad = |msg: &str| Error::InvalidArgument(format!("family {name}: {msg}"));
        let num = |k: usize| -> Result<usize> {
            args.get(k)
                .and_then(|a| a.parse().ok())
                .ok_or_else(|| bad(&format!("expected numeric parameter #{}", k + 1)))
        };
        let arity = |want: usize| -> Result<()> {
            if args.len() == want {
                Ok(())
            } else {
                Err(bad(&format!("expected {} parameter(s), got {}", want, args.len())))
            }
        };
        match name {
            "empty" => {
                arity(1)?;
                Ok(Family::Empty { n: num(0)? })
            }
            "path" => {
                arity(1)?;
                Ok(Family::Path { n: num(0)? })
            }
            "cycle" => {
                arity(1)?;
                Ok(Family::Cycle { n: num(0)? })
            }
            "complete" => {
                arity(1)?;
                Ok(Family::Complete { n: num(0)? })
            }
            "complete-bipartite" => {
                arity(2)?;
                Ok(Family::CompleteBipartite {
                    m: num(0)?,
                    n: num(1)?,
                })
            }
            "multipartite" => {
                if args.is_empty() {
                    return Err(bad("expected at least one part size"));
                }
                let parts = (0..args.len()).map(num).collect::<Result<Vec<_>>>()?;
                Ok(Family::CompleteMultipartite { parts })
            }
            "hypercube" => {
                arity(1)?;
                Ok(Family::Hypercube { d: num(0)? })
            }
            "s-graph" => {
                arity(2)?;
                Ok(Family::SGraph {
                    m: num(0)?,
                    n: num(1)?,
                })
            }
            "s-graph-plus-edge" => {
                arity(1)?;
                Ok(Family::SGraphPlusEdge { m: num(0)? })
            }
            "clique-path" => {
                arity(2)?;
                Ok(Family::CliquePath {
                    n: num(0)?,
                    k: num(1)?,
                })
            }
            "house" => {
                arity(0)?;
                Ok(Family::House)
            }
            "gem" => {
                arity(0)?;
                Ok(Family::Gem)
            }
            "petersen" => {
                arity(0)?;
                Ok(Family::Petersen)
            }
            "path-plus-chord" => {
                arity(2)?;
                Ok(Family::PathPlusChord {
                    n: num(0)?,
                    i: num(1)?,
                })
            }
            "path-plus-leaf" => {
                arity(2)?;
                Ok(Family::PathPlusLeaf {
                    n: num(0)?,
                    i: num(1)?,
                })
            }
            "gnp" => {
                arity(3)?;
                let p: f64 = args[1]
                    .parse()
                    .map_err(|_| bad("edge probability must be a number"))?;
                Ok(Family::Gnp {
                    n: num(0)?,
                    p,
                    seed: num(2)? as u64,
                })
            }
            _ => Err(bad("unknown family")),
        }
    }

    /// The canonical textual form, `name [params...]`.
    pub fn describe(&self) -> String {
        match self {
            Family::Empty { n } => format!("empty {n}"),
            Family::Path { n } => format!("path {n}"),
            Family::Cycle { n } => format!("cycle {n}"),
            Family::Complete { n } => format!("complete {n}"),
            Family::CompleteBipartite { m, n } => format!("complete-bipartite {m} {n}"),
            Family::CompleteMultipartite { parts } => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                format!("multipartite {}", parts.join(" "))
            }
            Family::Hypercube { d } => format!("hypercube {d}"),
            Family::SGraph { m, n } => format!("s-graph {m} {n}"),
            Family::SGraphPlusEdge { m } => format!("s-graph-plus-edge {m}"),
            Family::CliquePath { n, k } => format!("clique-path {n} {k}"),
            Family::House => "house".into(),
            Family::Gem => "gem".into(),
            Family::Petersen => "petersen".into(),
            Family::PathPlusChord { n, i } => format!("path-plus-chord {n} {i}"),
            Family::PathPlusLeaf { n, i } => format!("path-plus-leaf {n} {i}"),
            Family::Gnp { n, p, seed } => format!("gnp {n} {p} {seed}"),
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.into()))
    }
}

fn pairs(lo: usize, hi: usize) -> impl Iterator<Item = (usize, usize)> {
    (lo..hi).flat_map(move |u| (u + 1..hi).map(move |v| (u, v)))
}

fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    require(!parts.is_empty(), "multipartite graph needs at least one part")?;
    require(
        parts.iter().all(|&p| p >= 1),
        "multipartite parts must be nonempty",
    )?;
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (idx, &p) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat(idx).take(p));
    }
    let edges = pairs(0, n).filter(|&(u, v)| part_of[u] != part_of[v]);
    Graph::new(n, edges)
}

fn s_graph(m: usize, n: usize) -> Result<Graph> {
    require(m >= 1 && n >= 1, "grafted paths must be nonempty")?;
    let total = m + n + 4;
    let mut edges = vec![(0, 1), (1, 2), (2, 3), (0, 3)];
    let mut labels = vec!["v1".into(), "u1".into(), "v2".into(), "u2".into()];
    let mut next_u = 3usize;
    let mut next_v = 3usize;
    let mut attach = 0usize;
    for (path_len, anchor) in [(m, 0usize), (n, 2usize)] {
        let mut prev = anchor;
        for step in 0..path_len {
            let idx = 4 + attach + step;
            edges.push((prev, idx));
            // Path vertices alternate the u and v sides, starting opposite
            // the v-type anchor.
            if step % 2 == 0 {
                labels.push(format!("u{next_u}"));
                next_u += 1;
            } else {
                labels.push(format!("v{next_v}"));
                next_v += 1;
            }
            prev = idx;
        }
        attach += path_len;
    }
    Graph::new(total, edges)?.with_labels(labels)
}

fn clique_path(n: usize, k: usize) -> Result<Graph> {
    require(n >= 1, "graph needs at least one vertex")?;
    require(k >= 1 && k <= n, "needs 1 <= k <= n")?;
    if k == 1 {
        return Ok(Graph::empty(n));
    }
    let clique_end = n - k + 2;
    let edges = pairs(0, clique_end).chain((clique_end..n).map(|v| (v - 1, v)));
    let g = Graph::new(n, edges)?;
    g.with_labels((1..=n).map(|i| format!("v{i}")).collect())
}
