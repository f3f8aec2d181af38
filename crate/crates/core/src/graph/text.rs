//! Plain-text edge list: first line the vertex count, then one `u v` pair
//! per line, vertices 0-indexed.

use crate::error::{Error, Result};
use crate::graph::Graph;

impl Graph {
    pub fn from_edge_list_text(text: &str) -> Result<Graph> {
        let fail = |line: usize, reason: &str| Error::EdgeList {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| fail(1, "missing vertex count"))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| fail(1, "vertex count is not a number"))?;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| fail(idx + 1, "expected two vertex numbers"))?;
            let v: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| fail(idx + 1, "expected two vertex numbers"))?;
            if parts.next().is_some() {
                return Err(fail(idx + 1, "trailing tokens after edge"));
            }
            if u >= n || v >= n {
                return Err(fail(idx + 1, &format!("vertex out of range for n = {n}")));
            }
            if u == v {
                return Err(fail(idx + 1, "loops are not allowed"));
            }
            edges.push((u, v));
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count());
        for &(u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::Graph;

    #[test]
    fn parses_and_prints() {
        let text = "4\n0 1\n1 2\n\n2 3\n";
        let g = Graph::from_edge_list_text(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.to_edge_list_text(), "4\n0 1\n1 2\n2 3\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Graph::from_edge_list_text("3\n0 1\n0 9\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = Graph::from_edge_list_text("3\n0 1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(Graph::from_edge_list_text("").is_err());
        assert!(Graph::from_edge_list_text("x\n").is_err());
    }
}
