//! graph6 codec (one-byte size form, `n <= 62`).
//!
//! A token is `chr(n + 63)` followed by the upper triangle of the adjacency
//! matrix read column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`),
//! packed six bits per byte, high bit first, zero padded, each byte offset
//! by 63.

use crate::error::{Error, Result};
use crate::graph::Graph;

const OFFSET: u8 = 63;
const MAX_SMALL: usize = 62;

impl Graph {
    /// Decodes a graph6 token.
    pub fn from_graph6(token: &str) -> Result<Graph> {
        let bytes = token.as_bytes();
        let fail = |offset: usize, reason: &str| Error::Graph6 {
            offset,
            reason: reason.to_string(),
        };
        if bytes.is_empty() {
            return Err(fail(0, "empty token"));
        }
        if bytes[0] == b'~' {
            return Err(fail(0, "multi-byte size form is not supported"));
        }
        if !(OFFSET..=OFFSET + MAX_SMALL as u8).contains(&bytes[0]) {
            return Err(fail(0, "size byte out of range"));
        }
        let n = (bytes[0] - OFFSET) as usize;
        let nbits = n * n.saturating_sub(1) / 2;
        let nbytes = nbits.div_ceil(6);
        if bytes.len() != 1 + nbytes {
            return Err(fail(
                bytes.len().min(1 + nbytes),
                &format!("expected {} data bytes, found {}", nbytes, bytes.len() - 1),
            ));
        }
        let mut edges = Vec::new();
        let mut bit_index = 0usize;
        let mut pairs = upper_triangle_pairs(n);
        for (k, &b) in bytes[1..].iter().enumerate() {
            if !(OFFSET..=OFFSET + 63).contains(&b) {
                return Err(fail(1 + k, "data byte out of range"));
            }
            let chunk = b - OFFSET;
            for shift in (0..6).rev() {
                let bit = chunk >> shift & 1;
                if bit_index < nbits {
                    let (i, j) = pairs.next().expect("pair stream matches bit count");
                    if bit == 1 {
                        edges.push((i, j));
                    }
                } else if bit == 1 {
                    return Err(fail(1 + k, "nonzero padding bits"));
                }
                bit_index += 1;
            }
        }
        Graph::new(n, edges)
    }

    /// Encodes this graph as a graph6 token. Fails above 62 vertices.
    pub fn to_graph6(&self) -> Result<String> {
        let n = self.vertex_count();
        if n > MAX_SMALL {
            return Err(Error::Graph6Size {
                n,
                limit: MAX_SMALL,
            });
        }
        let mut out = vec![OFFSET + n as u8];
        let mut chunk = 0u8;
        let mut filled = 0u8;
        for (i, j) in upper_triangle_pairs(n) {
            chunk = chunk << 1 | u8::from(self.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(OFFSET + chunk);
                chunk = 0;
                filled = 0;
            }
        }
        if filled > 0 {
            out.push(OFFSET + (chunk << (6 - filled)));
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
    }
}

fn upper_triangle_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |j| (0..j).map(move |i| (i, j)))
}

#[cfg(test)]
mod tests {
    use crate::graph::{Family, Graph};

    #[test]
    fn known_encodings() {
        assert_eq!(Family::Complete { n: 3 }.generate().unwrap().to_graph6().unwrap(), "Bw");
        assert_eq!(Family::Complete { n: 4 }.generate().unwrap().to_graph6().unwrap(), "C~");
        assert_eq!(Graph::empty(5).to_graph6().unwrap(), "D??");
        assert_eq!(Graph::empty(1).to_graph6().unwrap(), "@");
        assert_eq!(Family::Path { n: 3 }.generate().unwrap().to_graph6().unwrap(), "Bg");
    }

    #[test]
    fn known_decodings() {
        let k3 = Graph::from_graph6("Bw").unwrap();
        assert_eq!(k3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        let p3 = Graph::from_graph6("Bg").unwrap();
        assert_eq!(p3.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(Graph::from_graph6("@").unwrap().vertex_count(), 1);
    }

    #[test]
    fn round_trips() {
        let graphs = [
            Family::Petersen.generate().unwrap(),
            Family::Cycle { n: 7 }.generate().unwrap(),
            Family::CompleteBipartite { m: 3, n: 4 }.generate().unwrap(),
            Family::Hypercube { d: 4 }.generate().unwrap(),
            Graph::empty(0),
            Family::Gnp { n: 20, p: 0.4, seed: 7 }.generate().unwrap(),
        ];
        for g in graphs {
            let enc = g.to_graph6().unwrap();
            let back = Graph::from_graph6(&enc).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Graph::from_graph6("").is_err());
        assert!(Graph::from_graph6("~??").is_err());
        assert!(Graph::from_graph6("B").is_err());
        assert!(Graph::from_graph6("Bww").is_err());
        assert!(Graph::from_graph6("B\x1f").is_err());
        // Padding bits past the last adjacency bit must be zero.
        assert!(Graph::from_graph6("Bx").is_err());
    }

    #[test]
    fn rejects_oversized_graphs() {
        let g = Graph::empty(63);
        assert!(g.to_graph6().is_err());
    }
}
