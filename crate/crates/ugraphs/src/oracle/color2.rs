//! Exhaustive 2-coloring of 3-uniform hypergraphs.
//!
//! The hardness reduction starts from this problem (every hyperedge must see
//! both colors), so the test suite needs a trustworthy solver for small
//! instances. Brute force over bipartitions, with the first vertex pinned to
//! one side since the complement of a valid coloring is valid.

use serde::{Deserialize, Serialize};

/// A 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<[usize; 3]>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<[usize; 3]>) -> Result<Self, String> {
        let h = Hypergraph { n, edges };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (i, e) in self.edges.iter().enumerate() {
            if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
                return Err(format!("hyperedge {i} has repeated vertices: {e:?}"));
            }
            for &v in e {
                if v >= self.n {
                    return Err(format!(
                        "hyperedge {i} mentions vertex {v}, but n = {}",
                        self.n
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let h: Hypergraph = serde_json::from_str(s).map_err(|e| e.to_string())?;
        h.validate()?;
        Ok(h)
    }
}

/// A proper 2-coloring (no monochromatic hyperedge), or `None`. Instances
/// with no hyperedges are trivially colorable; `n` beyond 24 is refused by
/// panic since this is strictly a small-case oracle.
pub fn hypergraph_2coloring(h: &Hypergraph) -> Option<Vec<bool>> {
    assert!(h.n <= 24, "2-coloring oracle is for small instances only");
    h.validate().expect("malformed hypergraph");
    if h.n == 0 {
        return if h.edges.is_empty() { Some(Vec::new()) } else { None };
    }
    // Fix vertex 0 to false; colorings come in complement pairs.
    let half = 1u32 << (h.n - 1);
    'outer: for bits in 0..half {
        let assign = (bits as u64) << 1; // bit v = color of vertex v
        for e in &h.edges {
            let c0 = assign >> e[0] & 1;
            let c1 = assign >> e[1] & 1;
            let c2 = assign >> e[2] & 1;
            if c0 == c1 && c1 == c2 {
                continue 'outer;
            }
        }
        return Some((0..h.n).map(|v| assign >> v & 1 == 1).collect());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Hypergraph {
        // The Fano plane: the smallest 3-uniform hypergraph with no proper
        // 2-coloring.
        Hypergraph::new(
            7,
            vec![
                [0, 1, 2],
                [0, 3, 4],
                [0, 5, 6],
                [1, 3, 5],
                [1, 4, 6],
                [2, 3, 6],
                [2, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn fano_plane_is_not_2_colorable() {
        assert_eq!(hypergraph_2coloring(&fano()), None);
    }

    #[test]
    fn fano_minus_any_line_is_2_colorable() {
        let f = fano();
        for drop in 0..f.edges.len() {
            let mut edges = f.edges.clone();
            edges.remove(drop);
            let h = Hypergraph::new(7, edges).unwrap();
            let coloring = hypergraph_2coloring(&h)
                .unwrap_or_else(|| panic!("dropping line {drop} must admit a coloring"));
            for e in &h.edges {
                let cs = [coloring[e[0]], coloring[e[1]], coloring[e[2]]];
                assert!(cs.contains(&true) && cs.contains(&false));
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        let empty = Hypergraph::new(0, vec![]).unwrap();
        assert_eq!(hypergraph_2coloring(&empty), Some(vec![]));
        let loose = Hypergraph::new(3, vec![]).unwrap();
        assert_eq!(hypergraph_2coloring(&loose), Some(vec![false; 3]));
        assert!(Hypergraph::new(3, vec![[0, 0, 1]]).is_err());
        assert!(Hypergraph::new(3, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = fano();
        let back = Hypergraph::from_json(&h.to_json()).unwrap();
        assert_eq!(h, back);
    }
}
