//! Concrete representations — one connected host-node set per graph vertex —
//! and the verifier that checks intersection / properness / Helly semantics.
//! Every yes-answer anywhere in the crate is expected to come back through
//! `verify` before being reported.

use crate::graph::{SimpleGraph, Vertex, VertexSet};
use crate::host::{HostError, HostGraph, SubdividedHost};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("model is defined for {got} vertices, graph has {expected}")]
    VertexCount { expected: usize, got: usize },
    #[error("vertex {0}: model set is empty")]
    EmptyModel(Vertex),
    #[error("vertex {0}: model set is not connected in the host")]
    DisconnectedModel(Vertex),
    #[error("vertex {vertex}: model contains non-existent host node {node}")]
    BadNode { vertex: Vertex, node: usize },
    #[error(transparent)]
    Host(#[from] HostError),
    #[error("malformed representation input: {0}")]
    Malformed(String),
}

/// A representation of a graph on a subdivided host.
#[derive(Clone, Debug)]
pub struct Representation {
    pub host: SubdividedHost,
    /// `model[v]` = sorted host-node ids of vertex v's connected subgraph.
    pub model: Vec<Vec<usize>>,
}

/// What the verifier found.
#[derive(Clone, Debug)]
pub struct RepresentationVerdict {
    pub is_intersection_model: bool,
    pub is_proper: bool,
    /// Maximal cliques of the represented graph whose models have no common
    /// host node.
    pub helly_failures: Vec<VertexSet>,
    /// Per vertex: does its model touch a circle node of the host?
    pub on_circle: Vec<bool>,
}

impl RepresentationVerdict {
    pub fn is_helly(&self) -> bool {
        self.helly_failures.is_empty()
    }
}

/// Bitmaps over host nodes, one word per 64 nodes.
fn bitmap(nodes: &[usize], words: usize) -> Vec<u64> {
    let mut bm = vec![0u64; words];
    for &v in nodes {
        bm[v / 64] |= 1 << (v % 64);
    }
    bm
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

impl Representation {
    /// Check the representation against a graph. Errors only on structural
    /// violations (missing/empty/disconnected models); semantic mismatches
    /// are reported in the verdict.
    pub fn verify(&self, g: &SimpleGraph) -> Result<RepresentationVerdict, RepError> {
        let n = g.n();
        if self.model.len() != n {
            return Err(RepError::VertexCount { expected: n, got: self.model.len() });
        }
        let total = self.host.total_nodes();
        for (v, nodes) in self.model.iter().enumerate() {
            if nodes.is_empty() {
                return Err(RepError::EmptyModel(v));
            }
            if let Some(&bad) = nodes.iter().find(|&&x| x >= total) {
                return Err(RepError::BadNode { vertex: v, node: bad });
            }
            if !self.host.is_connected_set(nodes) {
                return Err(RepError::DisconnectedModel(v));
            }
        }
        let words = total.div_ceil(64);
        let maps: Vec<Vec<u64>> = self.model.iter().map(|m| bitmap(m, words)).collect();

        let mut is_intersection_model = true;
        let mut is_proper = true;
        for u in 0..n {
            for v in (u + 1)..n {
                if intersects(&maps[u], &maps[v]) != g.has_edge(u, v) {
                    is_intersection_model = false;
                }
            }
        }
        // Proper: no model properly contained in another. Equal sets are
        // mutual containment, not proper containment, so they pass.
        for u in 0..n {
            for v in 0..n {
                if u != v && subset(&maps[u], &maps[v]) && maps[u] != maps[v] {
                    is_proper = false;
                }
            }
        }

        let mut helly_failures = Vec::new();
        for clique in g.maximal_cliques() {
            let mut common = maps[clique.first().expect("clique nonempty")].clone();
            for v in clique.iter() {
                for (w, m) in common.iter_mut().zip(&maps[v]) {
                    *w &= m;
                }
            }
            if common.iter().all(|&w| w == 0) {
                helly_failures.push(clique);
            }
        }
        if is_intersection_model {
            // An edge's two models intersect, so only cliques of size ≥ 3
            // can fail Helly.
            debug_assert!(helly_failures.iter().all(|c| c.len() >= 3));
        }

        let on_circle = self
            .model
            .iter()
            .map(|nodes| nodes.iter().any(|&v| self.host.on_circle(v)))
            .collect();

        Ok(RepresentationVerdict { is_intersection_model, is_proper, helly_failures, on_circle })
    }

    pub fn to_json(&self) -> String {
        let counts: BTreeMap<String, usize> = self
            .host
            .base_edges()
            .iter()
            .zip(self.host.counts())
            .filter(|&(_, &c)| c > 0)
            .map(|(&(u, v), &c)| (format!("{}-{}", u, v), c))
            .collect();
        let model: BTreeMap<String, Vec<usize>> = self
            .model
            .iter()
            .enumerate()
            .map(|(v, nodes)| (v.to_string(), nodes.clone()))
            .collect();
        let j = RepJson {
            host: serde_json::from_str(&self.host.base.to_json()).expect("valid host json"),
            counts,
            model,
        };
        serde_json::to_string_pretty(&j).expect("representation serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, RepError> {
        let j: RepJson =
            serde_json::from_str(s).map_err(|e| RepError::Malformed(e.to_string()))?;
        let host_str = serde_json::to_string(&j.host).expect("re-serialize host");
        let base = HostGraph::from_json(&host_str)?;
        let mut map = BTreeMap::new();
        for (k, c) in &j.counts {
            let (u, v) = k
                .split_once('-')
                .ok_or_else(|| RepError::Malformed(format!("bad edge key {k:?}")))?;
            let u: usize =
                u.parse().map_err(|_| RepError::Malformed(format!("bad edge key {k:?}")))?;
            let v: usize =
                v.parse().map_err(|_| RepError::Malformed(format!("bad edge key {k:?}")))?;
            map.insert((u, v), *c);
        }
        let host = base.subdivide_map(&map)?;
        let n = j.model.len();
        let mut model = vec![Vec::new(); n];
        for (k, nodes) in j.model {
            let v: usize = k
                .parse()
                .map_err(|_| RepError::Malformed(format!("bad vertex key {k:?}")))?;
            if v >= n {
                return Err(RepError::Malformed(format!(
                    "vertex key {v} out of range for {n} model entries"
                )));
            }
            let mut nodes = nodes;
            nodes.sort_unstable();
            nodes.dedup();
            model[v] = nodes;
        }
        Ok(Representation { host, model })
    }
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    host: serde_json::Value,
    #[serde(default)]
    counts: BTreeMap<String, usize>,
    model: BTreeMap<String, Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::HostGraph;

    fn rep(host: &str, counts: &[usize], model: &[&[usize]]) -> Representation {
        let h = HostGraph::from_description(host).unwrap();
        let s = h.subdivide(counts).unwrap();
        Representation { host: s, model: model.iter().map(|m| m.to_vec()).collect() }
    }

    #[test]
    fn disjoint_singletons_on_k2() {
        let g = SimpleGraph::empty(2).unwrap();
        let r = rep("K2", &[0], &[&[0], &[1]]);
        let v = r.verify(&g).unwrap();
        assert!(v.is_intersection_model);
        assert!(v.is_proper);
        assert!(v.is_helly());
    }

    #[test]
    fn nested_intervals_not_proper() {
        // [1..3] inside [1..4] on a subdivided K2 (path of 6 nodes:
        // 0, 2, 3, 4, 5, 1 in path order).
        let g = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let r = rep("K2", &[4], &[&[2, 3, 4], &[2, 3, 4, 5]]);
        let v = r.verify(&g).unwrap();
        assert!(v.is_intersection_model);
        assert!(!v.is_proper);
    }

    #[test]
    fn equal_models_count_as_proper() {
        let g = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let r = rep("K2", &[0], &[&[0, 1], &[0, 1]]);
        let v = r.verify(&g).unwrap();
        assert!(v.is_intersection_model);
        assert!(v.is_proper);
    }

    #[test]
    fn three_arcs_helly_failure() {
        // Three arcs on C6 pairwise overlapping with no common node.
        let g = SimpleGraph::complete(3);
        let r = rep("C6", &[0; 6], &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        let v = r.verify(&g).unwrap();
        assert!(v.is_intersection_model);
        assert!(v.is_proper);
        assert_eq!(v.helly_failures, vec![VertexSet::from_iter([0, 1, 2])]);
        assert!(v.on_circle.iter().all(|&b| b));
    }

    #[test]
    fn structural_errors_name_the_vertex() {
        let g = SimpleGraph::empty(2).unwrap();
        let r = rep("K2", &[1], &[&[0], &[]]);
        assert!(matches!(r.verify(&g), Err(RepError::EmptyModel(1))));
        let r = rep("K2", &[1], &[&[0, 1], &[2]]);
        // {0,1} skips the interior node 2 → disconnected.
        assert!(matches!(r.verify(&g), Err(RepError::DisconnectedModel(0))));
        let r = rep("K2", &[0], &[&[0], &[7]]);
        assert!(matches!(r.verify(&g), Err(RepError::BadNode { vertex: 1, node: 7 })));
    }

    #[test]
    fn rep_json_round_trip() {
        let g = SimpleGraph::complete(3);
        let r = rep("C6", &[0; 6], &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        let s = r.to_json();
        let r2 = Representation::from_json(&s).unwrap();
        let v = r2.verify(&g).unwrap();
        assert!(v.is_intersection_model && v.is_proper);
        let normalized: Vec<Vec<usize>> = r
            .model
            .iter()
            .map(|m| {
                let mut m = m.clone();
                m.sort_unstable();
                m
            })
            .collect();
        assert_eq!(r2.model, normalized);
    }
}
