//! Host graphs and their subdivisions.
//!
//! A host is the fixed graph whose subdivisions carry the models: trees,
//! unicyclic graphs (one distinguished cycle, the "circle"), or small general
//! graphs like B (two triangles sharing a node). Base hosts stay within the
//! `SimpleGraph` size cap; subdivided hosts get their own adjacency storage
//! because inserting up to 2·|G| nodes per edge routinely passes 64 nodes.

use crate::graph::{GraphError, SimpleGraph, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HostKind {
    Tree,
    Unicyclic,
    General,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HostError {
    #[error("host must be connected")]
    Disconnected,
    #[error("host must be non-empty")]
    Empty,
    #[error("declared kind {declared:?} but structure is {actual:?}")]
    KindMismatch { declared: HostKind, actual: HostKind },
    #[error("declared circle does not match the host's unique cycle")]
    CircleMismatch,
    #[error("subdivision count given for non-existent edge ({0}, {1})")]
    NoSuchEdge(Vertex, Vertex),
    #[error("expected {expected} edge counts, got {got}")]
    CountLength { expected: usize, got: usize },
    #[error("cannot parse host description {0:?}")]
    BadDescription(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed host input: {0}")]
    Malformed(String),
}

/// A base host graph with its structural data precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostGraph {
    underlying: SimpleGraph,
    kind: HostKind,
    /// Circle as an ordered node cycle; present iff kind is Unicyclic.
    circle: Option<Vec<Vertex>>,
    branching_nodes: Vec<Vertex>,
    /// ℬ: branching nodes on the circle, in circle order.
    circle_branching: Vec<Vertex>,
    deg_sum_b: usize,
}

impl HostGraph {
    /// Build a host from a bare graph, inferring kind and circle.
    pub fn new(g: SimpleGraph) -> Result<Self, HostError> {
        if g.n() == 0 {
            return Err(HostError::Empty);
        }
        if !g.is_connected() {
            return Err(HostError::Disconnected);
        }
        let n = g.n();
        let m = g.edge_count();
        let (kind, circle) = if m == n - 1 {
            (HostKind::Tree, None)
        } else if m == n {
            (HostKind::Unicyclic, Some(unique_cycle(&g)))
        } else {
            (HostKind::General, None)
        };
        let branching_nodes: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
        let circle_branching: Vec<Vertex> = match &circle {
            Some(c) => c.iter().copied().filter(|&v| g.degree(v) >= 3).collect(),
            None => Vec::new(),
        };
        let deg_sum_b = circle_branching.iter().map(|&b| g.degree(b)).sum();
        Ok(HostGraph { underlying: g, kind, circle, branching_nodes, circle_branching, deg_sum_b })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.underlying
    }

    pub fn kind(&self) -> HostKind {
        self.kind
    }

    pub fn circle(&self) -> Option<&[Vertex]> {
        self.circle.as_deref()
    }

    pub fn branching_nodes(&self) -> &[Vertex] {
        &self.branching_nodes
    }

    /// ℬ: the branching nodes lying on the circle, in circle order.
    pub fn circle_branching(&self) -> &[Vertex] {
        &self.circle_branching
    }

    /// deg(ℬ) = Σ_{b ∈ ℬ} deg(b).
    pub fn deg_sum_b(&self) -> usize {
        self.deg_sum_b
    }

    pub fn n(&self) -> usize {
        self.underlying.n()
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.underlying.edges()
    }

    /// The named catalog: K2 (interval hosts), K3 (circular-arc hosts), and B.
    pub fn standard_hosts() -> Vec<(&'static str, HostGraph)> {
        vec![
            ("K2", Self::from_description("K2").unwrap()),
            ("K3", Self::from_description("K3").unwrap()),
            ("B", Self::from_description("B").unwrap()),
        ]
    }

    /// Concise host descriptions:
    ///
    /// * `K2`, `K3`, `B` — the named hosts;
    /// * `C<k>` — plain cycle;
    /// * `C<k>+pendant(i)` or `C<k>+pendant(i,l)` — cycle with a pendant path
    ///   of `l` edges (default 1) hanging off circle node `i`; repeatable;
    /// * `spider(l1,l2,...)` — tree with legs of the given lengths joined at
    ///   a center node.
    pub fn from_description(desc: &str) -> Result<Self, HostError> {
        let desc = desc.trim();
        let bad = || HostError::BadDescription(desc.to_string());
        match desc {
            "K2" => return Self::new(SimpleGraph::path(2)),
            "K3" => return Self::new(SimpleGraph::cycle(3)),
            "B" => {
                let g = SimpleGraph::from_edges(
                    5,
                    &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)],
                )
                .expect("B edges are valid");
                return Self::new(g);
            }
            _ => {}
        }
        if let Some(rest) = desc.strip_prefix("spider(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let legs: Vec<usize> = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            if legs.iter().any(|&l| l == 0) {
                return Err(bad());
            }
            let total = 1 + legs.iter().sum::<usize>();
            let mut edges = Vec::new();
            let mut next = 1;
            for &l in &legs {
                let mut prev = 0;
                for _ in 0..l {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
            }
            return Self::new(SimpleGraph::from_edges(total, &edges)?);
        }
        let mut parts = desc.split('+');
        let head = parts.next().ok_or_else(bad)?;
        let k: usize = head.strip_prefix('C').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if k < 3 {
            return Err(bad());
        }
        let mut edges: Vec<(Vertex, Vertex)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        let mut next = k;
        for part in parts {
            let inner = part
                .strip_prefix("pendant(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(bad)?;
            let args: Vec<&str> = inner.split(',').map(str::trim).collect();
            let (at, len) = match args.as_slice() {
                [a] => (a.parse::<usize>().map_err(|_| bad())?, 1),
                [a, l] => (
                    a.parse::<usize>().map_err(|_| bad())?,
                    l.parse::<usize>().map_err(|_| bad())?,
                ),
                _ => return Err(bad()),
            };
            if at >= k || len == 0 {
                return Err(bad());
            }
            let mut prev = at;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::new(SimpleGraph::from_edges(next, &edges)?)
    }

    /// Subdivide with per-edge counts parallel to `self.edges()`.
    pub fn subdivide(&self, counts: &[usize]) -> Result<SubdividedHost, HostError> {
        let edges = self.edges();
        if counts.len() != edges.len() {
            return Err(HostError::CountLength { expected: edges.len(), got: counts.len() });
        }
        Ok(SubdividedHost::build(self.clone(), edges, counts.to_vec()))
    }

    /// Subdivide from a (u, v) → count map; counts for absent edges are
    /// rejected, absent entries default to 0.
    pub fn subdivide_map(&self, map: &BTreeMap<(Vertex, Vertex), usize>) -> Result<SubdividedHost, HostError> {
        let edges = self.edges();
        let mut counts = vec![0; edges.len()];
        for (&(u, v), &c) in map {
            let key = (u.min(v), u.max(v));
            match edges.iter().position(|&e| e == key) {
                Some(i) => counts[i] = c,
                None => return Err(HostError::NoSuchEdge(key.0, key.1)),
            }
        }
        Ok(SubdividedHost::build(self.clone(), edges, counts))
    }

    pub fn subdivide_uniform(&self, c: usize) -> SubdividedHost {
        let edges = self.edges();
        let counts = vec![c; edges.len()];
        SubdividedHost::build(self.clone(), edges, counts)
    }

    pub fn to_json(&self) -> String {
        let j = HostJson {
            nodes: self.n(),
            edges: self.edges(),
            kind: self.kind,
            circle: self.circle.clone(),
        };
        serde_json::to_string(&j).expect("host serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, HostError> {
        let j: HostJson =
            serde_json::from_str(s).map_err(|e| HostError::Malformed(e.to_string()))?;
        let g = SimpleGraph::from_edges(j.nodes, &j.edges)?;
        let host = Self::new(g)?;
        if j.kind != host.kind {
            return Err(HostError::KindMismatch { declared: j.kind, actual: host.kind });
        }
        if let Some(declared) = j.circle {
            match &host.circle {
                Some(actual) if same_cycle(&declared, actual) => {}
                _ => return Err(HostError::CircleMismatch),
            }
        }
        Ok(host)
    }
}

#[derive(Serialize, Deserialize)]
struct HostJson {
    nodes: usize,
    edges: Vec<(Vertex, Vertex)>,
    kind: HostKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    circle: Option<Vec<Vertex>>,
}

/// The unique cycle of a connected graph with |E| = |V|, ordered by a walk
/// starting at its smallest node toward its smaller neighbor.
fn unique_cycle(g: &SimpleGraph) -> Vec<Vertex> {
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; g.n()];
    let mut queue: Vec<Vertex> = (0..g.n()).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop() {
        alive[v] = false;
        for u in g.neighbors(v).iter() {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    queue.push(u);
                }
            }
        }
    }
    let start = (0..g.n()).find(|&v| alive[v]).expect("cycle exists");
    let mut cycle = vec![start];
    let first = g
        .neighbors(start)
        .iter()
        .filter(|&u| alive[u])
        .min()
        .expect("cycle node has cycle neighbors");
    let mut prev = start;
    let mut cur = first;
    while cur != start {
        cycle.push(cur);
        let next = g
            .neighbors(cur)
            .iter()
            .find(|&u| alive[u] && u != prev)
            .expect("cycle continues");
        prev = cur;
        cur = next;
    }
    cycle
}

/// Same cyclic sequence up to rotation and reflection.
fn same_cycle(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let k = a.len();
    for rot in 0..k {
        if (0..k).all(|i| a[(rot + i) % k] == b[i]) {
            return true;
        }
        if (0..k).all(|i| a[(rot + k - i) % k] == b[i]) {
            return true;
        }
    }
    false
}

/// Where a node of a subdivided host came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeOrigin {
    Base(Vertex),
    /// `pos` runs 1..=count from the smaller base endpoint of the edge.
    Edge { edge: usize, pos: usize },
}

/// A host with each base edge replaced by a path. Node ids: base nodes keep
/// 0..base_n, then each edge's interior nodes follow in base-edge order,
/// positions numbered from the smaller endpoint.
#[derive(Clone, Debug)]
pub struct SubdividedHost {
    pub base: HostGraph,
    base_edges: Vec<(Vertex, Vertex)>,
    counts: Vec<usize>,
    edge_start: Vec<usize>,
    total: usize,
    adj: Vec<Vec<usize>>,
    origin: Vec<NodeOrigin>,
    /// Nodes on the circle (base circle nodes + interiors of circle edges).
    circle_nodes: Vec<bool>,
}

impl SubdividedHost {
    fn build(base: HostGraph, base_edges: Vec<(Vertex, Vertex)>, counts: Vec<usize>) -> Self {
        let base_n = base.n();
        let mut edge_start = Vec::with_capacity(base_edges.len());
        let mut total = base_n;
        for &c in &counts {
            edge_start.push(total);
            total += c;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        let mut origin: Vec<NodeOrigin> = (0..base_n).map(NodeOrigin::Base).collect();
        for (i, &(u, v)) in base_edges.iter().enumerate() {
            let c = counts[i];
            for p in 1..=c {
                origin.push(NodeOrigin::Edge { edge: i, pos: p });
            }
            let chain: Vec<usize> = std::iter::once(u)
                .chain((0..c).map(|p| edge_start[i] + p))
                .chain(std::iter::once(v))
                .collect();
            for w in chain.windows(2) {
                adj[w[0]].push(w[1]);
                adj[w[1]].push(w[0]);
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        let mut circle_nodes = vec![false; total];
        if let Some(circle) = base.circle() {
            for &v in circle {
                circle_nodes[v] = true;
            }
            let k = circle.len();
            for i in 0..k {
                let (a, b) = (circle[i], circle[(i + 1) % k]);
                let key = (a.min(b), a.max(b));
                let e = base_edges.iter().position(|&x| x == key).expect("circle edge exists");
                for p in 0..counts[e] {
                    circle_nodes[edge_start[e] + p] = true;
                }
            }
        }
        SubdividedHost { base, base_edges, counts, edge_start, total, adj, origin, circle_nodes }
    }

    pub fn total_nodes(&self) -> usize {
        self.total
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn base_edges(&self) -> &[(Vertex, Vertex)] {
        &self.base_edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn origin(&self, node: usize) -> NodeOrigin {
        self.origin[node]
    }

    pub fn on_circle(&self, node: usize) -> bool {
        self.circle_nodes[node]
    }

    /// Interior nodes of base edge `e` in position order (from the smaller
    /// endpoint toward the larger).
    pub fn edge_interior(&self, e: usize) -> Vec<usize> {
        (0..self.counts[e]).map(|p| self.edge_start[e] + p).collect()
    }

    /// Whether a node set induces a connected subgraph.
    pub fn is_connected_set(&self, nodes: &[usize]) -> bool {
        if nodes.is_empty() {
            return false;
        }
        let mut member = vec![false; self.total];
        for &v in nodes {
            member[v] = true;
        }
        let mut seen = vec![false; self.total];
        let mut stack = vec![nodes[0]];
        seen[nodes[0]] = true;
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            reached += 1;
            for &u in &self.adj[v] {
                if member[u] && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        reached == nodes.len()
    }

    /// View as a plain graph when small enough (tests, tree recognizers).
    pub fn as_simple_graph(&self) -> Option<SimpleGraph> {
        if self.total > crate::graph::MAX_VERTICES {
            return None;
        }
        let mut g = SimpleGraph::empty(self.total).ok()?;
        for v in 0..self.total {
            for &u in &self.adj[v] {
                if u > v {
                    g.add_edge(v, u);
                }
            }
        }
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_hosts() {
        let k2 = HostGraph::from_description("K2").unwrap();
        assert_eq!(k2.kind(), HostKind::Tree);
        assert_eq!(k2.n(), 2);

        let b = HostGraph::from_description("B").unwrap();
        assert_eq!(b.kind(), HostKind::General);
        assert_eq!(b.n(), 5);
        assert_eq!(b.graph().edge_count(), 6);
        assert!(b.circle().is_none());

        let k3 = HostGraph::from_description("K3").unwrap();
        assert_eq!(k3.kind(), HostKind::Unicyclic);
        assert_eq!(k3.circle_branching(), &[] as &[usize]);
    }

    #[test]
    fn cycle_with_pendant() {
        let h = HostGraph::from_description("C4+pendant(0)").unwrap();
        assert_eq!(h.kind(), HostKind::Unicyclic);
        assert_eq!(h.circle().unwrap(), &[0, 1, 2, 3]);
        assert_eq!(h.circle_branching(), &[0]);
        assert_eq!(h.deg_sum_b(), 3);

        let h = HostGraph::from_description("C5+pendant(0,2)").unwrap();
        assert_eq!(h.n(), 7);
        assert_eq!(h.circle_branching(), &[0]);

        let h = HostGraph::from_description("C4+pendant(0)+pendant(2)").unwrap();
        assert_eq!(h.circle_branching(), &[0, 2]);
        assert_eq!(h.deg_sum_b(), 6);

        assert!(HostGraph::from_description("C2").is_err());
        assert!(HostGraph::from_description("C4+pendant(7)").is_err());
        assert!(HostGraph::from_description("what").is_err());
    }

    #[test]
    fn spider_description() {
        let h = HostGraph::from_description("spider(1,1,1)").unwrap();
        assert_eq!(h.kind(), HostKind::Tree);
        assert_eq!(h.n(), 4);
        assert_eq!(h.branching_nodes(), &[0]);
    }

    #[test]
    fn subdivision_shapes() {
        // K3 with every edge subdivided once is C6.
        let k3 = HostGraph::from_description("K3").unwrap();
        let s = k3.subdivide(&[1, 1, 1]).unwrap();
        assert_eq!(s.total_nodes(), 6);
        let g = s.as_simple_graph().unwrap();
        assert_eq!(g.degree_sequence(), vec![2; 6]);
        assert!(g.is_connected());

        // K2 with 3 interior nodes is P5.
        let k2 = HostGraph::from_description("K2").unwrap();
        let s = k2.subdivide(&[3]).unwrap();
        let g = s.as_simple_graph().unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.degree_sequence(), vec![1, 1, 2, 2, 2]);

        // B with all counts 0 is B itself.
        let b = HostGraph::from_description("B").unwrap();
        let s = b.subdivide(&[0; 6]).unwrap();
        assert_eq!(s.total_nodes(), 5);

        // Count vector length must match.
        assert!(b.subdivide(&[0; 5]).is_err());
        // Counts for non-edges are rejected.
        let mut map = BTreeMap::new();
        map.insert((1, 3), 2);
        assert!(matches!(b.subdivide_map(&map), Err(HostError::NoSuchEdge(1, 3))));
    }

    #[test]
    fn circle_nodes_marked() {
        let h = HostGraph::from_description("C3+pendant(0)").unwrap();
        let s = h.subdivide(&[2, 0, 0, 1]).unwrap();
        // Base edges of C3+pendant(0): (0,1),(0,2),(0,3),(1,2) — lex order.
        assert_eq!(s.base_edges(), &[(0, 1), (0, 2), (0, 3), (1, 2)]);
        assert!(s.on_circle(0) && s.on_circle(1) && s.on_circle(2));
        assert!(!s.on_circle(3));
        // Interiors of (0,1) are on the circle; interior of (0,3) is not.
        for v in s.edge_interior(0) {
            assert!(s.on_circle(v));
        }
        for v in s.edge_interior(2) {
            assert!(!s.on_circle(v));
        }
    }

    #[test]
    fn host_json_round_trip() {
        let h = HostGraph::from_description("C4+pendant(1)").unwrap();
        let s = h.to_json();
        let h2 = HostGraph::from_json(&s).unwrap();
        assert_eq!(h, h2);
        // Kind mismatch is rejected.
        let bad = s.replace("unicyclic", "tree");
        assert!(HostGraph::from_json(&bad).is_err());
    }
}
