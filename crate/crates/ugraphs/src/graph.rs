//! Simple undirected graphs on at most 128 vertices, stored as one adjacency
//! bit row per vertex. Everything downstream (clique search, recognizers,
//! the oracle) leans on cheap mask algebra; the cap is sized for the largest
//! synthetic graphs the reductions produce. Subdivided hosts, which can grow
//! past the cap, are handled by a separate structure.

use serde::{Deserialize, Serialize};
use std::fmt;

pub type Vertex = usize;

pub const MAX_VERTICES: usize = 128;

/// Set of vertices as a bitmask. Only meaningful together with a graph of
/// at most 128 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 128 {
            VertexSet(!0)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1u128 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = 0u128;
        for v in iter {
            debug_assert!(v < MAX_VERTICES);
            s |= 1u128 << v;
        }
        VertexSet(s)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1u128 << v);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(&self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(&self, other: VertexSet) -> bool {
        self.is_subset(other) && self.0 != other.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Members in ascending order.
    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    /// Smallest member.
    pub fn first(self) -> Option<Vertex> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices, maximum supported is 128")]
    TooLarge(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge endpoint {0} out of range for {1} vertices")]
    OutOfRange(Vertex, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("label count {0} does not match vertex count {1}")]
    LabelMismatch(usize, usize),
    #[error("malformed graph input: {0}")]
    Malformed(String),
}

/// Undirected simple graph; vertices are `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    rows: Vec<u128>,
    labels: Option<Vec<String>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        Ok(SimpleGraph { n, rows: vec![0; n], labels: None })
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n {
                return Err(GraphError::OutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::OutOfRange(v, n));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.rows[u] |= 1 << v;
            g.rows[v] |= 1 << u;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n).expect("complete graph within size cap");
        let full = VertexSet::full(n).0;
        for v in 0..n {
            g.rows[v] = full & !(1 << v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<(), GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelMismatch(labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    /// Open neighborhood as a set.
    pub fn neighbors(&self, v: Vertex) -> VertexSet {
        VertexSet(self.rows[v])
    }

    /// Closed neighborhood N[v].
    pub fn closed_neighbors(&self, v: Vertex) -> VertexSet {
        VertexSet(self.rows[v] | 1 << v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut bits = if u + 1 == MAX_VERTICES {
                0
            } else {
                self.rows[u] >> (u + 1) << (u + 1)
            };
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn complement(&self) -> SimpleGraph {
        let full = VertexSet::full(self.n).0;
        let rows = (0..self.n).map(|v| full & !self.rows[v] & !(1 << v)).collect();
        SimpleGraph { n: self.n, rows, labels: self.labels.clone() }
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for v in 0..self.n {
            if seen.contains(v) {
                continue;
            }
            let comp = self.component_of(v, VertexSet::full(self.n));
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    /// Connected component of `v` inside the induced subgraph on `within`.
    pub fn component_of(&self, v: Vertex, within: VertexSet) -> VertexSet {
        debug_assert!(within.contains(v));
        let mut comp = VertexSet::singleton(v);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for u in frontier.iter() {
                next = next.union(VertexSet(self.rows[u]).intersect(within).minus(comp));
            }
            comp = comp.union(next);
            frontier = next;
        }
        comp
    }

    /// Components of the subgraph induced on `within`, smallest member first.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for v in within.iter() {
            if seen.contains(v) {
                continue;
            }
            let comp = self.component_of(v, within);
            seen = seen.union(comp);
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_of(0, self.vertex_set()).len() == self.n
    }

    /// Induced subgraph on the given set; vertices are relabeled 0..k-1 in
    /// ascending order of their old ids. Returns the graph together with the
    /// map from new ids back to old ones.
    pub fn induced_subgraph(&self, set: VertexSet) -> (SimpleGraph, Vec<Vertex>) {
        let old: Vec<Vertex> = set.to_vec();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in old.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = SimpleGraph::empty(old.len()).expect("induced subgraph within cap");
        for (i, &v) in old.iter().enumerate() {
            for u in VertexSet(self.rows[v]).intersect(set).iter() {
                if pos[u] > i {
                    g.add_edge(i, pos[u]);
                }
            }
        }
        if let Some(labels) = &self.labels {
            g.labels = Some(old.iter().map(|&v| labels[v].clone()).collect());
        }
        (g, old)
    }

    /// Subdivide every edge once. Edge (u, v) with u < v, taken in
    /// lexicographic order, gets a fresh vertex `n + i` adjacent to u and v.
    /// Returns the new graph and the edge list in that order.
    pub fn subdivide_all_edges(&self) -> Result<(SimpleGraph, Vec<(Vertex, Vertex)>), GraphError> {
        let edges = self.edges();
        let m = edges.len();
        let mut g = SimpleGraph::empty(self.n + m)?;
        for (i, &(u, v)) in edges.iter().enumerate() {
            let mid = self.n + i;
            g.add_edge(u, mid);
            g.add_edge(mid, v);
        }
        Ok((g, edges))
    }

    /// Quotient by true-twin classes (equal closed neighborhoods). Classes are
    /// reported with members ascending, ordered by smallest member; class i of
    /// the quotient corresponds to `classes[i]`.
    pub fn true_twin_quotient(&self) -> (SimpleGraph, Vec<VertexSet>) {
        let mut classes: Vec<VertexSet> = Vec::new();
        let mut class_of = [usize::MAX; MAX_VERTICES];
        for v in 0..self.n {
            let nv = self.rows[v] | 1 << v;
            let mut found = None;
            for (i, c) in classes.iter().enumerate() {
                let rep = c.first().expect("class nonempty");
                if self.rows[rep] | 1 << rep == nv {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => {
                    let mut c = classes[i];
                    c.insert(v);
                    classes[i] = c;
                    class_of[v] = i;
                }
                None => {
                    class_of[v] = classes.len();
                    classes.push(VertexSet::singleton(v));
                }
            }
        }
        let k = classes.len();
        let mut q = SimpleGraph::empty(k).expect("quotient within cap");
        for (u, v) in self.edges() {
            let (cu, cv) = (class_of[u], class_of[v]);
            if cu != cv {
                q.add_edge(cu, cv);
            }
        }
        (q, classes)
    }

    /// True iff `set` induces a clique.
    pub fn is_clique(&self, set: VertexSet) -> bool {
        for v in set.iter() {
            if !set.minus(VertexSet::singleton(v)).is_subset(VertexSet(self.rows[v])) {
                return false;
            }
        }
        true
    }

    /// Maximal cliques via pivoted Bron–Kerbosch, stopping once `cap` cliques
    /// have been listed. Returns the cliques in canonical order
    /// (lexicographic on sorted member lists) and whether the cap was hit.
    /// With the cap hit, exactly `cap` cliques are returned but the canonical
    /// order is only within the returned prefix of the enumeration.
    pub fn maximal_cliques_capped(&self, cap: usize) -> (Vec<VertexSet>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        if self.n == 0 {
            return (out, false);
        }
        self.bron_kerbosch(
            VertexSet::EMPTY,
            self.vertex_set(),
            VertexSet::EMPTY,
            cap,
            &mut out,
            &mut truncated,
        );
        out.sort_by_key(|c| c.to_vec());
        (out, truncated)
    }

    pub fn maximal_cliques(&self) -> Vec<VertexSet> {
        self.maximal_cliques_capped(usize::MAX).0
    }

    fn bron_kerbosch(
        &self,
        r: VertexSet,
        mut p: VertexSet,
        mut x: VertexSet,
        cap: usize,
        out: &mut Vec<VertexSet>,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if p.is_empty() && x.is_empty() {
            if out.len() == cap {
                *truncated = true;
            } else {
                out.push(r);
            }
            return;
        }
        // Pivot: vertex of P ∪ X with most neighbors in P.
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&v| self.neighbors(v).intersect(p).len())
            .expect("P ∪ X nonempty");
        for v in p.minus(self.neighbors(pivot)).iter() {
            let nv = self.neighbors(v);
            self.bron_kerbosch(
                r.union(VertexSet::singleton(v)),
                p.intersect(nv),
                x.intersect(nv),
                cap,
                out,
                truncated,
            );
            if *truncated {
                return;
            }
            p.remove(v);
            x.insert(v);
        }
    }

    /// Relabel vertices: `perm[old] = new`. Labels follow their vertices.
    pub fn relabel(&self, perm: &[Vertex]) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n).expect("same size");
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        if let Some(labels) = &self.labels {
            let mut new_labels = vec![String::new(); self.n];
            for v in 0..self.n {
                new_labels[perm[v]] = labels[v].clone();
            }
            g.labels = Some(new_labels);
        }
        g
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl SimpleGraph {
    pub fn to_json(&self) -> String {
        let j = GraphJson { n: self.n, edges: self.edges(), labels: self.labels.clone() };
        serde_json::to_string(&j).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let j: GraphJson =
            serde_json::from_str(s).map_err(|e| GraphError::Malformed(e.to_string()))?;
        let mut g = Self::from_edges(j.n, &j.edges)?;
        if let Some(labels) = j.labels {
            g.set_labels(labels)?;
        }
        Ok(g)
    }

    /// Plain text form: header line `n m`, then one `u v` pair per line.
    pub fn to_edge_list_text(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    pub fn from_edge_list_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| GraphError::Malformed("empty edge list".into()))?;
        let mut head_it = header.split_whitespace();
        let n: usize = head_it
            .next()
            .ok_or_else(|| GraphError::Malformed("missing header".into()))?
            .parse()
            .map_err(|_| GraphError::Malformed("header must be `n m`".into()))?;
        let m: Option<usize> = match head_it.next() {
            Some(tok) => Some(
                tok.parse()
                    .map_err(|_| GraphError::Malformed("header must be `n m`".into()))?,
            ),
            None => None,
        };
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let u: Vertex = it
                .next()
                .ok_or_else(|| GraphError::Malformed(format!("bad edge line: {line:?}")))?
                .parse()
                .map_err(|_| GraphError::Malformed(format!("bad edge line: {line:?}")))?;
            let v: Vertex = it
                .next()
                .ok_or_else(|| GraphError::Malformed(format!("bad edge line: {line:?}")))?
                .parse()
                .map_err(|_| GraphError::Malformed(format!("bad edge line: {line:?}")))?;
            if it.next().is_some() {
                return Err(GraphError::Malformed(format!("bad edge line: {line:?}")));
            }
            edges.push((u, v));
        }
        if let Some(m) = m {
            if m != edges.len() {
                return Err(GraphError::Malformed(format!(
                    "header declares {} edges, found {}",
                    m,
                    edges.len()
                )));
            }
        }
        Self::from_edges(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(SimpleGraph::from_edges(3, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(SimpleGraph::from_edges(3, &[(0, 3)]), Err(GraphError::OutOfRange(3, 3)));
        assert_eq!(
            SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(SimpleGraph::empty(129).is_err());
    }

    #[test]
    fn complement_of_c5_is_c5() {
        // Self-complementary: C5.
        let g = SimpleGraph::cycle(5);
        let c = g.complement();
        assert_eq!(c.edge_count(), 5);
        assert_eq!(c.degree_sequence(), vec![2, 2, 2, 2, 2]);
        assert!(c.is_connected());
        // Complement twice is the identity.
        assert_eq!(c.complement(), g);
    }

    #[test]
    fn components_canonical_order() {
        // Two components: {0,2} path-ish and {1,3,4}.
        let g = SimpleGraph::from_edges(5, &[(0, 2), (1, 3), (3, 4)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].to_vec(), vec![0, 2]);
        assert_eq!(comps[1].to_vec(), vec![1, 3, 4]);
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = SimpleGraph::cycle(5);
        let (h, map) = g.induced_subgraph(VertexSet::from_iter([1, 2, 4]));
        assert_eq!(map, vec![1, 2, 4]);
        assert!(h.has_edge(0, 1)); // 1-2 survives
        assert!(!h.has_edge(0, 2)); // 1-4 not an edge
        assert!(h.has_edge(1, 1) == false);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn subdivision_of_k4() {
        let g = SimpleGraph::complete(4);
        let (s, edges) = g.subdivide_all_edges().unwrap();
        assert_eq!(edges.len(), 6);
        assert_eq!(s.n(), 10);
        assert_eq!(s.edge_count(), 12);
        for i in 0..6 {
            assert_eq!(s.degree(4 + i), 2);
        }
        for v in 0..4 {
            assert_eq!(s.degree(v), 3);
        }
        // Subdivision of a graph with an edge is triangle-free.
        for u in 0..10 {
            for v in (u + 1)..10 {
                if s.has_edge(u, v) {
                    assert!(s.neighbors(u).intersect(s.neighbors(v)).is_empty());
                }
            }
        }
    }

    #[test]
    fn twin_quotient_collapses_matching_complement() {
        // Complement of 3K2 on 6 vertices has no true twins (each vertex's
        // closed neighborhood misses exactly its partner).
        let mut g = SimpleGraph::complete(6);
        for i in 0..3 {
            g.remove_edge(2 * i, 2 * i + 1);
        }
        let (q, classes) = g.true_twin_quotient();
        assert_eq!(q.n(), 6);
        assert_eq!(classes.len(), 6);

        // A star's complement: leaves become one class.
        let star = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let comp = star.complement(); // triangle on {1,2,3} plus isolated 0
        let (q, classes) = comp.true_twin_quotient();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].to_vec(), vec![0]);
        assert_eq!(classes[1].to_vec(), vec![1, 2, 3]);
        assert_eq!(q.edge_count(), 0);
    }

    #[test]
    fn json_round_trip() {
        let mut g = SimpleGraph::cycle(4);
        g.set_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()]).unwrap();
        let s = g.to_json();
        let h = SimpleGraph::from_json(&s).unwrap();
        assert_eq!(g, h);
        assert!(SimpleGraph::from_json("{\"n\": 2").is_err());
    }

    #[test]
    fn edge_list_text_round_trip() {
        let g = SimpleGraph::cycle(4);
        let t = g.to_edge_list_text();
        assert_eq!(SimpleGraph::from_edge_list_text(&t).unwrap(), g);
    }
}
