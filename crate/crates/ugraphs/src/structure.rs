//! Structural probes behind the recognition pipelines: bounded clique
//! listing, chordality with witnesses, hole vertices and the vertices they
//! reveal, non-Helly triangles, dominating edges, and circular orderings of
//! clique catalogs.

use crate::graph::{SimpleGraph, Vertex, VertexSet};
use std::collections::{BTreeSet, VecDeque};

/// Maximal cliques, possibly cut off at a listing threshold.
#[derive(Debug, Clone)]
pub struct CliqueCatalog {
    pub cliques: Vec<VertexSet>,
    /// Listing stopped at the threshold. The catalog then holds exactly
    /// `threshold` cliques and says nothing about how many more exist.
    pub truncated: bool,
}

/// Everything the circle forces: the vertices on holes (`hole_vertices`),
/// the vertices revealed by their adjacency to holes (`revealed_vertices`),
/// and — filled in by callers that run the clique analyses — the vertices of
/// always-non-Helly cliques and dominating edges (`nonhelly_vertices`).
#[derive(Debug, Clone)]
pub struct HoleReport {
    pub hole_vertices: VertexSet,
    pub revealed_vertices: VertexSet,
    pub nonhelly_vertices: VertexSet,
    /// One witness cycle per successful apex search, deduplicated up to
    /// rotation and reversal. Each is an induced cycle of length ≥ 4.
    pub sample_holes: Vec<Vec<Vertex>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("input graph must be connected")]
    Disconnected,
    #[error("the hole-vertex scope is empty")]
    EmptyScope,
    #[error("clique catalog is truncated; the ordering needs the full family")]
    TruncatedCatalog,
}

/// List maximal cliques, stopping as soon as `threshold` of them have been
/// produced. A count below the threshold is exhaustive; hitting it flags the
/// catalog as truncated, which downstream recognition treats as "too many".
pub fn maximal_cliques(g: &SimpleGraph, threshold: usize) -> CliqueCatalog {
    assert!(threshold >= 1, "threshold must be positive");
    let (cliques, overflow) = g.maximal_cliques_capped(threshold);
    let truncated = overflow || cliques.len() >= threshold;
    CliqueCatalog { cliques, truncated }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// Every vertex's neighbors later in the order form a clique.
    Chordal { elimination: Vec<Vertex> },
    /// An induced cycle of length at least 4, listed in cyclic order.
    Hole { cycle: Vec<Vertex> },
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal { .. })
    }

    pub fn hole(&self) -> Option<&[Vertex]> {
        match self {
            Chordality::Hole { cycle } => Some(cycle),
            _ => None,
        }
    }
}

/// Chordality via maximum-cardinality search: the reverse visit order is a
/// perfect elimination order exactly for chordal graphs. A violation means
/// some hole exists, and we dig out a concrete one as the witness.
pub fn is_chordal(g: &SimpleGraph) -> Chordality {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .unwrap();
        seen[v] = true;
        visit.push(v);
        for u in g.neighbors(v).iter() {
            if !seen[u] {
                weight[u] += 1;
            }
        }
    }
    let elimination: Vec<Vertex> = visit.into_iter().rev().collect();
    let mut pos = vec![0usize; n];
    for (i, &v) in elimination.iter().enumerate() {
        pos[v] = i;
    }
    for &v in &elimination {
        let later: Vec<Vertex> = g.neighbors(v).iter().filter(|&u| pos[u] > pos[v]).collect();
        if let Some(&u) = later.iter().min_by_key(|&&u| pos[u]) {
            if later.iter().any(|&w| w != u && !g.has_edge(u, w)) {
                let cycle = first_hole(g).expect("elimination failure implies a hole");
                return Chordality::Hole { cycle };
            }
        }
    }
    Chordality::Chordal { elimination }
}

/// Shortest path from `v` to `w` avoiding the closed neighborhood of `u`
/// except for the endpoints themselves. Ties break toward the smallest
/// predecessor, so the path (and everything built from it) is stable.
fn path_avoiding(g: &SimpleGraph, u: Vertex, v: Vertex, w: Vertex) -> Option<Vec<Vertex>> {
    let mut blocked = g.closed_neighbors(u);
    blocked.remove(v);
    blocked.remove(w);
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x).iter() {
            if !blocked.contains(y) && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    if dist[w] == usize::MAX {
        return None;
    }
    let mut path = vec![w];
    let mut cur = w;
    while cur != v {
        let d = dist[cur];
        cur = g
            .neighbors(cur)
            .iter()
            .find(|&y| !blocked.contains(y) && dist[y] == d - 1)
            .unwrap();
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    let k = c.len();
    let mi = (0..k).min_by_key(|&i| c[i]).unwrap();
    let fwd: Vec<Vertex> = (0..k).map(|i| c[(mi + i) % k]).collect();
    let bwd: Vec<Vertex> = (0..k).map(|i| c[(mi + k - i) % k]).collect();
    fwd.min(bwd)
}

/// The apex scan: for every vertex `u` and nonadjacent pair `v, w` of its
/// neighbors, a shortest v–w path dodging the rest of N[u] closes into an
/// induced cycle through `u`. The union of everything found is exactly the
/// set of vertices lying on holes.
fn scan_holes(g: &SimpleGraph) -> (VertexSet, Vec<Vec<Vertex>>) {
    let mut l = VertexSet::EMPTY;
    let mut holes = BTreeSet::new();
    for u in 0..g.n() {
        let nb = g.neighbors(u).to_vec();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let (v, w) = (nb[i], nb[j]);
                if g.has_edge(v, w) {
                    continue;
                }
                if let Some(p) = path_avoiding(g, u, v, w) {
                    l.insert(u);
                    for &x in &p {
                        l.insert(x);
                    }
                    let mut cyc = Vec::with_capacity(p.len() + 1);
                    cyc.push(u);
                    cyc.extend_from_slice(&p);
                    holes.insert(canonical_cycle(&cyc));
                }
            }
        }
    }
    (l, holes.into_iter().collect())
}

fn first_hole(g: &SimpleGraph) -> Option<Vec<Vertex>> {
    for u in 0..g.n() {
        let nb = g.neighbors(u).to_vec();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let (v, w) = (nb[i], nb[j]);
                if g.has_edge(v, w) {
                    continue;
                }
                if let Some(p) = path_avoiding(g, u, v, w) {
                    let mut cyc = Vec::with_capacity(p.len() + 1);
                    cyc.push(u);
                    cyc.extend_from_slice(&p);
                    return Some(cyc);
                }
            }
        }
    }
    None
}

/// Hole vertices and revealed vertices of a connected graph. On chordal
/// input both sets come back empty — an empty `hole_vertices` is itself the
/// signal that there was no hole to find. `nonhelly_vertices` is always left
/// empty here; see [`nonhelly_clique_vertices`] and [`dominating_edges`].
pub fn hole_vertices(g: &SimpleGraph) -> Result<HoleReport, StructureError> {
    if g.n() > 0 && !g.is_connected() {
        return Err(StructureError::Disconnected);
    }
    let (l, sample_holes) = scan_holes(g);
    let mut r = VertexSet::EMPTY;
    for u in 0..g.n() {
        if l.contains(u) {
            continue;
        }
        // Revealed: at least three neighbors on holes forming an induced
        // two-edge path. Among three vertices, exactly two edges always
        // make a path, so counting suffices.
        let cand = g.neighbors(u).intersect(l).to_vec();
        let revealed = triples(cand.len()).any(|(i, j, k)| {
            let edges = g.has_edge(cand[i], cand[j]) as u8
                + g.has_edge(cand[i], cand[k]) as u8
                + g.has_edge(cand[j], cand[k]) as u8;
            edges == 2
        });
        if revealed {
            r.insert(u);
        }
    }
    Ok(HoleReport {
        hole_vertices: l,
        revealed_vertices: r,
        nonhelly_vertices: VertexSet::EMPTY,
        sample_holes,
    })
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k)))
    })
}

fn comparable(x: VertexSet, y: VertexSet) -> bool {
    x.is_subset(y) || y.is_subset(x)
}

/// Vertices of triangles that can never be represented as Helly cliques,
/// judged by their adjacencies into the scope `lr` (hole plus revealed
/// vertices). A triangle qualifies when the closed neighborhoods of its
/// members restricted to `lr` are nonempty, jointly exhaust `lr`, and are
/// pairwise incomparable by inclusion — the combinatorial shadow of three
/// arcs covering the whole circle with no common point.
pub fn nonhelly_clique_vertices(
    g: &SimpleGraph,
    lr: VertexSet,
) -> Result<VertexSet, StructureError> {
    if lr.is_empty() {
        return Err(StructureError::EmptyScope);
    }
    let n = g.n();
    let mut out = VertexSet::EMPTY;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if !g.has_edge(a, c) || !g.has_edge(b, c) {
                    continue;
                }
                let na = g.closed_neighbors(a).intersect(lr);
                let nb = g.closed_neighbors(b).intersect(lr);
                let nc = g.closed_neighbors(c).intersect(lr);
                if na.is_empty() || nb.is_empty() || nc.is_empty() {
                    continue;
                }
                if na.union(nb).union(nc) != lr {
                    continue;
                }
                if comparable(na, nb) || comparable(na, nc) || comparable(nb, nc) {
                    continue;
                }
                out.insert(a);
                out.insert(b);
                out.insert(c);
            }
        }
    }
    Ok(out)
}

/// Edges whose two endpoints could jointly cover the whole circle: their
/// neighborhoods must cover the scope `lr`, and in at least one witness hole
/// the two ends must see incomparable slices of it. An endpoint that alone
/// dominates everything fails the incomparability test, which is fine — its
/// partner then lies on a hole and is already caught by the scope.
pub fn dominating_edges(
    g: &SimpleGraph,
    lr: VertexSet,
) -> Result<Vec<(Vertex, Vertex)>, StructureError> {
    if lr.is_empty() {
        return Err(StructureError::EmptyScope);
    }
    let (_, holes) = scan_holes(g);
    let hole_sets: Vec<VertexSet> = holes
        .iter()
        .map(|h| VertexSet::from_iter(h.iter().copied()))
        .collect();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if !lr.is_subset(g.neighbors(u).union(g.neighbors(v))) {
            continue;
        }
        let witnessed = hole_sets.iter().any(|&hs| {
            !comparable(g.neighbors(u).intersect(hs), g.neighbors(v).intersect(hs))
        });
        if witnessed {
            out.push((u, v));
        }
    }
    Ok(out)
}

/// Arrange the catalog's cliques around a circle so that the cliques
/// containing any one vertex sit consecutively (cyclically). Returns the
/// order as clique indices by position, or `None` when no arrangement
/// exists. Needs the full family, hence the truncation error.
pub fn circular_ones_order(
    catalog: &CliqueCatalog,
    g: &SimpleGraph,
) -> Result<Option<Vec<usize>>, StructureError> {
    if catalog.truncated {
        return Err(StructureError::TruncatedCatalog);
    }
    let k = catalog.cliques.len();
    if k <= 3 {
        // Any subset of at most three circle positions is an arc.
        return Ok(Some((0..k).collect()));
    }
    assert!(k <= 64, "catalog too large for the ordering search");
    // One constraint per vertex: the cliques containing it. Sets that hit
    // at most one clique or miss at most one are arcs in every arrangement.
    let mut constraints: Vec<u64> = Vec::new();
    for v in 0..g.n() {
        let mut m = 0u64;
        for (i, c) in catalog.cliques.iter().enumerate() {
            if c.contains(v) {
                m |= 1 << i;
            }
        }
        let s = m.count_ones() as usize;
        if s >= 2 && s <= k - 2 {
            constraints.push(m);
        }
    }
    constraints.sort_unstable();
    constraints.dedup();

    // Backtracking over positions with clique 0 pinned to position 0 (a
    // rotation is free). After p placements the filled positions form an
    // arc, so each constraint's hits must be mendable into one circular
    // run: a single stretch still open at an end, or two stretches hugging
    // both ends that all future positions will have to join up.
    let mut slot = vec![usize::MAX; k];
    slot[0] = 0;
    fn viable(constraints: &[u64], occupied: &[u64], p: usize, k: usize) -> bool {
        for (ci, &m) in constraints.iter().enumerate() {
            let bits = occupied[ci];
            if bits == 0 {
                continue;
            }
            let rem = (m.count_ones() - bits.count_ones()) as usize;
            let touches0 = bits & 1 == 1;
            let touches_end = bits >> (p - 1) & 1 == 1;
            // A run starts wherever a set bit follows a clear one.
            match (bits & !(bits << 1)).count_ones() {
                1 => {
                    // Boxed in on both sides with members still to place.
                    if !touches0 && !touches_end && rem > 0 {
                        return false;
                    }
                }
                2 => {
                    // Two stretches can only become one arc by wrapping:
                    // they must hug both ends and claim every remaining
                    // position.
                    if !(touches0 && touches_end && rem == k - p) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
    fn dfs(
        catalog_len: usize,
        constraints: &[u64],
        slot: &mut Vec<usize>,
        occupied: &mut Vec<u64>,
        used: u64,
        p: usize,
    ) -> bool {
        if p == catalog_len {
            return true;
        }
        for c in 0..catalog_len {
            if used >> c & 1 == 1 {
                continue;
            }
            slot[p] = c;
            for (ci, &m) in constraints.iter().enumerate() {
                if m >> c & 1 == 1 {
                    occupied[ci] |= 1 << p;
                }
            }
            if viable(constraints, occupied, p + 1, catalog_len)
                && dfs(catalog_len, constraints, slot, occupied, used | 1 << c, p + 1)
            {
                return true;
            }
            for (ci, &m) in constraints.iter().enumerate() {
                if m >> c & 1 == 1 {
                    occupied[ci] &= !(1 << p);
                }
            }
            slot[p] = usize::MAX;
        }
        false
    }
    let mut occupied: Vec<u64> = constraints.iter().map(|&m| m & 1).collect();
    if !viable(&constraints, &occupied, 1, k) {
        return Ok(None);
    }
    if dfs(k, &constraints, &mut slot, &mut occupied, 1, 1) {
        Ok(Some(slot))
    } else {
        Ok(None)
    }
}

/// Inclusion-maximal sets among the neighborhoods of the component's
/// vertices restricted to the anchor.
pub fn upper_attachments(
    g: &SimpleGraph,
    component: VertexSet,
    anchor: VertexSet,
) -> Vec<VertexSet> {
    assert!(
        component.intersect(anchor).is_empty(),
        "component and anchor must be disjoint"
    );
    let mut sets: Vec<VertexSet> = Vec::new();
    for v in component.iter() {
        let a = g.neighbors(v).intersect(anchor);
        if !a.is_empty() {
            sets.push(a);
        }
    }
    sets.sort_unstable();
    sets.dedup();
    sets.iter()
        .copied()
        .filter(|s| !sets.iter().any(|t| s.is_proper_subset(*t)))
        .collect()
}
