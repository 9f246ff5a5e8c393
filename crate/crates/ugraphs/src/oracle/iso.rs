//! Backtracking graph isomorphism, used as the reference the structured
//! isomorphism test is compared against, and to spot-check the
//! isomorphism-hardness reduction. Colour refinement keeps the branching
//! honest on the dense complement graphs that reduction produces.

use crate::graph::SimpleGraph;

/// An isomorphism `g → h` as a vertex map, or `None` if there is none.
/// Plain backtracking over a stable-colouring partition; fine for the sizes
/// the test suite throws at it (tens of vertices), hopeless beyond that.
pub fn brute_isomorphism(g: &SimpleGraph, h: &SimpleGraph) -> Option<Vec<usize>> {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return None;
    }
    let cg = refine(g);
    let ch = refine(h);
    // The colour partitions must agree as multisets, and we only ever map
    // within a colour class.
    {
        let mut a = cg.clone();
        let mut b = ch.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
    }

    // Most-constrained first: rarest colour class, then high degree.
    let mut order: Vec<usize> = (0..n).collect();
    let class_size = |c: u64, colors: &[u64]| colors.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (class_size(cg[v], &cg), usize::MAX - g.degree(v), v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        g: &SimpleGraph,
        h: &SimpleGraph,
        cg: &[u64],
        ch: &[u64],
        order: &[usize],
        pos: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        'cand: for w in 0..h.n() {
            if used[w] || cg[v] != ch[w] {
                continue;
            }
            for &u in &order[..pos] {
                if g.has_edge(u, v) != h.has_edge(map[u], w) {
                    continue 'cand;
                }
            }
            map[v] = w;
            used[w] = true;
            if rec(g, h, cg, ch, order, pos + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    if rec(g, h, &cg, &ch, &order, 0, &mut map, &mut used) {
        debug_assert!(is_isomorphism(g, h, &map));
        Some(map)
    } else {
        None
    }
}

/// One-dimensional colour refinement to a fixed point. Colours are hashes of
/// (own colour, sorted neighbour colours); both graphs are refined by the
/// same function, so equal structures get equal colours.
fn refine(g: &SimpleGraph) -> Vec<u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let n = g.n();
    let mut colors: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u64> = g.neighbors(v).iter().map(|u| colors[u]).collect();
            nb.sort_unstable();
            let mut hasher = DefaultHasher::new();
            colors[v].hash(&mut hasher);
            nb.hash(&mut hasher);
            next.push(hasher.finish());
        }
        if classes(&next) == classes(&colors) {
            colors = next;
            break;
        }
        colors = next;
    }
    colors
}

fn classes(colors: &[u64]) -> usize {
    let mut c: Vec<u64> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Check a claimed bijection edge by edge.
pub(crate) fn is_isomorphism(g: &SimpleGraph, h: &SimpleGraph, map: &[usize]) -> bool {
    if map.len() != g.n() || g.n() != h.n() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &w in map {
        if w >= h.n() || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if g.has_edge(u, v) != h.has_edge(map[u], map[v]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::connected_graphs;

    #[test]
    fn cycle_relabellings_match() {
        let c6 = SimpleGraph::cycle(6);
        let perm = [3usize, 5, 1, 0, 4, 2];
        let shuffled = c6.relabel(&perm);
        let map = brute_isomorphism(&c6, &shuffled).expect("isomorphic by construction");
        assert!(is_isomorphism(&c6, &shuffled, &map));
    }

    #[test]
    fn cospectral_degree_twins_are_distinguished() {
        // Same degree sequence (all 2s would be too easy): C6 versus 2·C3.
        let c6 = SimpleGraph::cycle(6);
        let two_c3 =
            SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(brute_isomorphism(&c6, &two_c3).is_none());
    }

    #[test]
    fn pairwise_distinct_small_catalogue() {
        // Canonical enumeration promises pairwise non-isomorphic graphs; the
        // brute backtracker must agree on all of n = 5.
        let gs = connected_graphs(5);
        for i in 0..gs.len() {
            for j in (i + 1)..gs.len() {
                assert!(
                    brute_isomorphism(&gs[i], &gs[j]).is_none(),
                    "catalogue entries {i} and {j} collide"
                );
            }
        }
    }

    #[test]
    fn regular_graphs_where_refinement_is_blind() {
        // Petersen graph versus K5,5 minus a perfect matching: both 3-regular
        // on 10 vertices; refinement alone cannot split them.
        let petersen = SimpleGraph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
            ],
        )
        .unwrap();
        let k55_minus: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (0..5).filter(move |&j| j != i).map(move |j| (i, 5 + j)))
            .collect();
        let other = SimpleGraph::from_edges(10, &k55_minus).unwrap();
        assert!(brute_isomorphism(&petersen, &other).is_none());
        // And the Petersen graph against a relabelling of itself.
        let perm = [9usize, 2, 4, 6, 8, 0, 1, 3, 5, 7];
        let p2 = petersen.relabel(&perm);
        assert!(brute_isomorphism(&petersen, &p2).is_some());
    }
}
