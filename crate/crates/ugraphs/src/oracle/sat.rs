//! SAT-backed exact representation search.
//!
//! A second, independent route to the same question as [`super::engine`]:
//! does some subdivision of the host admit a (proper / proper-Helly)
//! intersection model of `g` by connected subgraphs? The two oracles share
//! no search code and are tested against each other; this one exists because
//! certifying a *refusal* means sweeping the whole collapsed state space,
//! and a CDCL solver is far better at exhausting a finite space than a
//! hand-rolled DFS.
//!
//! Reduction to one fixed host. Two facts combine:
//!
//!   * collapsing: any representation normalises to one where every host
//!     edge carries at most `2·|G| + 1` subdivision nodes (same bound the
//!     DFS engine searches under);
//!   * refinement monotonicity: inserting a degree-2 node into a host edge
//!     never destroys representability. Models that covered both ends of
//!     the split spot absorb the new node, everyone else ignores it; all
//!     pairwise intersections, strict containments, equalities and Helly
//!     witness nodes are preserved verbatim.
//!
//! Together: `g` is representable within per-edge cap `k` iff it has a model
//! on the *single* host obtained by subdividing every edge exactly `k`
//! times. That is a finite constraint problem, encoded here in CNF.
//!
//! Connectivity is the only non-local constraint, and the hosts we accept
//! make it cheap. Every host in this crate is a cactus (each block is an
//! edge or a cycle), and on a cactus a nonempty node set `S` is connected
//! iff
//!
//!   (a) for every cycle block, `S` meets it in a circular arc (possibly
//!       empty, possibly the whole cycle), and
//!   (b) for every cut vertex `c`, if `S` meets two different components of
//!       `H − c` then `c ∈ S`.
//!
//! Both directions: a connected `S` clearly satisfies (b), and it satisfies
//! (a) because two fragments of `S` on a cycle block could only be joined
//! by a path re-entering the block at a second vertex, which would enlarge
//! the block. Conversely, given (a) and (b), walk the block tree from the
//! block of `x ∈ S` to the block of `y ∈ S`: every cut vertex on the way
//! separates `x` from `y`, so it lies in `S` by (b), and inside each block
//! consecutive cut vertices are joined within `S` by (a). So `x` and `y`
//! are connected through `S`.
//!
//! Everything else is textbook: intersection for edges, disjointness for
//! non-edges, a "has a private node" flag per ordered adjacent pair for
//! properness (u ⊊ v is forbidden, equal footprints are fine), and a
//! common-node disjunction per maximal clique of size ≥ 3 for Helly. A
//! satisfying assignment is decoded into a [`Representation`] and re-checked
//! by the independent verifier before being returned; refusals are exact
//! because the encoding is complete for the uniformly subdivided host.

use std::time::Instant;

use splr::{Certificate, Config, SolveIF, Solver, SolverError};

use crate::graph::SimpleGraph;
use crate::host::HostGraph;
use crate::rep::Representation;

use super::{OracleAnswer, OracleError, RepMode, SearchBudget};

/// Grows clauses; variables are 1-based positive integers as splr wants.
struct Cnf {
    clauses: Vec<Vec<i32>>,
    next_var: i32,
}

impl Cnf {
    fn new() -> Self {
        Cnf { clauses: Vec::new(), next_var: 1 }
    }

    fn fresh(&mut self) -> i32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn fresh_block(&mut self, count: usize) -> i32 {
        let first = self.next_var;
        self.next_var += count as i32;
        first
    }

    fn clause(&mut self, lits: Vec<i32>) {
        self.clauses.push(lits);
    }
}

/// Blocks of a small connected graph, via Hopcroft–Tarjan. Returns each
/// block as its node set (edges are implicit: a block is either a single
/// edge or induces exactly its cycle in a cactus).
fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();

    // Iterative DFS: (node, parent, neighbour index).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, parent, ref mut i)) = stack.last_mut() {
            if *i < adj[u].len() {
                let w = adj[u][*i];
                *i += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, u, 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        // `p` closes a block; pop its edges.
                        let mut nodes: Vec<usize> = Vec::new();
                        while let Some(&(a, b)) = edge_stack.last() {
                            if disc[a] >= disc[u] || (a == p && b == u) {
                                edge_stack.pop();
                                for x in [a, b] {
                                    if !nodes.contains(&x) {
                                        nodes.push(x);
                                    }
                                }
                                if a == p && b == u {
                                    break;
                                }
                            } else {
                                break;
                            }
                        }
                        out.push(nodes);
                    }
                }
            }
        }
    }
    out
}

/// Nodes of a cycle block in circular order. The block of a cactus that is
/// not a single edge induces exactly one cycle, so walking unvisited
/// neighbours inside the block traces it.
fn cycle_order(block: &[usize], adj: &[Vec<usize>]) -> Vec<usize> {
    let inside = |x: usize| block.contains(&x);
    let mut order = vec![block[0]];
    let mut prev = usize::MAX;
    loop {
        let cur = *order.last().unwrap();
        let next = adj[cur]
            .iter()
            .copied()
            .find(|&w| inside(w) && w != prev && (order.len() < 2 || w != order[0] || order.len() == block.len()))
            .unwrap_or(order[0]);
        if next == order[0] && order.len() == block.len() {
            break;
        }
        prev = cur;
        order.push(next);
        assert!(order.len() <= block.len(), "block is not a simple cycle");
    }
    order
}

/// Append, for one graph vertex with node variables `xs` (indexed by host
/// node), the constraints forcing its selected set to be connected:
/// circular-arc shape on every cycle block and the cut-vertex condition.
fn connectivity_constraints(
    cnf: &mut Cnf,
    xs: &[i32],
    cycle_blocks: &[Vec<usize>],
    cut_sides: &[(usize, Vec<Vec<usize>>)],
) {
    for cyc in cycle_blocks {
        let len = cyc.len();
        // b_i: the selection falls from node i to its circular successor.
        let b0 = cnf.fresh_block(len);
        for i in 0..len {
            let here = xs[cyc[i]];
            let next = xs[cyc[(i + 1) % len]];
            cnf.clause(vec![-here, next, b0 + i as i32]);
        }
        // At most one fall: a second fall would mean two arcs. Sequential
        // counter; s_i = "some fall at index ≤ i".
        let s0 = cnf.fresh_block(len);
        for i in 0..len {
            let b = b0 + i as i32;
            let s = s0 + i as i32;
            cnf.clause(vec![-b, s]);
            if i > 0 {
                let sp = s0 + i as i32 - 1;
                cnf.clause(vec![-sp, s]);
                cnf.clause(vec![-sp, -b]);
            }
        }
    }
    for (c, sides) in cut_sides {
        // m_j: the selection meets side j of this cut vertex.
        let m0 = cnf.fresh_block(sides.len());
        for (j, side) in sides.iter().enumerate() {
            for &p in side {
                cnf.clause(vec![-xs[p], m0 + j as i32]);
            }
        }
        for i in 0..sides.len() {
            for j in i + 1..sides.len() {
                cnf.clause(vec![-(m0 + i as i32), -(m0 + j as i32), xs[*c]]);
            }
        }
    }
}

/// Pairs `(u, v)`, `u < v`, whose models may be forced into lexicographic
/// order: swapping a twin pair (open: same neighbourhood, or closed: same
/// closed neighbourhood) is a graph automorphism, and it maps every
/// constraint family onto itself, so any solution can be sorted class by
/// class. Both twin relations are equivalences; a vertex sitting in a
/// nontrivial class of each kind keeps only the closed-twin constraints so
/// the classes stay disjoint and independently sortable. Without this,
/// interchangeable vertices (think of a star's leaves) make refusals
/// exponentially painful for the solver.
fn twin_lex_pairs(g: &SimpleGraph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for (closed, skip_used) in [(true, false), (false, true)] {
        let mut classes: Vec<(u128, Vec<usize>)> = Vec::new();
        for v in 0..n {
            if skip_used && used[v] {
                continue;
            }
            let mut key = g.neighbors(v).0;
            if closed {
                key |= 1 << v;
            }
            match classes.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(v),
                None => classes.push((key, vec![v])),
            }
        }
        for (_, members) in classes {
            if members.len() < 2 {
                continue;
            }
            for w in members.windows(2) {
                out.push((w[0], w[1]));
            }
            if closed {
                for &m in &members {
                    used[m] = true;
                }
            }
        }
    }
    out
}

/// Exact representation search by SAT on the uniformly subdivided host.
///
/// Same contract as [`super::search_representation`]: `Yes` carries a
/// verified representation, `No` the per-edge subdivision bound that was
/// exhausted (`None` once the collapsing bound is reached, making the
/// refusal unconditional), `Unknown` only on timeout.
pub fn search_representation_sat(
    g: &SimpleGraph,
    host: &HostGraph,
    mode: RepMode,
    budget: &SearchBudget,
) -> Result<OracleAnswer<Representation>, OracleError> {
    budget.validate()?;
    let n = g.n();
    let collapse = 2 * n + 1;
    let e_count = host.edges().len();

    // Uniform per-edge count: the budget cap, the collapsing bound, and the
    // total-node cap all clamp it.
    let mut k = budget.max_subdivision_per_edge.min(collapse);
    while k > 0 && host.n() + e_count * k > budget.max_nodes_total {
        k -= 1;
    }
    let sub = host.subdivide_uniform(k);
    let bound = if k >= collapse { None } else { Some(k) };

    if n == 0 {
        return Ok(OracleAnswer::Yes(Representation { host: sub, model: Vec::new() }));
    }

    let big_n = sub.total_nodes();
    let adj: Vec<Vec<usize>> = (0..big_n).map(|p| sub.neighbors(p).to_vec()).collect();

    // Host structure: cycle blocks and, per cut vertex, the components of
    // the host minus that vertex.
    let all_blocks = blocks(&adj);
    let mut cycle_blocks = Vec::new();
    for b in &all_blocks {
        if b.len() > 2 {
            cycle_blocks.push(cycle_order(b, &adj));
        }
    }
    let mut cut_sides: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    for c in 0..big_n {
        let mut seen = vec![false; big_n];
        seen[c] = true;
        let mut sides: Vec<Vec<usize>> = Vec::new();
        for start in 0..big_n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            sides.push(comp);
        }
        if sides.len() > 1 {
            cut_sides.push((c, sides));
        }
    }

    let mut cnf = Cnf::new();
    // x[v][p]: vertex v's model contains host node p.
    let x0 = cnf.fresh_block(n * big_n);
    let xs = |v: usize, p: usize| x0 + (v * big_n + p) as i32;

    for v in 0..n {
        // Nonempty...
        cnf.clause((0..big_n).map(|p| xs(v, p)).collect());
        // ...and connected.
        let row: Vec<i32> = (0..big_n).map(|p| xs(v, p)).collect();
        connectivity_constraints(&mut cnf, &row, &cycle_blocks, &cut_sides);
    }

    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                // Some common node: y_p ⇒ both, and some y_p holds.
                let y0 = cnf.fresh_block(big_n);
                for p in 0..big_n {
                    let y = y0 + p as i32;
                    cnf.clause(vec![-y, xs(u, p)]);
                    cnf.clause(vec![-y, xs(v, p)]);
                }
                cnf.clause((0..big_n).map(|p| y0 + p as i32).collect());
            } else {
                for p in 0..big_n {
                    cnf.clause(vec![-xs(u, p), -xs(v, p)]);
                }
            }
        }
    }

    if mode != RepMode::Any {
        // No strict containment, adjacent pairs only (disjoint models can't
        // nest). pr(u,v) ⟺ u has a node outside v; forbidding u ⊊ v for
        // both orders collapses to pr(u,v) ⟺ pr(v,u).
        for (u, v) in g.edges() {
            let pr_uv = cnf.fresh();
            let pr_vu = cnf.fresh();
            for (pr, a, b) in [(pr_uv, u, v), (pr_vu, v, u)] {
                let w0 = cnf.fresh_block(big_n);
                let mut some = vec![-pr];
                for p in 0..big_n {
                    let w = w0 + p as i32;
                    cnf.clause(vec![-w, xs(a, p)]);
                    cnf.clause(vec![-w, -xs(b, p)]);
                    some.push(w);
                    // Witness direction: a private node forces the flag.
                    cnf.clause(vec![-xs(a, p), xs(b, p), pr]);
                }
                cnf.clause(some);
            }
            cnf.clause(vec![pr_uv, -pr_vu]);
            cnf.clause(vec![pr_vu, -pr_uv]);
        }
    }

    if mode == RepMode::ProperHelly {
        for clique in g.maximal_cliques() {
            if clique.len() < 3 {
                continue;
            }
            let h0 = cnf.fresh_block(big_n);
            for p in 0..big_n {
                for v in clique.iter() {
                    cnf.clause(vec![-(h0 + p as i32), xs(v, p)]);
                }
            }
            cnf.clause((0..big_n).map(|p| h0 + p as i32).collect());
        }
    }

    // Positional normal form. No model can span an unoccupied interior
    // node (its trace on an edge is contiguous), so the occupied stretches
    // of an edge interior are independent and slide freely — sliding is
    // just re-subdividing. Every representation therefore normalises to:
    // unoccupied interior positions form one contiguous run, and the last
    // interior position, when occupied, belongs to a model that also holds
    // the far base endpoint (anything else is a floater and slides left).
    // Without this the solver re-refutes every shifted copy of every
    // configuration.
    for e in 0..e_count {
        let interior = sub.edge_interior(e);
        if interior.is_empty() {
            continue;
        }
        let kk = interior.len();
        let far_end = sub.base_edges()[e].1;
        // occ_i ⟺ someone holds interior position i.
        let occ0 = cnf.fresh_block(kk);
        for (i, &p) in interior.iter().enumerate() {
            let occ = occ0 + i as i32;
            let mut any = vec![-occ];
            for v in 0..n {
                cnf.clause(vec![-xs(v, p), occ]);
                any.push(xs(v, p));
            }
            cnf.clause(any);
        }
        // gp_i: some position ≤ i is unoccupied. Once a gap has been seen,
        // an occupied position must stay occupied to the end of the edge.
        let gp0 = cnf.fresh_block(kk);
        for i in 0..kk {
            cnf.clause(vec![occ0 + i as i32, gp0 + i as i32]);
            if i > 0 {
                cnf.clause(vec![-(gp0 + i as i32 - 1), gp0 + i as i32]);
                if i + 1 < kk {
                    cnf.clause(vec![
                        -(gp0 + i as i32 - 1),
                        -(occ0 + i as i32),
                        occ0 + i as i32 + 1,
                    ]);
                }
            }
        }
        let t0 = cnf.fresh_block(n);
        let mut anchored = vec![-(occ0 + kk as i32 - 1)];
        for v in 0..n {
            let t = t0 + v as i32;
            cnf.clause(vec![-t, xs(v, interior[kk - 1])]);
            cnf.clause(vec![-t, xs(v, far_end)]);
            anchored.push(t);
        }
        cnf.clause(anchored);
    }

    // Symmetry breaking: fix twins into lexicographic model order.
    // eq_p tracks "rows agree before position p"; at the first difference
    // the smaller-indexed twin must be the one missing the node.
    for (u, v) in twin_lex_pairs(g) {
        let eq0 = cnf.fresh_block(big_n);
        for p in 0..big_n {
            let eq = eq0 + p as i32;
            if p == 0 {
                cnf.clause(vec![eq]);
            } else {
                let prev = eq0 + p as i32 - 1;
                let (au, av) = (xs(u, p - 1), xs(v, p - 1));
                cnf.clause(vec![-prev, -au, -av, eq]);
                cnf.clause(vec![-prev, au, av, eq]);
            }
            cnf.clause(vec![-eq, -xs(u, p), xs(v, p)]);
        }
    }

    let mut config = Config::default();
    config.c_timeout = budget.time_limit.as_secs_f64().min(f64::from(u32::MAX));
    config.quiet_mode = true;
    let deadline_guard = Instant::now();
    let mut solver = Solver::try_from((config, cnf.clauses.as_ref()))
        .unwrap_or_else(|e| panic!("solver rejected the encoding: {e:?}"));
    // splr 0.17 can panic out of its own rephasing sort on long runs (a
    // non-total float comparison). That is a resource failure, not an
    // answer, so it degrades to Unknown like a timeout does.
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| solver.solve()));
    let outcome = match outcome {
        Ok(r) => r,
        Err(_) => return Ok(OracleAnswer::Unknown),
    };
    match outcome {
        Ok(Certificate::SAT(model)) => {
            let truth: Vec<bool> = {
                let mut t = vec![false; cnf.next_var as usize];
                for lit in model {
                    if lit > 0 {
                        t[lit as usize] = true;
                    }
                }
                t
            };
            let models: Vec<Vec<usize>> = (0..n)
                .map(|v| (0..big_n).filter(|&p| truth[xs(v, p) as usize]).collect())
                .collect();
            let rep = Representation { host: sub, model: models };
            let verdict = rep.verify(g).expect("decoded representation is malformed");
            assert!(verdict.is_intersection_model, "SAT model is not an intersection model");
            if mode != RepMode::Any {
                assert!(verdict.is_proper, "SAT model violates properness");
            }
            if mode == RepMode::ProperHelly {
                assert!(verdict.is_helly(), "SAT model violates the Helly property");
            }
            Ok(OracleAnswer::Yes(rep))
        }
        Ok(Certificate::UNSAT) => Ok(OracleAnswer::No { subdivision_bound: bound }),
        Err(SolverError::TimeOut | SolverError::OutOfMemory) => Ok(OracleAnswer::Unknown),
        Err(e) => panic!(
            "solver failed after {:?}: {e:?}",
            deadline_guard.elapsed()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn quick(g: &SimpleGraph, host: &str, mode: RepMode) -> OracleAnswer<()> {
        let host = HostGraph::from_description(host).unwrap();
        let budget = SearchBudget::exhaustive_for(g).with_time_limit(Duration::from_secs(60));
        search_representation_sat(g, &host, mode, &budget).unwrap().map_unit()
    }

    #[test]
    fn triangle_on_k2_all_modes() {
        let g = SimpleGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        for mode in [RepMode::Any, RepMode::Proper, RepMode::ProperHelly] {
            assert!(quick(&g, "K2", mode).is_yes(), "{mode:?}");
        }
    }

    #[test]
    fn claw_not_proper_on_k2() {
        // K_{1,3} is interval but famously not proper interval.
        let g = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(quick(&g, "K2", RepMode::Any).is_yes());
        assert_eq!(quick(&g, "K2", RepMode::Proper), OracleAnswer::No { subdivision_bound: None });
    }

    #[test]
    fn c4_needs_the_circle() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(quick(&g, "K2", RepMode::Proper), OracleAnswer::No { subdivision_bound: None });
        assert!(quick(&g, "C4", RepMode::Proper).is_yes());
        assert!(quick(&g, "C4", RepMode::ProperHelly).is_yes());
    }

    #[test]
    fn wheel_w4_proper_helly_on_pendant_triangle() {
        // Delicate Helly witness: the hub must thread every rim overlap
        // while leaving each rim arc a private node.
        let g = SimpleGraph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        assert!(quick(&g, "C3+pendant(0)", RepMode::Proper).is_yes());
        assert!(quick(&g, "C3+pendant(0)", RepMode::ProperHelly).is_yes());
    }

    #[test]
    fn respects_tight_per_edge_budget() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let host = HostGraph::from_description("K2").unwrap();
        let budget = SearchBudget {
            max_subdivision_per_edge: 2,
            max_nodes_total: 64,
            time_limit: Duration::from_secs(10),
        };
        match search_representation_sat(&g, &host, RepMode::Proper, &budget).unwrap() {
            OracleAnswer::No { subdivision_bound } => assert_eq!(subdivision_bound, Some(2)),
            other => panic!("expected a bounded refusal, got {other:?}"),
        }
    }
}
