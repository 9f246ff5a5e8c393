//! Exhaustive search for intersection models on subdivisions of a host.
//!
//! The naive formulation ("pick subdivision counts, then pick a connected
//! subgraph per vertex") dies instantly: even tiny hosts have astronomically
//! many connected subgraphs once edges carry a dozen subdivision nodes. The
//! search here works on *collapsed* states instead, where a host edge is an
//! ordered sequence of **cells**. Each cell stands for one subdivision node
//! and carries the set of graph vertices whose model covers it; base nodes
//! carry such a set directly. Vertices are placed one at a time, and a
//! placement may cover existing cells, split a cell (the two halves inherit
//! its occupants), or insert a fresh cell holding only the new vertex.
//!
//! Why this is exact and not a heuristic: take any representation on any
//! subdivision of the host and collapse maximal runs of consecutive
//! subdivision nodes with identical covering sets down to a single node.
//! Collapsing preserves adjacency of models, connectivity, properness and
//! the Helly property, and empty nodes can be deleted outright (two models
//! meet iff they share a node — nobody needs a separator). In the collapsed
//! form consecutive cells differ, and a counting argument bounds the number
//! of cells per edge by `2·|G| + 1`: each vertex contributes at most two
//! maximal runs to one edge (its trace there is at most two intervals, one
//! per endpoint, or a single interior one), runs of distinct neighbours
//! alternate, and one extra slot covers the worst case of a wrapped trace
//! interleaved with a floater. `2·|G|` alone is *not* enough — with `G = K2`
//! a wrap plus a floater overlapping both wrap pieces already needs the cell
//! pattern `{w} {wf} {f} {wf} {w}`, five cells for two vertices — hence the
//! `+1`. A search capped at `2·|G| + 1` cells per edge that finds nothing is
//! therefore a genuine refusal.
//!
//! Between two consecutive cells (and between a cell and a base node) sits a
//! **boundary**; for each boundary we track the set of vertices whose model
//! runs contiguously across it. A fresh cell may only be inserted at a
//! boundary nobody crosses, otherwise the insertion would cut an existing
//! model in two. This span bookkeeping is what lets later placements refine
//! earlier ones without ever re-examining them.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use super::{OracleAnswer, OracleError, RepMode, SearchBudget};
use crate::graph::SimpleGraph;
use crate::host::HostGraph;
use crate::rep::Representation;

/// Vertex sets of the searched graph, as bit masks.
type Mask = u32;

/// Hard ceiling for the brute-force search; masks are u32 and the state
/// space beyond this is hopeless anyway.
const ENGINE_MAX_N: usize = 30;

/// One host edge in a collapsed state: `cells[i]` is the occupant set of the
/// i-th subdivision node (ordered from the smaller base endpoint), `span[b]`
/// the set of vertices crossing boundary `b`. Boundary `b` sits left of cell
/// `b`; boundary `k` touches the larger base endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeSt {
    cells: Vec<Mask>,
    span: Vec<Mask>,
}

impl EdgeSt {
    fn empty() -> Self {
        EdgeSt {
            cells: Vec::new(),
            span: vec![0],
        }
    }

    fn k(&self) -> usize {
        self.cells.len()
    }
}

/// A collapsed partial representation: occupant sets for base nodes plus an
/// [`EdgeSt`] per base edge (indexed like `HostGraph::edges()`).
#[derive(Clone, Debug)]
struct St {
    nodes: Vec<Mask>,
    edges: Vec<EdgeSt>,
}

/// What a placement does to one old cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum CellAct {
    /// Leave it alone.
    Skip,
    /// Cover it entirely.
    Cover,
    /// Split it, covering the left part: `c` becomes `c|v, c`.
    SplitL,
    /// Split it, covering the right part: `c` becomes `c, c|v`.
    SplitR,
    /// Land strictly inside: `c` becomes `c, c|v, c`.
    Mid,
    /// Cover both outer thirds but not the middle: `c|v, c, c|v`.
    /// Only arises when a wrap's two arms split into the same cell.
    InvMid,
}

impl CellAct {
    /// Does v's part of this cell touch the cell's right boundary?
    fn covers_right(self) -> bool {
        matches!(self, CellAct::Cover | CellAct::SplitR | CellAct::InvMid)
    }

    /// Does v's part of this cell touch the cell's left boundary?
    fn covers_left(self) -> bool {
        matches!(self, CellAct::Cover | CellAct::SplitL | CellAct::InvMid)
    }
}

/// Rebuild one edge after vertex `vb` acts on it.
///
/// `fresh` is a bitmask of old boundaries each receiving a new `{v}` cell
/// (caller guarantees their spans are empty — a fresh cell would sever
/// anyone crossing). A placement may need several: the overlap territory
/// for every neighbour placed later has to exist now. `brk` marks the one
/// boundary where a fully covering wrap deliberately remains in two pieces:
/// v is not recorded as crossing there. `a_in`/`b_in` say whether v occupies
/// the base node at the low/high end, which is what makes coverage at the
/// outermost boundaries count as crossings.
fn apply_edge(
    old: &EdgeSt,
    acts: &[CellAct],
    fresh: u64,
    brk: Option<usize>,
    a_in: bool,
    b_in: bool,
    vb: Mask,
) -> EdgeSt {
    let k = old.k();
    debug_assert_eq!(acts.len(), k);
    let mut cells = Vec::with_capacity(k + 2);
    let mut span = Vec::with_capacity(k + 3);
    for b in 0..=k {
        let left_cov = if b == 0 { a_in } else { acts[b - 1].covers_right() };
        let right_cov = if b == k { b_in } else { acts[b].covers_left() };
        if fresh >> b & 1 != 0 {
            debug_assert_eq!(old.span[b], 0, "fresh insertion at a crossed boundary");
            span.push(if left_cov { vb } else { 0 });
            cells.push(vb);
            span.push(if right_cov { vb } else { 0 });
        } else {
            let crossing = left_cov && right_cov && brk != Some(b);
            span.push(old.span[b] | if crossing { vb } else { 0 });
        }
        if b < k {
            let c = old.cells[b];
            match acts[b] {
                CellAct::Skip => cells.push(c),
                CellAct::Cover => cells.push(c | vb),
                CellAct::SplitL => {
                    cells.push(c | vb);
                    span.push(c);
                    cells.push(c);
                }
                CellAct::SplitR => {
                    cells.push(c);
                    span.push(c);
                    cells.push(c | vb);
                }
                CellAct::Mid => {
                    cells.push(c);
                    span.push(c);
                    cells.push(c | vb);
                    span.push(c);
                    cells.push(c);
                }
                CellAct::InvMid => {
                    cells.push(c | vb);
                    span.push(c);
                    cells.push(c);
                    span.push(c);
                    cells.push(c | vb);
                }
            }
        }
    }
    debug_assert_eq!(span.len(), cells.len() + 1);
    EdgeSt { cells, span }
}

/// A way for the new vertex to appear on a single edge, in compact form;
/// applied lazily via [`apply_mv`] so menus stay cheap to hold. Every
/// variant carries `fresh`, a bitmask of old boundaries (within or flanking
/// the trace, spans empty) that receive new `{v}` cells.
#[derive(Clone, Copy, Debug)]
enum EdgeMv {
    /// Strictly inside cell `i` (floater).
    Mid { i: u8 },
    /// Floater covering cells `s..e`, optionally splitting into the cells
    /// just outside the range.
    Float { s: u8, e: u8, sl: bool, sr: bool, fresh: u64 },
    /// Anchored one-sided extent: `t` full cells from the `from_a` side,
    /// optionally splitting into the next cell.
    Reach { from_a: bool, t: u8, split: bool, fresh: u64 },
    /// Cover the whole edge, crossing every boundary (both ends anchored).
    Full { fresh: u64 },
    /// Two anchored arms: `ta` cells from the low side, `tb` from the high
    /// side, optional splits toward the gap. A zero-length gap means the
    /// trace covers everything but stays in two pieces (the break sits at
    /// boundary `ta`).
    Wrap { ta: u8, sa: bool, tb: u8, sb: bool, fresh: u64 },
}

impl EdgeMv {
    /// How many fresh cells the move inserts.
    fn fresh_count(self) -> u32 {
        match self {
            EdgeMv::Mid { .. } => 0,
            EdgeMv::Float { fresh, .. }
            | EdgeMv::Reach { fresh, .. }
            | EdgeMv::Full { fresh }
            | EdgeMv::Wrap { fresh, .. } => fresh.count_ones(),
        }
    }
}

/// Menu entry: the move plus everything the assembly loop needs to prune
/// without applying it.
#[derive(Clone, Copy, Debug)]
struct EdgeChoice {
    mv: EdgeMv,
    /// Previously placed vertices v would share a cell with on this edge.
    touched: Mask,
    /// Trace crosses the whole edge (joins the two base endpoints).
    connects: bool,
    /// Cells the move adds to the edge. Menus are explored leanest-first:
    /// witnesses tend to be compact, and small states collide in the memo
    /// far more often.
    adds: u8,
}

fn apply_mv(old: &EdgeSt, mv: EdgeMv, vb: Mask, a_in: bool, b_in: bool) -> EdgeSt {
    let k = old.k();
    let mut acts = vec![CellAct::Skip; k];
    let fresh;
    let mut brk = None;
    match mv {
        EdgeMv::Mid { i } => {
            acts[i as usize] = CellAct::Mid;
            fresh = 0;
        }
        EdgeMv::Float { s, e, sl, sr, fresh: f } => {
            let (s, e) = (s as usize, e as usize);
            for a in acts.iter_mut().take(e).skip(s) {
                *a = CellAct::Cover;
            }
            if sl {
                acts[s - 1] = CellAct::SplitR;
            }
            if sr {
                acts[e] = CellAct::SplitL;
            }
            fresh = f;
        }
        EdgeMv::Reach { from_a, t, split, fresh: f } => {
            let t = t as usize;
            if from_a {
                for a in acts.iter_mut().take(t) {
                    *a = CellAct::Cover;
                }
                if split {
                    acts[t] = CellAct::SplitL;
                }
            } else {
                for a in acts.iter_mut().skip(k - t) {
                    *a = CellAct::Cover;
                }
                if split {
                    acts[k - 1 - t] = CellAct::SplitR;
                }
            }
            fresh = f;
        }
        EdgeMv::Full { fresh: f } => {
            for a in acts.iter_mut() {
                *a = CellAct::Cover;
            }
            fresh = f;
        }
        EdgeMv::Wrap { ta, sa, tb, sb, fresh: f } => {
            let (ta, tb) = (ta as usize, tb as usize);
            let gap = k - ta - tb;
            for a in acts.iter_mut().take(ta) {
                *a = CellAct::Cover;
            }
            for a in acts.iter_mut().skip(k - tb) {
                *a = CellAct::Cover;
            }
            if gap == 0 {
                brk = Some(ta);
            }
            if sa && sb && gap == 1 {
                acts[ta] = CellAct::InvMid;
            } else {
                if sa {
                    acts[ta] = CellAct::SplitL;
                }
                if sb {
                    acts[k - 1 - tb] = CellAct::SplitR;
                }
            }
            fresh = f;
        }
    }
    apply_edge(old, &acts, fresh, brk, a_in, b_in, vb)
}

/// Iterate all submasks of `mask`, including `mask` itself and 0, invoking
/// `f` on each; `f` returning true stops and propagates.
fn for_each_submask(mask: u64, f: &mut dyn FnMut(u64) -> bool) -> bool {
    let mut sub = mask;
    loop {
        if f(sub) {
            return true;
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & mask;
    }
}

/// Like [`for_each_submask`] but restricted to at most `max_fresh` bits.
fn for_each_fresh(mask: u64, max_fresh: u32, f: &mut dyn FnMut(u64) -> bool) -> bool {
    for_each_submask(mask, &mut |sub| sub.count_ones() <= max_fresh && f(sub))
}

/// Everything fixed for the duration of one search.
struct Ctx {
    g: SimpleGraph,
    host: HostGraph,
    base_edges: Vec<(usize, usize)>,
    mode: RepMode,
    /// Effective per-edge cell cap (budget clamped to the collapsing bound).
    cap_edge: usize,
    cap_total: usize,
    collapse_bound: usize,
    deadline: Instant,
    /// Placement order: max degree first, then most placed neighbours.
    order: Vec<usize>,
    adj: Vec<Mask>,
    /// Maximal cliques as masks, for the incremental Helly check.
    cliques: Vec<Mask>,
    /// Automorphisms of the base host, for first-placement symmetry breaking.
    autos: Vec<Vec<usize>>,
    /// For each count `c` of placed vertices, the automorphisms of `g`
    /// fixing the placed prefix setwise. Such a relabelling maps partial
    /// states to partial states with identical futures, so the memo
    /// canonicalises over these as well.
    stab_by_count: Vec<Vec<Vec<usize>>>,
    /// Connected nonempty subsets of base nodes, as masks over base indices.
    base_subsets: Vec<u32>,
    /// Bytes an occupant mask takes in a memo key.
    mask_w: usize,
    /// For each count of placed vertices, the placed vertices that still
    /// have an unplaced neighbour. The rest are *closed*: every vertex yet
    /// to come is a non-neighbour of theirs, so their models act on the
    /// future purely as forbidden territory, and the memo key may forget
    /// which closed model owns which cell.
    open_by_count: Vec<Mask>,
    /// Spare bit (position `n`) marking "some closed vertex sits here" in
    /// abstracted key masks.
    blocked_bit: u32,
}

impl Ctx {
    fn new(g: &SimpleGraph, host: &HostGraph, mode: RepMode, budget: &SearchBudget) -> Self {
        let n = g.n();
        let collapse_bound = 2 * n + 1;
        let adj: Vec<Mask> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0, |m, u| m | (1 << u)))
            .collect();

        // Greedy order: start at a max-degree vertex, then repeatedly take
        // the vertex with the most already-placed neighbours (ties: higher
        // degree, then smaller index). Keeps `allowed` masks tight early.
        let mut order = Vec::with_capacity(n);
        let mut placed: Mask = 0;
        for _ in 0..n {
            let mut best: Option<(usize, usize, usize)> = None;
            for v in 0..n {
                if placed & (1 << v) != 0 {
                    continue;
                }
                let anchored = (adj[v] & placed).count_ones() as usize;
                let key = (anchored, g.degree(v));
                if best.map_or(true, |(ba, bd, _)| key > (ba, bd)) {
                    best = Some((key.0, key.1, v));
                }
            }
            let v = best.unwrap().2;
            order.push(v);
            placed |= 1 << v;
        }
        let cliques = g
            .maximal_cliques()
            .into_iter()
            .map(|c| c.iter().fold(0, |m, v| m | (1 << v)))
            .collect();

        let base_edges: Vec<(usize, usize)> = host.edges();
        let b = host.n();
        let mut host_adj = vec![0u32; b];
        for &(x, y) in &base_edges {
            host_adj[x] |= 1 << y;
            host_adj[y] |= 1 << x;
        }
        let base_subsets = connected_subsets(&host_adj);

        let g_autos = if n <= 12 {
            graph_automorphisms(g)
        } else {
            vec![(0..n).collect()]
        };
        let mut stab_by_count: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n + 1);
        stab_by_count.push(g_autos.clone());
        let mut open_by_count: Vec<Mask> = Vec::with_capacity(n + 1);
        open_by_count.push(0);
        let mut prefix: Mask = 0;
        for &v in &order {
            prefix |= 1 << v;
            stab_by_count.push(
                g_autos
                    .iter()
                    .filter(|p| mask_perm(prefix, p) == prefix)
                    .cloned()
                    .collect(),
            );
            let mut open: Mask = 0;
            let mut mm = prefix;
            while mm != 0 {
                let u = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                if adj[u] & !prefix != 0 {
                    open |= 1 << u;
                }
            }
            open_by_count.push(open);
        }

        Ctx {
            g: g.clone(),
            host: host.clone(),
            base_edges,
            mode,
            cap_edge: budget.max_subdivision_per_edge.min(collapse_bound),
            cap_total: budget.max_nodes_total,
            collapse_bound,
            deadline: Instant::now() + budget.time_limit,
            order,
            adj,
            cliques,
            autos: base_host_automorphisms(host),
            stab_by_count,
            base_subsets,
            mask_w: (n + 1).div_ceil(8),
            open_by_count,
            blocked_bit: n as u32,
        }
    }
}

/// All nonempty connected subsets of the base host, each exactly once.
/// Standard rooted growth: a set is generated from its minimum element, and
/// extensions may only use larger-indexed nodes.
fn connected_subsets(adj: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut out = Vec::new();
    fn grow(adj: &[u32], cur: u32, ext: u32, mut banned: u32, out: &mut Vec<u32>) {
        out.push(cur);
        let mut e = ext & !banned;
        while e != 0 {
            let x = e & e.wrapping_neg();
            e &= e - 1;
            let xi = x.trailing_zeros() as usize;
            grow(adj, cur | x, (ext | adj[xi]) & !(cur | x) & !banned, banned | x, out);
            banned |= x;
        }
    }
    for r in 0..n {
        let above: u32 = !0u32 << r;
        grow(adj, 1 << r, adj[r] & above, 0, &mut out);
    }
    out.sort_unstable();
    out
}

/// Automorphism group of the base host graph, as permutation vectors, in
/// lexicographic order (identity first). Backtracking with a degree filter;
/// hosts here are tiny.
pub fn base_host_automorphisms(host: &HostGraph) -> Vec<Vec<usize>> {
    graph_automorphisms(host.graph())
}

/// Automorphism group of an arbitrary graph, same shape and order.
fn graph_automorphisms(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        g: &SimpleGraph,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        v: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = g.n();
        if v == n {
            out.push(perm.clone());
            return;
        }
        'cand: for w in 0..n {
            if used[w] || g.degree(v) != g.degree(w) {
                continue;
            }
            for u in 0..v {
                if g.has_edge(u, v) != g.has_edge(perm[u], w) {
                    continue 'cand;
                }
            }
            perm[v] = w;
            used[w] = true;
            rec(g, perm, used, v + 1, out);
            used[w] = false;
            perm[v] = usize::MAX;
        }
    }
    rec(g, &mut perm, &mut used, 0, &mut out);
    out
}

/// Flat encoding of a state, used for duplicate detection. Lengths are
/// embedded, so the encoding is prefix-free per edge.
///
/// Spans are deliberately abstracted to their zero/nonzero pattern: every
/// future decision reads a span only through the "is it empty" test (fresh
/// cells need an uncrossed boundary), the acceptance checks read cells and
/// node masks alone, and spans never empty out again once crossed. Two
/// states agreeing on cells and the pattern therefore have identical
/// futures, and folding them together prunes a great deal.
///
/// Closed vertices — placed, with every neighbour also placed — are
/// anonymised: the key keeps only a "blocked" bit where any of them sit.
/// Sound because anything still to be placed is a non-neighbour of every
/// closed vertex, so it must avoid their territory outright (which also
/// rules out containment either way), and every maximal clique through a
/// closed vertex was fully placed and Helly-checked already. Two states
/// that differ only in *which* closed model owns blocked ground thus have
/// identical futures. Spans keep their exact masks in the state (fresh
/// cells may still be inserted at a boundary two closed models merely
/// abut), but the key only needs the zero/nonzero pattern as before.
///
/// Keys are byte-packed: occupant masks take `mask_w` bytes (graph bits
/// plus the blocked bit), cell counts one byte, and each boundary pattern
/// `ceil((k+1)/8)` bytes. Tight keys let the memo hold several million
/// states, which is what an exhaustive refusal sweep needs.
fn encode(st: &St, mask_w: usize, open: Mask, blocked_bit: u32) -> Vec<u8> {
    let mut out =
        Vec::with_capacity((st.nodes.len() + st.edges.iter().map(|e| e.k() + 2).sum::<usize>()) * mask_w);
    let pack = |m: Mask| {
        let mut km = m & open;
        if m & !open != 0 {
            km |= 1 << blocked_bit;
        }
        km
    };
    for &m in &st.nodes {
        out.extend_from_slice(&pack(m).to_le_bytes()[..mask_w]);
    }
    for e in &st.edges {
        out.push(e.k() as u8);
        for &c in &e.cells {
            out.extend_from_slice(&pack(c).to_le_bytes()[..mask_w]);
        }
        let mut pattern = 0u64;
        for (b, &s) in e.span.iter().enumerate() {
            if s != 0 {
                pattern |= 1 << b;
            }
        }
        out.extend_from_slice(&pattern.to_le_bytes()[..e.span.len().div_ceil(8)]);
    }
    out
}

/// Image of a vertex mask under a graph permutation.
fn mask_perm(m: Mask, perm: &[usize]) -> Mask {
    let mut out = 0;
    let mut mm = m;
    while mm != 0 {
        let v = mm.trailing_zeros() as usize;
        mm &= mm - 1;
        out |= 1 << perm[v];
    }
    out
}

/// Encoding of the state relabelled by a host automorphism and a graph
/// permutation: base occupancies permute, edges map to their images, an edge
/// whose endpoints swap order reverses its cell and span sequences, and the
/// occupant masks are rewritten through `graph_perm`. Span *masks* are left
/// untouched — only their zero-pattern reaches the encoding, and that is
/// invariant under relabelling the occupants.
fn encode_permuted(
    st: &St,
    perm: &[usize],
    graph_perm: Option<&[usize]>,
    base_edges: &[(usize, usize)],
    mask_w: usize,
    open: Mask,
    blocked_bit: u32,
) -> Vec<u8> {
    let remap = |m: Mask| match graph_perm {
        Some(p) => mask_perm(m, p),
        None => m,
    };
    let mut nodes = vec![0; st.nodes.len()];
    for (i, &m) in st.nodes.iter().enumerate() {
        nodes[perm[i]] = remap(m);
    }
    let mut edges: Vec<Option<EdgeSt>> = vec![None; st.edges.len()];
    for (e, est) in st.edges.iter().enumerate() {
        let (a, b) = base_edges[e];
        let (pa, pb) = (perm[a], perm[b]);
        let (key, flipped) = if pa < pb { ((pa, pb), false) } else { ((pb, pa), true) };
        let target = base_edges.binary_search(&key).expect("automorphism maps edges to edges");
        let mut img = est.clone();
        for c in &mut img.cells {
            *c = remap(*c);
        }
        if flipped {
            img.cells.reverse();
            img.span.reverse();
        }
        edges[target] = Some(img);
    }
    let perm_st = St {
        nodes,
        edges: edges.into_iter().map(|o| o.expect("edge image missing")).collect(),
    };
    // The stabiliser fixes the placed prefix setwise, and automorphic images
    // of closed vertices are closed, so `open` is invariant and the packed
    // abstraction commutes with the relabelling.
    encode(&perm_st, mask_w, open, blocked_bit)
}

struct Search {
    ctx: Ctx,
    memo: HashSet<Vec<u8>>,
    tick: u64,
    pushes: u64,
    hits: u64,
    admits: u64,
    timed_out: bool,
    /// Some candidate was excluded by a budget cap that is tighter than the
    /// collapsing bound; a refusal is then only valid up to that cap.
    limited: bool,
    total_cap_relevant: bool,
    /// Most fresh cells a single move may create while placing the current
    /// vertex (the per-placement budget also caps the sum across edges).
    max_fresh: u32,
}

/// Stop inserting into the duplicate-state memo beyond this; correctness is
/// unaffected, it just prunes less. Keys are a few dozen bytes, so the cap
/// works out to a few hundred MB.
const MEMO_CAP: usize = 1 << 22;

impl Search {
    fn time_ok(&mut self) -> bool {
        self.tick += 1;
        if self.tick % 64 == 0 && Instant::now() >= self.ctx.deadline {
            self.timed_out = true;
        }
        !self.timed_out
    }

    fn dfs(&mut self, st: &St, idx: usize) -> Option<St> {
        if idx == self.ctx.order.len() {
            return Some(st.clone());
        }
        let mut found: Option<St> = None;
        self.enum_placements(st, idx, &mut |me, cand| {
            if !me.time_ok() {
                return true;
            }
            if let Some(w) = me.dfs(&cand, idx + 1) {
                found = Some(w);
                return true;
            }
            false
        });
        found
    }

    /// Enumerate every essentially distinct way to place `order[idx]` into
    /// `st`, invoking `f` on each resulting state. `f` returns true to stop.
    /// Returns true if stopped early.
    fn enum_placements(
        &mut self,
        st: &St,
        idx: usize,
        f: &mut dyn FnMut(&mut Self, St) -> bool,
    ) -> bool {
        let v = self.ctx.order[idx];
        let vb: Mask = 1 << v;
        let placed_prev: Mask = self.ctx.order[..idx].iter().fold(0, |m, &u| m | (1 << u));
        let allowed: Mask = self.ctx.adj[v] & placed_prev;
        let ne = st.edges.len();
        // A fresh cell only ever pays its way as the vertex's one private
        // node (a single private already defeats every containment) or as a
        // designated meeting spot for one neighbour still to come; a witness
        // using more can drop the surplus nodes — models stay contiguous
        // when a node nobody else covers is deleted. So the whole placement
        // never needs more than `1 + #future neighbours` fresh cells.
        let future = (self.ctx.adj[v] & !placed_prev).count_ones();
        let fresh_budget = 1 + future;
        self.max_fresh = fresh_budget;

        // ---- floaters ----
        // Entire model inside one edge, touching no base node. Tried first:
        // when a witness exists it is often of this cheap kind.
        for e in 0..ne {
            let menu = self.float_menu(&st.edges[e], allowed);
            for ch in menu {
                if ch.touched != allowed {
                    continue;
                }
                let mut cand = st.clone();
                cand.edges[e] = apply_mv(&st.edges[e], ch.mv, vb, false, false);
                if self.admit(&cand, vb, placed_prev) && self.push_candidate(cand, idx + 1, f) {
                    return true;
                }
            }
        }

        // ---- anchored placements ----
        // Per-edge menus depend only on which endpoints the base set covers,
        // so build the three variants once and share them across subsets.
        let mut menu_a: Vec<Vec<EdgeChoice>> = Vec::with_capacity(ne);
        let mut menu_b: Vec<Vec<EdgeChoice>> = Vec::with_capacity(ne);
        let mut menu_ab: Vec<Vec<EdgeChoice>> = Vec::with_capacity(ne);
        for est in &st.edges {
            menu_a.push(self.reach_menu(est, allowed, true));
            menu_b.push(self.reach_menu(est, allowed, false));
            menu_ab.push(self.both_menu(est, allowed));
        }

        let subsets = self.ctx.base_subsets.clone();
        for s_mask in subsets {
            let base_touch = {
                let mut t = 0;
                let mut m = s_mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    m &= m - 1;
                    t |= st.nodes[i];
                }
                t
            };
            if base_touch & !allowed != 0 {
                continue;
            }
            // Edges with at least one covered endpoint; the rest stay as-is.
            let mut inv: Vec<(usize, u8)> = Vec::new(); // (edge, side code 1=a,2=b,3=both)
            for (e, &(a, b)) in self.ctx.base_edges.iter().enumerate() {
                let code = (s_mask >> a & 1) as u8 | ((s_mask >> b & 1) as u8) << 1;
                if code != 0 {
                    inv.push((e, code));
                }
            }
            // Union of occupants reachable from the edges not yet chosen;
            // lets us abandon a branch that can no longer meet exactness.
            let mut suffix_pot = vec![0 as Mask; inv.len() + 1];
            for (i, &(e, code)) in inv.iter().enumerate().rev() {
                let menu = match code {
                    1 => &menu_a[e],
                    2 => &menu_b[e],
                    _ => &menu_ab[e],
                };
                let pot = menu.iter().fold(0, |m, c| m | c.touched);
                suffix_pot[i] = suffix_pot[i + 1] | pot;
            }
            let mut chosen: Vec<Option<EdgeChoice>> = vec![None; inv.len()];
            let stop = self.anchored_rec(
                st, idx, vb, allowed, s_mask, &inv, &menu_a, &menu_b, &menu_ab, &suffix_pot, 0,
                base_touch, fresh_budget, &mut chosen, f,
            );
            if stop {
                return true;
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn anchored_rec(
        &mut self,
        st: &St,
        idx: usize,
        vb: Mask,
        allowed: Mask,
        s_mask: u32,
        inv: &[(usize, u8)],
        menu_a: &[Vec<EdgeChoice>],
        menu_b: &[Vec<EdgeChoice>],
        menu_ab: &[Vec<EdgeChoice>],
        suffix_pot: &[Mask],
        pos: usize,
        touched: Mask,
        fresh_left: u32,
        chosen: &mut Vec<Option<EdgeChoice>>,
        f: &mut dyn FnMut(&mut Self, St) -> bool,
    ) -> bool {
        if self.timed_out {
            return true;
        }
        if allowed & !touched & !suffix_pot[pos] != 0 {
            return false; // some required neighbour is out of reach
        }
        if pos == inv.len() {
            if touched != allowed {
                return false;
            }
            // The base set together with fully-crossed edges must hang
            // together; a piece of the model nothing joins up is invalid no
            // matter what later placements do (they cannot rely on a bare
            // base edge that a future insertion may subdivide).
            if !self.connected_under(s_mask, inv, chosen) {
                return false;
            }
            let mut cand = st.clone();
            let mut m = s_mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                cand.nodes[i] |= vb;
            }
            for (slot, &(e, code)) in chosen.iter().zip(inv.iter()) {
                if let Some(ch) = slot {
                    let (a_in, b_in) = (code & 1 != 0, code & 2 != 0);
                    cand.edges[e] = apply_mv(&st.edges[e], ch.mv, vb, a_in, b_in);
                }
            }
            let placed_prev = {
                let mut p = 0;
                for &u in &self.ctx.order[..idx] {
                    p |= 1 << u;
                }
                p
            };
            if self.admit(&cand, vb, placed_prev) && self.push_candidate(cand, idx + 1, f) {
                return true;
            }
            return false;
        }
        let (e, code) = inv[pos];
        // Leaving the edge untouched is always on the menu.
        chosen[pos] = None;
        if self.anchored_rec(
            st, idx, vb, allowed, s_mask, inv, menu_a, menu_b, menu_ab, suffix_pot, pos + 1,
            touched, fresh_left, chosen, f,
        ) {
            return true;
        }
        let menu = match code {
            1 => &menu_a[e],
            2 => &menu_b[e],
            _ => &menu_ab[e],
        };
        // The menus are shared across subsets, so borrow immutably and index.
        for ci in 0..menu.len() {
            let ch = menu[ci];
            if ch.touched & !allowed != 0 {
                continue;
            }
            let spent = ch.mv.fresh_count();
            if spent > fresh_left {
                continue;
            }
            chosen[pos] = Some(ch);
            if self.anchored_rec(
                st, idx, vb, allowed, s_mask, inv, menu_a, menu_b, menu_ab, suffix_pot, pos + 1,
                touched | ch.touched, fresh_left - spent, chosen, f,
            ) {
                return true;
            }
        }
        chosen[pos] = None;
        false
    }

    /// Union-find over the anchored base set, joined by edges declared Full.
    fn connected_under(&self, s_mask: u32, inv: &[(usize, u8)], chosen: &[Option<EdgeChoice>]) -> bool {
        let members: Vec<usize> = (0..self.ctx.host.n()).filter(|i| s_mask >> i & 1 != 0).collect();
        if members.len() <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.ctx.host.n()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (slot, &(e, _)) in chosen.iter().zip(inv.iter()) {
            if let Some(ch) = slot {
                if ch.connects {
                    let (a, b) = self.ctx.base_edges[e];
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let root = find(&mut parent, members[0]);
        members.iter().all(|&m| find(&mut parent, m) == root)
    }

    /// Global screens that need the fully assembled candidate: node budget,
    /// permanence-safe properness, and the Helly condition for cliques whose
    /// last vertex just landed. All three are monotone under later moves
    /// (cells only gain occupants via covers, and splits duplicate them), so
    /// rejecting here prunes soundly and accepting never needs revisiting.
    fn admit(&mut self, cand: &St, vb: Mask, placed_prev: Mask) -> bool {
        self.admits += 1;
        let total: usize = self.ctx.host.n() + cand.edges.iter().map(|e| e.k()).sum::<usize>();
        if total > self.ctx.cap_total {
            if self.total_cap_relevant {
                self.limited = true;
            }
            return false;
        }
        if self.ctx.mode != RepMode::Any {
            // u ⊂ v is permanent (and fatal) the moment it appears, since a
            // placed vertex's footprint pattern never changes relative to
            // another's. Equality is fine: mutual containment is not proper
            // containment.
            let mut without_v: Mask = 0;
            let mut and_v: Mask = !0;
            for &m in cand.nodes.iter() {
                if m & vb != 0 {
                    and_v &= m;
                } else {
                    without_v |= m;
                }
            }
            for est in &cand.edges {
                for &m in &est.cells {
                    if m & vb != 0 {
                        and_v &= m;
                    } else {
                        without_v |= m;
                    }
                }
            }
            let sub = placed_prev & !without_v; // u with every piece inside v
            let sup = placed_prev & and_v; // u covering every piece of v
            if sub ^ sup != 0 {
                return false;
            }
        }
        if self.ctx.mode == RepMode::ProperHelly {
            // The intersection pattern of placed vertices is permanent, so a
            // clique whose placed members share no node is already dead —
            // check every clique v belongs to as soon as it has two placed
            // members, not just when it completes.
            let placed_now = placed_prev | vb;
            for &cl in &self.ctx.cliques {
                if cl & vb == 0 {
                    continue;
                }
                let need = cl & placed_now;
                if need.count_ones() < 2 {
                    continue;
                }
                let mut ok = cand.nodes.iter().any(|&m| m & need == need);
                if !ok {
                    ok = cand
                        .edges
                        .iter()
                        .any(|est| est.cells.iter().any(|&m| m & need == need));
                }
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Deduplicate and hand the candidate to the continuation. The memo key
    /// is the minimum encoding over all host automorphisms combined with all
    /// prefix-fixing graph automorphisms, so states that differ only by a
    /// symmetry — of the host or of the graph — collapse into one. `count`
    /// is how many vertices the candidate has placed.
    fn push_candidate(
        &mut self,
        cand: St,
        count: usize,
        f: &mut dyn FnMut(&mut Self, St) -> bool,
    ) -> bool {
        self.pushes += 1;
        let open = self.ctx.open_by_count[count];
        let bbit = self.ctx.blocked_bit;
        let mut key = encode(&cand, self.ctx.mask_w, open, bbit);
        let stab = &self.ctx.stab_by_count[count];
        for (hi, hperm) in self.ctx.autos.iter().enumerate() {
            for (gi, gperm) in stab.iter().enumerate() {
                if hi == 0 && gi == 0 {
                    continue; // both identity: that is `key` itself
                }
                let alt = encode_permuted(
                    &cand,
                    hperm,
                    Some(gperm),
                    &self.ctx.base_edges,
                    self.ctx.mask_w,
                    open,
                    bbit,
                );
                if alt < key {
                    key = alt;
                }
            }
        }
        if self.memo.contains(&key) {
            self.hits += 1;
            return false;
        }
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(key);
        }
        f(self, cand)
    }

    /// Span-0 boundaries in the absolute range `lo..=hi`, as a bitmask:
    /// every place a fresh cell may legally go within that stretch.
    fn open_mask(old: &EdgeSt, lo: usize, hi: usize) -> u64 {
        let mut m = 0u64;
        for (b, &s) in old.span.iter().enumerate().take(hi + 1).skip(lo) {
            if s == 0 {
                m |= 1 << b;
            }
        }
        m
    }

    /// Floater menu for one edge: trace lives strictly on the interior.
    fn float_menu(&mut self, old: &EdgeSt, allowed: Mask) -> Vec<EdgeChoice> {
        let k = old.k();
        let cap = self.ctx.cap_edge;
        let max_fresh = self.max_fresh;
        let ok: Vec<bool> = old.cells.iter().map(|&c| c & !allowed == 0).collect();
        let mut out = Vec::new();
        let mut cap_hit = false;

        for i in 0..k {
            if ok[i] {
                if k + 2 > cap {
                    cap_hit = true;
                } else {
                    out.push(EdgeChoice {
                        mv: EdgeMv::Mid { i: i as u8 },
                        touched: old.cells[i],
                        connects: false,
                        adds: 2,
                    });
                }
            }
        }
        // Contiguous coverage of cells s..e, with optional splits into the
        // flanking cells and any set of fresh cells at open boundaries of
        // the covered stretch (including its two ends).
        for s in 0..=k {
            let mut e = s;
            loop {
                let mut range_touch: Mask = 0;
                for i in s..e {
                    range_touch |= old.cells[i];
                }
                for sl in [false, true] {
                    if sl && (s == 0 || !ok[s - 1]) {
                        continue;
                    }
                    for sr in [false, true] {
                        if sr && (e == k || !ok[e]) {
                            continue;
                        }
                        let touched = range_touch
                            | if sl { old.cells[s - 1] } else { 0 }
                            | if sr { old.cells[e] } else { 0 };
                        let open = Self::open_mask(old, s, e);
                        let base_adds = sl as usize + sr as usize;
                        let stop = for_each_fresh(open, max_fresh, &mut |f| {
                            if s == e && !sl && !sr && f == 0 {
                                return false; // empty trace
                            }
                            let adds = base_adds + f.count_ones() as usize;
                            if k + adds > cap {
                                cap_hit = true;
                                return false;
                            }
                            out.push(EdgeChoice {
                                mv: EdgeMv::Float {
                                    s: s as u8,
                                    e: e as u8,
                                    sl,
                                    sr,
                                    fresh: f,
                                },
                                touched,
                                connects: false,
                                adds: adds as u8,
                            });
                            false
                        });
                        debug_assert!(!stop);
                    }
                }
                if e == k || !ok[e] {
                    break;
                }
                e += 1;
            }
        }
        if cap_hit && self.ctx.cap_edge < self.ctx.collapse_bound {
            self.limited = true;
        }
        out.sort_by_key(|ch| ch.adds);
        out
    }

    /// Menu for an edge with exactly one endpoint anchored: extents from
    /// that side. The empty trace is handled by the assembly loop.
    fn reach_menu(&mut self, old: &EdgeSt, allowed: Mask, from_a: bool) -> Vec<EdgeChoice> {
        let k = old.k();
        let cap = self.ctx.cap_edge;
        let max_fresh = self.max_fresh;
        let ok: Vec<bool> = old.cells.iter().map(|&c| c & !allowed == 0).collect();
        let mut out = Vec::new();
        let mut cap_hit = false;
        // `cell(t)` = t-th cell from the anchored side; boundaries after t
        // cells from that side run `bnd(t)..=bnd(0)` or reversed.
        let cell = |t: usize| if from_a { t } else { k - 1 - t };
        let bnd = |t: usize| if from_a { t } else { k - t };
        let mut touched: Mask = 0;
        for t in 0..=k {
            if t > 0 {
                if !ok[cell(t - 1)] {
                    break;
                }
                touched |= old.cells[cell(t - 1)];
            }
            let split_ok = t < k && ok[cell(t)];
            let (blo, bhi) = if from_a { (0, t) } else { (bnd(t), k) };
            let open = Self::open_mask(old, blo, bhi);
            for split in [false, true] {
                if split && !split_ok {
                    continue;
                }
                let t_touch = touched | if split { old.cells[cell(t)] } else { 0 };
                let stop = for_each_fresh(open, max_fresh, &mut |f| {
                    if t == 0 && !split && f == 0 {
                        return false; // empty trace == the None option
                    }
                    let adds = split as usize + f.count_ones() as usize;
                    if k + adds > cap {
                        cap_hit = true;
                        return false;
                    }
                    out.push(EdgeChoice {
                        mv: EdgeMv::Reach {
                            from_a,
                            t: t as u8,
                            split,
                            fresh: f,
                        },
                        touched: t_touch,
                        connects: false,
                        adds: adds as u8,
                    });
                    false
                });
                debug_assert!(!stop);
            }
        }
        if cap_hit && self.ctx.cap_edge < self.ctx.collapse_bound {
            self.limited = true;
        }
        out.sort_by_key(|ch| ch.adds);
        out
    }

    /// Menu for an edge with both endpoints anchored: full crossings and
    /// two-armed wraps. Again the empty trace is implicit.
    fn both_menu(&mut self, old: &EdgeSt, allowed: Mask) -> Vec<EdgeChoice> {
        let k = old.k();
        let cap = self.ctx.cap_edge;
        let max_fresh = self.max_fresh;
        let ok: Vec<bool> = old.cells.iter().map(|&c| c & !allowed == 0).collect();
        let mut out = Vec::new();
        let mut cap_hit = false;

        // Full: cover everything and cross every boundary, welding the two
        // base endpoints together. On a bare edge this is the declaration
        // that the model relies on the direct base adjacency — nothing may
        // be inserted there afterwards.
        if ok.iter().all(|&o| o) {
            let all_touch = old.cells.iter().fold(0, |m, &c| m | c);
            let open = Self::open_mask(old, 0, k);
            let stop = for_each_fresh(open, max_fresh, &mut |f| {
                if k + f.count_ones() as usize > cap {
                    cap_hit = true;
                    return false;
                }
                out.push(EdgeChoice {
                    mv: EdgeMv::Full { fresh: f },
                    touched: all_touch,
                    connects: true,
                    adds: f.count_ones() as u8,
                });
                false
            });
            debug_assert!(!stop);
        }
        // Wraps: ta cells from the low side, tb from the high side. gap == 0
        // covers everything but keeps two pieces (enumerating where the
        // break falls); splits eat into the gap and need gap ≥ 1.
        if k > 0 {
            let mut pre_touch: Vec<Mask> = Vec::with_capacity(k + 1);
            pre_touch.push(0);
            for (t, o) in (1..=k).zip(ok.iter()) {
                if !*o {
                    break;
                }
                pre_touch.push(pre_touch[t - 1] | old.cells[t - 1]);
            }
            let mut suf_touch: Vec<Mask> = Vec::with_capacity(k + 1);
            suf_touch.push(0);
            for t in 1..=k {
                if !ok[k - t] {
                    break;
                }
                suf_touch.push(suf_touch[t - 1] | old.cells[k - t]);
            }
            for ta in 0..pre_touch.len() {
                for tb in 0..suf_touch.len() {
                    if ta + tb > k {
                        break;
                    }
                    let gap = k - ta - tb;
                    for (sa, sb) in [(false, false), (true, false), (false, true), (true, true)] {
                        if (sa || sb) && gap == 0 {
                            continue;
                        }
                        if sa && !ok[ta] {
                            continue;
                        }
                        if sb && !ok[k - 1 - tb] {
                            continue;
                        }
                        let base_touch = pre_touch[ta]
                            | suf_touch[tb]
                            | if sa { old.cells[ta] } else { 0 }
                            | if sb { old.cells[k - 1 - tb] } else { 0 };
                        let splits = if sa && sb && gap == 1 {
                            2 // one InvMid cell becomes three
                        } else {
                            sa as usize + sb as usize
                        };
                        // Fresh cells may sit anywhere open on either arm;
                        // the break boundary of a gapless wrap is excluded —
                        // a cell there would weld the arms into a Full.
                        let mut open = Self::open_mask(old, 0, ta) | Self::open_mask(old, k - tb, k);
                        if gap == 0 {
                            open &= !(1u64 << ta);
                        }
                        let stop = for_each_fresh(open, max_fresh, &mut |f| {
                            if !sa && !sb && ta == 0 && tb == 0 && f == 0 {
                                return false; // empty trace
                            }
                            if k + splits + f.count_ones() as usize > cap {
                                cap_hit = true;
                                return false;
                            }
                            out.push(EdgeChoice {
                                mv: EdgeMv::Wrap {
                                    ta: ta as u8,
                                    sa,
                                    tb: tb as u8,
                                    sb,
                                    fresh: f,
                                },
                                touched: base_touch,
                                connects: false,
                                adds: (splits + f.count_ones() as usize) as u8,
                            });
                            false
                        });
                        debug_assert!(!stop);
                    }
                }
            }
        }
        if cap_hit && self.ctx.cap_edge < self.ctx.collapse_bound {
            self.limited = true;
        }
        out.sort_by_key(|ch| ch.adds);
        out
    }
}

/// Turn a finished state into a concrete representation: each cell becomes
/// one subdivision node, in order.
fn materialize(ctx: &Ctx, st: &St) -> Representation {
    let counts: Vec<usize> = st.edges.iter().map(|e| e.k()).collect();
    let sub = ctx
        .host
        .subdivide(&counts)
        .expect("count vector is parallel to the edge list");
    let n = ctx.g.n();
    let mut model: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &m) in st.nodes.iter().enumerate() {
        let mut mm = m;
        while mm != 0 {
            let v = mm.trailing_zeros() as usize;
            mm &= mm - 1;
            model[v].push(i);
        }
    }
    for (e, est) in st.edges.iter().enumerate() {
        let interior = sub.edge_interior(e);
        debug_assert_eq!(interior.len(), est.k());
        for (j, &m) in est.cells.iter().enumerate() {
            let mut mm = m;
            while mm != 0 {
                let v = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                model[v].push(interior[j]);
            }
        }
    }
    for nodes in &mut model {
        nodes.sort_unstable();
    }
    Representation { host: sub, model }
}

/// Partition the vertices into classes of equal closed neighbourhood
/// ("true twins"), each class listed ascending, classes ordered by their
/// smallest member.
fn twin_classes(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut classes: Vec<(crate::graph::VertexSet, Vec<usize>)> = Vec::new();
    for v in 0..g.n() {
        let key = g.closed_neighbors(v);
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(v),
            None => classes.push((key, vec![v])),
        }
    }
    classes.into_iter().map(|(_, m)| m).collect()
}

/// Relocate a single-edge witness into the interior of the first edge of
/// `host`. Node-for-node: the two segment endpoints become that edge's
/// endpoints, interior nodes map across in order.
fn transplant_to_edge(rep: Representation, host: &HostGraph, g: &SimpleGraph) -> Representation {
    let k = rep.host.counts()[0];
    let mut counts = vec![0; host.edges().len()];
    counts[0] = k;
    let sub = host
        .subdivide(&counts)
        .expect("count vector built from the host's own edge list");
    let (a, b) = sub.base_edges()[0];
    let mut map = vec![0usize; rep.host.total_nodes()];
    map[0] = a;
    map[1] = b;
    for (src, dst) in rep.host.edge_interior(0).into_iter().zip(sub.edge_interior(0)) {
        map[src] = dst;
    }
    let model = rep
        .model
        .into_iter()
        .map(|nodes| {
            let mut out: Vec<usize> = nodes.into_iter().map(|i| map[i]).collect();
            out.sort_unstable();
            out
        })
        .collect();
    let out = Representation { host: sub, model };
    let verdict = out.verify(g).expect("transplant keeps the model well-formed");
    assert!(verdict.is_intersection_model, "transplant broke the model");
    out
}

/// Decide whether some subdivision of `host` carries an intersection model
/// of `g` by connected subgraphs, subject to `mode`, within `budget`.
///
/// Exhaustive whenever the budget admits `2·|G| + 1` subdivision nodes per
/// edge; a `No` then carries no bound. Every returned witness has been run
/// back through [`Representation::verify`], so a `Yes` is self-checking.
pub fn search_representation(
    g: &SimpleGraph,
    host: &HostGraph,
    mode: RepMode,
    budget: &SearchBudget,
) -> Result<OracleAnswer<Representation>, OracleError> {
    budget.validate()?;
    if g.n() > ENGINE_MAX_N {
        return Err(OracleError::TooLarge {
            n: g.n(),
            limit: ENGINE_MAX_N,
        });
    }

    // True twins (equal closed neighbourhoods) may share one model: copying
    // a twin's footprint changes no intersection, equal footprints are
    // mutual rather than proper containment, and a duplicated family keeps
    // its clique witness nodes. Conversely dropping models realises any
    // induced subgraph. So the quotient is equivalent and often far smaller.
    let classes = twin_classes(g);
    if classes.len() < g.n() {
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let mut q_edges = Vec::new();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if g.has_edge(reps[i], reps[j]) {
                    q_edges.push((i, j));
                }
            }
        }
        let q = SimpleGraph::from_edges(reps.len(), &q_edges).expect("quotient edges in range");
        return Ok(match search_representation(&q, host, mode, budget)? {
            OracleAnswer::Yes(rep) => {
                let mut model: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
                for (i, class) in classes.iter().enumerate() {
                    for &v in class {
                        model[v] = rep.model[i].clone();
                    }
                }
                let out = Representation {
                    host: rep.host,
                    model,
                };
                let verdict = out.verify(g).expect("twin expansion is well-formed");
                assert!(verdict.is_intersection_model, "twin expansion broke the model");
                OracleAnswer::Yes(out)
            }
            other => other,
        });
    }

    // A witness on a bare segment transplants into any one host edge —
    // everything checked lives on the model family, not the host — and the
    // segment search is orders of magnitude cheaper. Worth a quick shot
    // before the full machinery; a refusal or timeout here proves nothing
    // and just falls through.
    if host.n() > 2 && g.n() > 0 {
        let segment = HostGraph::from_description("K2").expect("segment host");
        let slice = budget.clone().with_time_limit(
            (budget.time_limit / 8).clamp(Duration::from_millis(1), Duration::from_secs(5)),
        );
        if let OracleAnswer::Yes(rep) = search_core(g, &segment, mode, &slice)? {
            return Ok(OracleAnswer::Yes(transplant_to_edge(rep, host, g)));
        }
    }

    search_core(g, host, mode, budget)
}

fn search_core(
    g: &SimpleGraph,
    host: &HostGraph,
    mode: RepMode,
    budget: &SearchBudget,
) -> Result<OracleAnswer<Representation>, OracleError> {
    let ctx = Ctx::new(g, host, mode, budget);
    let exhaustive_total = host.n() + ctx.base_edges.len() * ctx.collapse_bound;
    let total_cap_relevant = ctx.cap_total < exhaustive_total;
    let cap_edge = ctx.cap_edge;
    let collapse_bound = ctx.collapse_bound;
    let mut search = Search {
        ctx,
        memo: HashSet::new(),
        tick: 0,
        pushes: 0,
        hits: 0,
        admits: 0,
        timed_out: false,
        limited: false,
        total_cap_relevant,
        max_fresh: u32::MAX,
    };

    let st0 = St {
        nodes: vec![0; search.ctx.host.n()],
        edges: vec![EdgeSt::empty(); search.ctx.base_edges.len()],
    };
    if g.n() == 0 {
        let rep = materialize(&search.ctx, &st0);
        return Ok(OracleAnswer::Yes(rep));
    }

    // Collect the first placements (the memo key is automorphism-canonical,
    // so each orbit under the host's symmetry group shows up once), then
    // explore each by plain DFS with duplicate suppression.
    let mut firsts: Vec<St> = Vec::new();
    search.enum_placements(&st0, 0, &mut |_, cand| {
        firsts.push(cand);
        false
    });

    let mut witness = None;
    for st in firsts {
        if let Some(w) = search.dfs(&st, 1) {
            witness = Some(w);
            break;
        }
        if search.timed_out {
            break;
        }
    }

    if std::env::var_os("UG_ENGINE_STATS").is_some() {
        eprintln!(
            "stats: pushes={} hits={} admits={} memo={} found={}",
            search.pushes,
            search.hits,
            search.admits,
            search.memo.len(),
            witness.is_some(),
        );
    }

    match witness {
        Some(st) => {
            let rep = materialize(&search.ctx, &st);
            let verdict = rep.verify(g).expect("engine output must be well-formed");
            assert!(
                verdict.is_intersection_model,
                "engine produced a non-model for mode {mode:?}"
            );
            if mode != RepMode::Any {
                assert!(verdict.is_proper, "engine produced an improper model");
            }
            if mode == RepMode::ProperHelly {
                assert!(verdict.is_helly(), "engine produced a non-Helly model");
            }
            Ok(OracleAnswer::Yes(rep))
        }
        None if search.timed_out => Ok(OracleAnswer::Unknown),
        None => {
            let unconditional = cap_edge >= collapse_bound && !search.limited;
            Ok(OracleAnswer::No {
                subdivision_bound: if unconditional { None } else { Some(cap_edge) },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::host::HostGraph;
    use std::time::Duration;

    fn host(desc: &str) -> HostGraph {
        HostGraph::from_description(desc).unwrap()
    }

    fn ask(g: &SimpleGraph, h: &HostGraph, mode: RepMode) -> OracleAnswer<Representation> {
        let budget = SearchBudget::exhaustive_for(g);
        search_representation(g, h, mode, &budget).unwrap()
    }

    #[test]
    fn apply_edge_bookkeeping() {
        // Mid split of a single cell: occupants duplicate, spans record the
        // old occupants crossing the two new internal boundaries.
        let e = EdgeSt {
            cells: vec![0b01],
            span: vec![0, 0],
        };
        let r = apply_mv(&e, EdgeMv::Mid { i: 0 }, 0b10, false, false);
        assert_eq!(r.cells, vec![0b01, 0b11, 0b01]);
        assert_eq!(r.span, vec![0, 0b01, 0b01, 0]);

        // Gapless wrap: covers both cells but stays in two pieces; the break
        // boundary keeps its old span.
        let e2 = EdgeSt {
            cells: vec![0b01, 0b01],
            span: vec![0, 0b01, 0],
        };
        let r2 = apply_mv(
            &e2,
            EdgeMv::Wrap {
                ta: 1,
                sa: false,
                tb: 1,
                sb: false,
                fresh: 0,
            },
            0b10,
            true,
            true,
        );
        assert_eq!(r2.cells, vec![0b11, 0b11]);
        assert_eq!(r2.span, vec![0b10, 0b01, 0b10]);

        // Full on a bare edge records the crossing of the base-base junction.
        let bare = EdgeSt::empty();
        let r3 = apply_mv(&bare, EdgeMv::Full { fresh: 0 }, 0b1, true, true);
        assert_eq!(r3.cells, Vec::<Mask>::new());
        assert_eq!(r3.span, vec![0b1]);
    }

    #[test]
    fn k3_host_automorphisms() {
        // Plain triangle: full S3.
        assert_eq!(base_host_automorphisms(&host("K3")).len(), 6);
        // C4 with one pendant leg: only the reflection fixing the leg.
        assert_eq!(base_host_automorphisms(&host("C4+pendant(0)")).len(), 2);
    }

    #[test]
    fn paths_and_cycles_on_the_segment() {
        let p4 = SimpleGraph::path(4);
        let k2 = host("K2");
        assert!(ask(&p4, &k2, RepMode::Any).is_yes());
        assert!(ask(&p4, &k2, RepMode::Proper).is_yes());
        // C4 is not an interval graph: unconditional refusal.
        let c4 = SimpleGraph::cycle(4);
        assert_eq!(
            ask(&c4, &k2, RepMode::Any).map_unit(),
            OracleAnswer::No {
                subdivision_bound: None
            }
        );
    }

    #[test]
    fn cycles_on_the_circle() {
        let k3 = host("K3");
        for len in [4usize, 5, 6] {
            let c = SimpleGraph::cycle(len);
            assert!(ask(&c, &k3, RepMode::Proper).is_yes(), "C{len} proper on circle");
        }
        // C4 = the n=0 reduction gadget (K4 minus a perfect matching): the
        // base case of the hardness construction, and Helly besides — its
        // maximal cliques are edges, which meet in a node trivially.
        let c4 = SimpleGraph::cycle(4);
        assert!(ask(&c4, &k3, RepMode::ProperHelly).is_yes());
    }

    #[test]
    fn claw_needs_a_branching_node_for_properness() {
        // K1,3: interval, but famously not proper interval.
        let claw = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let k2 = host("K2");
        assert!(ask(&claw, &k2, RepMode::Any).is_yes());
        assert_eq!(
            ask(&claw, &k2, RepMode::Proper).map_unit(),
            OracleAnswer::No {
                subdivision_bound: None
            }
        );
        // On a spider with three legs the proper model exists.
        let spider = host("spider(1,1,1)");
        assert!(ask(&claw, &spider, RepMode::Proper).is_yes());
    }

    #[test]
    fn net_is_not_proper_circular_arc() {
        // Triangle with a pendant at each corner: representable with arcs,
        // but every arc model nests a pendant inside its triangle vertex.
        let net = SimpleGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let k3 = host("K3");
        assert!(ask(&net, &k3, RepMode::Any).is_yes());
        assert_eq!(
            ask(&net, &k3, RepMode::Proper).map_unit(),
            OracleAnswer::No {
                subdivision_bound: None
            }
        );
    }

    #[test]
    fn long_hole_fits_past_a_pendant() {
        // C7 on the unicyclic host C4 + pendant: the hole lives on the
        // circle, however finely it must subdivide.
        let c7 = SimpleGraph::cycle(7);
        let h = host("C4+pendant(0)");
        assert!(ask(&c7, &h, RepMode::Proper).is_yes());
        assert!(ask(&c7, &host("K2"), RepMode::Proper).is_no());
    }

    #[test]
    fn disconnected_graphs_place_per_component() {
        let two_k2 = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let k2 = host("K2");
        assert!(ask(&two_k2, &k2, RepMode::Proper).is_yes());
        let k1 = SimpleGraph::empty(1).unwrap();
        assert!(ask(&k1, &k2, RepMode::ProperHelly).is_yes());
    }

    #[test]
    fn witness_flags_match_the_mode() {
        let k4 = SimpleGraph::complete(4);
        let k3 = host("K3");
        match ask(&k4, &k3, RepMode::ProperHelly) {
            OracleAnswer::Yes(rep) => {
                let v = rep.verify(&k4).unwrap();
                assert!(v.is_intersection_model && v.is_proper && v.is_helly());
            }
            other => panic!("K4 should be proper Helly circular-arc, got {other:?}"),
        }
    }

    #[test]
    fn tight_deadline_reports_unknown() {
        let net = SimpleGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let budget = SearchBudget::exhaustive_for(&net).with_time_limit(Duration::from_nanos(1));
        let ans = search_representation(&net, &host("K3"), RepMode::Proper, &budget).unwrap();
        assert_eq!(ans.map_unit(), OracleAnswer::Unknown);
    }

    #[test]
    fn starved_cell_budget_qualifies_the_refusal() {
        // One cell per edge is far below the collapsing bound, so a refusal
        // must say which bound it searched.
        let net = SimpleGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap();
        let budget = SearchBudget {
            max_subdivision_per_edge: 1,
            max_nodes_total: 1000,
            time_limit: Duration::from_secs(600),
        };
        match search_representation(&net, &host("K2"), RepMode::Proper, &budget).unwrap() {
            OracleAnswer::No { subdivision_bound } => assert_eq!(subdivision_bound, Some(1)),
            other => panic!("expected a bounded refusal, got {other:?}"),
        }
    }

    #[test]
    fn zero_budget_is_rejected() {
        let g = SimpleGraph::complete(2);
        let budget = SearchBudget {
            max_subdivision_per_edge: 0,
            max_nodes_total: 10,
            time_limit: Duration::from_secs(1),
        };
        assert!(search_representation(&g, &host("K2"), RepMode::Any, &budget).is_err());
    }

    fn has_induced_claw(g: &SimpleGraph) -> bool {
        (0..g.n()).any(|v| {
            let nb = g.neighbors(v).to_vec();
            (0..nb.len()).any(|i| {
                (i + 1..nb.len()).any(|j| {
                    (j + 1..nb.len()).any(|l| {
                        !g.has_edge(nb[i], nb[j])
                            && !g.has_edge(nb[i], nb[l])
                            && !g.has_edge(nb[j], nb[l])
                    })
                })
            })
        })
    }

    #[test]
    fn segment_catalogue_agrees_with_the_classics() {
        // Two classical facts pin the engine down on the segment host. A
        // proper interval graph is exactly a claw-free interval graph
        // (Roberts), and intervals on a line satisfy the Helly property for
        // free, so the Helly flavour asks nothing extra. Sweep the whole
        // small catalogue against both readings.
        let k2 = host("K2");
        for n in 1..=6 {
            for g in crate::enumerate::connected_graphs(n) {
                let any = ask(&g, &k2, RepMode::Any).is_yes();
                let proper = ask(&g, &k2, RepMode::Proper).is_yes();
                let helly = ask(&g, &k2, RepMode::ProperHelly).is_yes();
                assert_eq!(
                    proper,
                    any && !has_induced_claw(&g),
                    "proper-interval mismatch on {:?}",
                    g.edges()
                );
                assert_eq!(helly, proper, "Helly is free on a segment: {:?}", g.edges());
            }
        }
    }
}
