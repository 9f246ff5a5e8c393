//! Brute-force ground truth.
//!
//! Everything in here is deliberately dumb and slow: exhaustive search over
//! collapsed representations, backtracking isomorphism, exhaustive hypergraph
//! 2-coloring. The point is to have answers we can trust on small inputs, so
//! the clever polynomial-time code elsewhere in the crate can be tested
//! against something that is obviously correct rather than merely plausible.
//!
//! The representation search ([`search_representation`]) is the workhorse. It
//! decides, for a graph `G` and a host `U`, whether some subdivision of `U`
//! admits an intersection model of `G` by connected subgraphs — optionally
//! proper, optionally proper and Helly. Completeness rests on a collapsing
//! argument (see `engine`): any representation can be normalised so that no
//! edge of `U` carries more than `2·|G| + 1` subdivision nodes, so a search
//! capped there is exact, not heuristic. Callers who set a smaller cap get a
//! `No` qualified by the bound that was actually searched.

mod color2;
mod engine;
mod sat;
mod iso;

pub use color2::{hypergraph_2coloring, Hypergraph};
pub use engine::{base_host_automorphisms, search_representation};
pub use iso::brute_isomorphism;
pub use sat::search_representation_sat;

use std::time::Duration;

use crate::graph::SimpleGraph;

/// What the searched-for model has to satisfy, from weakest to strongest.
///
/// `Proper` forbids one model properly containing another (two vertices may
/// share an identical footprint — that is mutual containment, not proper).
/// `ProperHelly` additionally demands that the models of every maximal clique
/// share a common host node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepMode {
    Any,
    Proper,
    ProperHelly,
}

/// Resource limits for a brute-force search.
#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Cap on subdivision nodes carried by a single host edge.
    pub max_subdivision_per_edge: usize,
    /// Cap on total host nodes (base plus all subdivision nodes).
    pub max_nodes_total: usize,
    /// Wall-clock limit; exceeding it yields `Unknown`, never a bogus `No`.
    pub time_limit: Duration,
}

impl SearchBudget {
    /// A budget large enough that the search is exact for `g`: the per-edge
    /// cap is the collapsing bound `2·|G| + 1`, and the node total is
    /// whatever the host plus fully loaded edges would need. Time limit is
    /// effectively unbounded; use [`Self::with_time_limit`] to impose one.
    pub fn exhaustive_for(g: &SimpleGraph) -> Self {
        let per_edge = 2 * g.n() + 1;
        SearchBudget {
            max_subdivision_per_edge: per_edge,
            // 32 base nodes is far beyond any host we search; the real
            // constraint is per-edge.
            max_nodes_total: 32 + 32 * per_edge,
            time_limit: Duration::from_secs(7 * 24 * 3600),
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }

    /// All fields must be positive. A zero cap would silently answer `No` to
    /// everything, which is the kind of bug that wastes an afternoon.
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_subdivision_per_edge == 0 {
            return Err(OracleError::BadBudget("max_subdivision_per_edge is 0"));
        }
        if self.max_nodes_total == 0 {
            return Err(OracleError::BadBudget("max_nodes_total is 0"));
        }
        if self.time_limit.is_zero() {
            return Err(OracleError::BadBudget("time_limit is zero"));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid search budget: {0}")]
    BadBudget(&'static str),
    #[error("graph too large for brute-force search: {n} vertices (limit {limit})")]
    TooLarge { n: usize, limit: usize },
}

/// Three-valued answer of a budgeted search.
///
/// `No` records the per-edge subdivision bound under which the refusal is
/// known to be exhaustive: `Some(b)` means "no representation with at most
/// `b` subdivision nodes per edge"; when `b` is at least the collapsing bound
/// for the instance this is an unconditional no. `Unknown` means the budget
/// ran out before the search space did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer<W> {
    Yes(W),
    No { subdivision_bound: Option<usize> },
    Unknown,
}

impl<W> OracleAnswer<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleAnswer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OracleAnswer::No { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            OracleAnswer::Yes(w) => Some(w),
            _ => None,
        }
    }

    /// Forget the witness; handy when comparing answers across runs.
    pub fn map_unit(&self) -> OracleAnswer<()> {
        match self {
            OracleAnswer::Yes(_) => OracleAnswer::Yes(()),
            OracleAnswer::No { subdivision_bound } => OracleAnswer::No {
                subdivision_bound: *subdivision_bound,
            },
            OracleAnswer::Unknown => OracleAnswer::Unknown,
        }
    }
}
