//! Recognition, representation and isomorphism testing for proper U-graphs:
//! intersection graphs of connected subgraphs of subdivisions of a fixed
//! unicyclic graph U.
//!
//! The crate has three layers.
//!
//! * A brute-force oracle (`oracle`) that decides membership by exhaustive
//!   search over representations on a subdivided host, used as ground truth
//!   in differential tests and for small inputs.
//! * Structural recognizers (`recognize`) implementing the decision
//!   procedures: chordal/tree routes, the branching-clique assignment search,
//!   and the Helly and general variants.
//! * Reduction generators (`reductions`) for the hardness side: hypergraph
//!   2-coloring gadgets and the isomorphism-completeness construction.
//!
//! Hosts, concrete representations and their verifier live in `host` and
//! `rep`; `enumerate` produces small-graph corpora for the test gates.

pub mod enumerate;
pub mod graph;
pub mod host;
pub mod oracle;
pub mod rep;

pub use graph::{GraphError, SimpleGraph, Vertex, VertexSet};
pub use host::{HostGraph, HostKind, SubdividedHost};
pub use rep::{RepError, Representation, RepresentationVerdict};
