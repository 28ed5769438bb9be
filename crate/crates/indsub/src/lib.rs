//! Exact counting of homomorphisms, embeddings and (induced) subgraphs —
//! plain, color-prescribed and property-restricted — together with the
//! machinery needed to verify the algebraic identities that connect them:
//! alternating enumerators over edge subsets, permutation-group orbits,
//! explicit Sylow subgroups of symmetric groups, and oracle-reduction
//! pipelines that recover clique counts from simulated induced-subgraph
//! counting oracles, in exact or mod-p arithmetic.
//!
//! Everything here runs at "desk scale": graphs are capped at 64 vertices,
//! subset enumerations at 2^24 masks by default, and all randomized checks
//! are driven by explicit seeds so that every run is reproducible.

pub mod arith;
pub mod canon;
pub mod chi;
pub mod counting;
pub mod gen;
pub mod graph;
pub mod io;
pub mod perm;
pub mod properties;
pub mod reductions;
pub mod verify;

pub use canon::CanonicalForm;
pub use counting::{ColoredGraph, CountMode, CountResult};
pub use graph::{EdgeSubset, Graph};
pub use perm::{GeneratedGroup, Permutation};
pub use properties::Property;

/// Hard and default limits. "Default" caps can be raised by the explicit
/// `*_with` variants of the corresponding operations; hard caps cannot.
pub mod caps {
    /// Hard cap on vertices: adjacency rows are single 64-bit words.
    pub const MAX_VERTICES: usize = 64;
    /// Hard cap for canonical forms: the adjacency encoding must fit u128.
    pub const CANONICAL_MAX_VERTICES: usize = 16;
    /// Default vertex cap for automorphism/isomorphism searches.
    pub const DEFAULT_AUTOMORPHISM_VERTEX_CAP: usize = 12;
    /// Default cap on the number of listed automorphisms / group elements.
    pub const DEFAULT_GROUP_ORDER_CAP: usize = 200_000;
    /// Default cap on |E(H)| for full edge-subset enumerations.
    pub const DEFAULT_SUBSET_EDGE_CAP: usize = 24;
    /// Hard cap on |E(H)| for bitmask-based subset enumeration.
    pub const MAX_SUBSET_EDGE_CAP: usize = 62;
    /// Default cap on pattern vertices for homomorphism-style counters.
    pub const DEFAULT_PATTERN_VERTEX_CAP: usize = 8;
    /// Default cap on the degree p^k of the explicit Sylow construction.
    pub const DEFAULT_SYLOW_DEGREE_CAP: usize = 32;
    /// Default budget on C(n,k) for induced-subgraph enumeration.
    pub const DEFAULT_ENUM_BUDGET: u128 = 2_000_000_000;
    /// Default cap on |E(H)| for the 2^|E| x 2^|E| evaluation matrix.
    pub const DEFAULT_MATRIX_EDGE_CAP: usize = 8;
}

/// Errors shared across the crate.
///
/// `Invariant` is reserved for "this cannot happen if the implementation is
/// correct" situations (e.g. an inexact division by an automorphism count);
/// the command-line front end maps it to a distinct exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("loop edge ({0},{0})")]
    LoopEdge(u32),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(u32, u32),
    #[error("edge endpoint {endpoint} out of range for {n} vertices")]
    EndpointOutOfRange { endpoint: u32, n: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge subset width {width} does not match edge count {edges}")]
    MaskWidthMismatch { width: usize, edges: usize },
    #[error("{what} cap exceeded: {actual} > {cap}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },
    #[error("enumeration budget exceeded: C({n},{k}) = {combinations} > {budget}")]
    BudgetExceeded {
        n: usize,
        k: usize,
        combinations: u128,
        budget: u128,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("permutation degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("coloring is not a homomorphism: host edge ({u},{v}) maps to non-edge ({cu},{cv})")]
    NotAColoring { u: u32, v: u32, cu: u32, cv: u32 },
    #[error("colored graphs have different patterns")]
    PatternMismatch,
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("property table has {got} entries, expected {expected}")]
    TableSizeMismatch { expected: usize, got: usize },
    #[error("property table is not isomorphism-invariant: masks {a:#b} and {b:#b} induce isomorphic graphs but disagree")]
    TableNotInvariant { a: u64, b: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invariant breach: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
