//! Gadget constructions and algebraic transfers: the homomorphism-counting
//! gadget, the color-prescribed tensor product, the evaluation matrix and
//! its triangular solver, the coefficient expansion of property-restricted
//! color-prescribed induced-subgraph counts, decoloring by
//! inclusion-exclusion, the parsimonious biclique gadget for cliques,
//! padding, random vertex isolation, and the end-to-end oracle pipelines
//! built from these pieces.

mod classify;
mod coefficients;
mod decolor;
mod gadgets;
mod matrix;
mod pipeline;
mod solve;

pub use classify::{classify_p_edge_transitive, nonisomorphic_graphs, CandidateRecord, ClassifyReport};
pub use coefficients::{cp_indsub_coefficients, LinearCombination};
pub use decolor::{decolor_count, DecolorOutcome};
pub use gadgets::{clique_gadget, hom_gadget, pad_clique, random_isolation, tensor};
pub use matrix::{cp_hom_matrix, cp_hom_matrix_with_cap, CpHomMatrix};
pub use pipeline::{
    pipeline_clique_decision, pipeline_exact, CliqueDecisionOutcome, PipelineExactOutcome,
    PipelineOptions, PipelineTranscript, StageRecord,
};
pub use solve::{
    monotonicity_solve, monotonicity_solve_with_matrix, CpIndSubOracle, RecoveredTerms, TermStatus,
};

use serde::Serialize;

/// One simulated oracle query: the query graph's vertex count, the size
/// parameter, and the oracle's response.
#[derive(Clone, Debug, Serialize)]
pub struct QueryRecord {
    pub n_vertices: usize,
    pub k: usize,
    pub response: String,
}
