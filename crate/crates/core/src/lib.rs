//! Certificates for edge-disjoint biclique covers of complete graphs.
//!
//! `K_n` can be split into `n - 1` edge-disjoint bicliques (for example the
//! stars `({i}, {i+1..n})`) but never into fewer. This crate builds optimal
//! covers, verifies claimed ones, and refutes undersized ones with a
//! pigeonhole witness whose failure to satisfy a quadratic identity pins down
//! why the cover cannot be exact. The [`gadget`] module replays the same
//! argument as pure edge counting on explicitly constructed graphs.

pub mod cli;
pub mod collision;
pub mod cover;
pub mod error;
pub mod gadget;
pub mod matrix;
pub mod sample;
pub mod witness;

pub use collision::{SearchConfig, SearchOutcome, SearchStrategy};
pub use cover::{
    edge_multiplicities, parse_cover, recursive_decomposition, serialize_cover,
    star_decomposition, verify_cover, Biclique, CoverSpec, Edge, EdgeMultiplicities,
    VerificationReport, VertexId,
};
pub use error::{CoverError, GadgetError, Side, WitnessError};
pub use gadget::{
    biclique_balance, build_gadgets, clique_union_bijection, complement_components,
    contradiction_demo, cover_induced_gadget, edge_counts, edge_gap, BijectionMap, PartSizes,
};
pub use matrix::{matrix_collision, IntegerMatrix};
pub use witness::{
    find_pattern_collision, pattern_of, pigeonhole_threshold, quadratic_defect, refute,
    validate_witness, witness_by_kernel_search, witness_from_collision, Labeling, Pattern,
    RefutationCertificate, RefuteConfig, Refutation, Witness,
};
