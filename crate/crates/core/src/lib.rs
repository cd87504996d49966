//! Matrix-free sparse approximation: recover `S∘A` from products `A G` with a
//! Gaussian `G`, plus coloring baselines, Wishart fixtures and a sweep harness.

pub mod coloring;
pub mod dense;
pub mod error;
pub mod hardness;
pub mod harness;
pub mod linalg;
pub mod mmio;
pub mod oracle;
pub mod pattern;
pub mod random;
pub mod recover;

pub use coloring::{
    banded_rademacher_estimate, column_intersection_graph, exact_recover_by_coloring,
    greedy_coloring, Coloring, ColoringOrder, ColumnGraph,
};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use hardness::{wishart_expected_norms, wishart_matrix, WishartSpec};
pub use oracle::{
    counting_oracle, csr_oracle, dense_oracle, inverse_oracle, CountingOracle, CsrOracle,
    DenseOracle, InverseOracle, MatVecOracle,
};
pub use pattern::{hadamard_mask, SparseApprox, SparsityPattern};
pub use random::{RandomSeed, GENERATOR_ID};
pub use recover::{
    boosted_recover, fixed_sparse_recover, hutchinson_diagonal, recover_from_sketch,
    ProbeDistribution, RecoveryResult,
};
