//! Vietoris–Rips persistent homology over Z/2.

mod diagram;
mod distance;
mod engine;
mod oracle;

pub use diagram::{betti_at, top_k_features, Feature, PersistenceDiagram};
pub use distance::{distance_matrix, DistanceMatrix, Metric};
pub use engine::rips_persistence;
pub use oracle::{naive_rips_oracle, ORACLE_MAX_POINTS};
