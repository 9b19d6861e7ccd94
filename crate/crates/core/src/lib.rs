//! Cluster representatives for categorical data and maximal-resemblance
//! labeling of unclustered points.
//!
//! A clustering of categorical points is summarized per cluster by
//!
//! * a node importance table ([`NirTable`]): every (attribute, value) node
//!   with its importance `w = (count / m_i) * f`, where `f` rewards nodes
//!   concentrated in few clusters, and
//! * a nodeset lattice ([`NnirLattice`]): the same statistics for every
//!   combination of values over distinct attributes that occurs in the data.
//!
//! Unlabeled points are then scored against each cluster
//! ([`labeling`]) and given the label of maximal resemblance. The
//! [`pipeline`] module wires sampling, k-modes clustering, representative
//! building and labeling together, and [`report`] compares the labels of the
//! three scoring rules.
//!
//! Cluster indices are 0-based throughout.

pub mod demo;
pub mod error;
pub mod fixture;
pub mod io;
pub mod kmodes;
pub mod labeling;
pub mod lattice;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod representative;
pub mod sampling;
pub mod synthetic;

pub use error::{IoError, LabelingError, ModelError, PipelineError, RepresentativeError};
pub use labeling::{
    enumerate_combinations, expected_combination_weight, label_dataset, label_point, resemblance, resemblance_maxsum,
    resemblance_nir, resemblance_nnir, FallbackPolicy, LabelAssignment, LabelStatus, Method, ResemblanceScore,
};
pub use lattice::{build_nnir, prune_threshold, NnirLattice, MAX_ATTRIBUTES};
pub use model::{
    project_point, validate_nodeset, AttributeSchema, Clustering, DataPoint, Node, Nodeset, NodesetCombination,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineInput, PipelineOutput};
pub use report::{compare_methods, ComparisonReport};
pub use representative::{
    build_nir, cluster_share, importance_w, nodeset_frequency, weighting_f, NirTable, NodesetStats, PruningPolicy,
    RepresentativeModel,
};
