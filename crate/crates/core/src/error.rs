use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("schema has no attributes")]
    EmptySchema,
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttributeName(String),
    #[error("point has {found} values, schema expects {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("missing value for attribute {attr}")]
    MissingValue { attr: usize },
    #[error("clustering needs at least one cluster")]
    NoClusters,
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("point {0} appears in more than one cluster")]
    PointInTwoClusters(usize),
    #[error("nodeset must contain at least one node")]
    EmptyNodeset,
    #[error("two nodes share attribute {0}")]
    DuplicateAttribute(usize),
    #[error("attribute index {attr} out of range for q = {q}")]
    IndexOutOfRange { attr: usize, q: usize },
    #[error("attribute {0} is not covered by any block")]
    UncoveredAttribute(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepresentativeError {
    #[error("cluster index {index} out of range for k = {k}")]
    ClusterIndexOutOfRange { index: usize, k: usize },
    #[error("nodeset occurs in no cluster")]
    ZeroTotalCount,
    #[error("pruning threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("{q} attributes exceeds the supported maximum of {max}")]
    TooManyAttributes { q: usize, max: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabelingError {
    #[error("block {0} is not in the cluster's lattice")]
    MissingBlock(String),
    #[error("cluster index {index} out of range for k = {k}")]
    ClusterIndexOutOfRange { index: usize, k: usize },
    #[error("{q} attributes exceeds the partition enumeration cap of {cap}")]
    TooManyAttributes { q: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("sample fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("cannot form {k} clusters from {distinct} distinct points")]
    TooFewPoints { k: usize, distinct: usize },
    #[error("no labeling methods requested")]
    NoMethods,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Representative(#[from] RepresentativeError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("line {line}: missing value in column `{column}`")]
    MissingValue { line: u64, column: String },
    #[error("duplicate header `{0}`")]
    DuplicateHeader(String),
    #[error("line {line}: cluster label `{value}` is not a non-negative integer")]
    BadClusterLabel { line: u64, value: String },
    #[error("input has no `__cluster` column")]
    MissingClusterColumn,
    #[error("model document version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("malformed model document: {0}")]
    MalformedDocument(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}
