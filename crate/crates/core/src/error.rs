//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulation, learning and analysis pipelines.
#[derive(Debug, Error)]
pub enum Error {
    /// A location id outside the tessellation was dereferenced.
    #[error("location id {id} out of range (tessellation has {len} locations)")]
    InvalidLocation { id: u32, len: usize },

    /// Tessellation construction rejected the input.
    #[error("invalid tessellation: {0}")]
    InvalidTessellation(String),

    /// Two distinct locations share coordinates, so an inverse-square
    /// (or inverse-power) weight is undefined between them.
    #[error("locations {a} and {b} are coincident; merge them or fix the tessellation")]
    DegenerateDistance { a: u32, b: u32 },

    /// Every candidate weight is zero: relevance-proportional sampling is undefined.
    #[error("all candidate relevances are zero")]
    EmptyRelevance,

    /// A user had no records at all.
    #[error("user {0} has no records")]
    EmptyUser(u64),

    /// Learning was asked to run on an empty corpus.
    #[error("no trajectories to learn from")]
    EmptyCorpus,

    /// A diary token sequence is not a word of the diary language.
    #[error("token sequence is not a valid mobility diary")]
    InvalidDiary,

    /// A trajectory is too short for the requested analysis.
    #[error("trajectory has {got} slots, {need} required")]
    InsufficientHistory { got: usize, need: usize },

    /// Silhouette needs at least two non-noise clusters.
    #[error("silhouette undefined: fewer than two clusters")]
    UndefinedSilhouette,

    /// k-NN profile needs more points than the neighbor index.
    #[error("need more than {k} points for a {k}-NN profile, got {got}")]
    InsufficientPoints { got: usize, k: usize },

    /// A distribution cannot be built from zero usable samples.
    #[error("cannot build a distribution from an empty sample set")]
    EmptyDistribution,

    /// Two distributions share no support and cannot be compared.
    #[error("distributions have disjoint supports")]
    IncomparableDistributions,

    /// Inconsistent configuration between pipeline components.
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    /// A malformed input row; `line` is 1-based and counts the header.
    #[error("line {line}: {msg}")]
    DataFormat { line: usize, msg: String },

    /// A trajectory-generator failure, annotated with where it happened.
    #[error("agent {agent}, slot {slot}: {source}")]
    Generation {
        agent: u64,
        slot: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model file: {0}")]
    ModelFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
