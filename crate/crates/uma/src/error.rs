//! Error type shared by the library.

use thiserror::Error;

/// Library errors. Contract violations by callers surface here rather than
/// as panics so that user-built inputs can be diagnosed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("literal set has capacity {found}, alphabet has {expected} literals")]
    SigmaMismatch { expected: usize, found: usize },
    #[error("flip set is not contained in the vertex")]
    InvalidFlip,
    #[error("relation is degenerate: some negligible literal has a negligible complement")]
    Degenerate,
    #[error("set is not coherent")]
    Incoherent,
    #[error("set is not forward-closed")]
    NotForwardClosed,
    #[error("dual enumeration capped at {cap} pairs, got {n_pairs}")]
    CapExceeded { n_pairs: usize, cap: usize },
    #[error("operation requires a nonempty vertex set")]
    EmptySet,
    #[error("snapshot is trivial (all weights zero or uninitialized)")]
    TrivialSnapshot,
    #[error("value {0} is out of range")]
    BadValue(String),
    #[error("geodesic search found no minimal literal to flip")]
    BrokenDual,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
