use thiserror::Error;

/// Errors produced by the ensemble, its networks, buffers, and the run harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("attempted to mutate a frozen network")]
    FrozenNetwork,

    #[error("non-finite value encountered in {0}")]
    Numeric(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("replay buffer is empty")]
    EmptyBuffer,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("behavior policy probability is zero or negative")]
    DegenerateBehavior,

    #[error("unknown module id {0}")]
    UnknownModule(u64),

    #[error("episode already finished")]
    EpisodeFinished,

    #[error("normalization undefined: max return on task {0} is zero")]
    UndefinedNormalization(usize),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by non-finite numerics (NaN/Inf), which
    /// abort a run with a checkpoint dump rather than a config diagnostic.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}
