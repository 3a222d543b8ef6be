use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum GlstrError {
    /// An input value violated an operation's preconditions (bad shape,
    /// out-of-range pixel, non-binary mask, ...).
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// An architecture or run configuration is internally inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// The training loss stopped being finite; a diagnostic snapshot is
    /// written before this is returned.
    #[error("training diverged at step {step}: loss = {loss}")]
    Divergence { step: usize, loss: f64 },
}

pub type Result<T> = std::result::Result<T, GlstrError>;

impl GlstrError {
    pub fn rejected(msg: impl Into<String>) -> Self {
        GlstrError::RejectedInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        GlstrError::Config(msg.into())
    }
}
