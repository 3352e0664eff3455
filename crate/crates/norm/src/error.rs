use detkit_tensor::TensorError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NormError {
    #[error("channel mismatch: layer has {layer} channels, input has {input}")]
    ChannelMismatch { layer: usize, input: usize },

    #[error("uninitialized running statistics")]
    UninitializedRunningStats,

    #[error("gradient shape mismatch: cache {cache:?} vs dy {dy:?}")]
    GradientShapeMismatch {
        cache: (usize, usize, usize, usize),
        dy: (usize, usize, usize, usize),
    },

    #[error("weight override must sum to 1, got {0}")]
    BadWeightOverride(f64),

    #[error("cache does not belong to this layer kind")]
    CacheKindMismatch,

    #[error("unknown normalization kind '{0}'")]
    UnknownKind(String),

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
