use thiserror::Error;

#[derive(Debug, Error)]
pub enum LossError {
    #[error("map shape mismatch: prediction {pred:?} vs targets {target:?}")]
    ShapeMismatch { pred: (usize, usize), target: (usize, usize) },

    #[error("divergent gradient: non-finite value at index {0}")]
    DivergentGradient(usize),

    #[error("parameter/gradient length mismatch: {params} vs {grads}")]
    LengthMismatch { params: usize, grads: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
