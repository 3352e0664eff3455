use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("empty reduction: axis {axis} has extent 0")]
    EmptyReduction { axis: char },

    #[error("broadcast mismatch: {lhs:?} vs {rhs:?}")]
    BroadcastMismatch {
        lhs: (usize, usize, usize, usize),
        rhs: (usize, usize, usize, usize),
    },

    #[error("shape mismatch: shape {shape:?} implies {expected} elements, got {got}")]
    ShapeMismatch {
        shape: (usize, usize, usize, usize),
        expected: usize,
        got: usize,
    },

    #[error("malformed tensor file: {0}")]
    MalformedFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
