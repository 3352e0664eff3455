use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("malformed annotation/detection file at line {line}, field '{field}': {message}")]
    Malformed { line: usize, field: String, message: String },

    #[error("detections reference unknown image id '{0}'")]
    UnknownImage(String),

    #[error("no ground truth in subset; miss rate undefined")]
    NoGroundTruth,

    #[error("evaluation needs at least one image")]
    NoImages,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
