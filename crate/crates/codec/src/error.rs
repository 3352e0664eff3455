use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("shape/stride mismatch: input {input_h}x{input_w} not divisible by stride {stride}")]
    ShapeStrideMismatch { input_h: usize, input_w: usize, stride: usize },

    #[error("prediction maps disagree in shape: {0}")]
    MapShapeMismatch(String),

    #[error("malformed detections file at line {line}, field '{field}': {message}")]
    Malformed { line: usize, field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
