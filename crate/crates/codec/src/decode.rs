use crate::error::CodecError;
use crate::grid::Grid;
use crate::nms::nms;
use crate::types::{DetBox, EncoderConfig};

#[derive(Clone, Debug, Default)]
pub struct DecodeOutcome {
    /// Survivors of NMS, descending score.
    pub boxes: Vec<DetBox>,
    /// Cells whose scale prediction was non-finite and had to be skipped.
    pub skipped_non_finite: usize,
    /// Candidate count before suppression.
    pub raw_count: usize,
}

/// Decode prediction maps into boxes.
///
/// Every cell at or above the score threshold yields a candidate with
/// height `stride * exp(scale)`, width exactly `r * h`, and center
/// `(col + offset_x, row + offset_y) * stride`; candidates then pass
/// through greedy NMS at the configured IoU.
pub fn decode(
    center_pred: &Grid,
    scale_pred: &Grid,
    offset_x_pred: &Grid,
    offset_y_pred: &Grid,
    cfg: &EncoderConfig,
    r: f64,
) -> Result<DecodeOutcome, CodecError> {
    let dims = center_pred.dims();
    for (name, grid) in [
        ("scale", scale_pred),
        ("offset_x", offset_x_pred),
        ("offset_y", offset_y_pred),
    ] {
        if grid.dims() != dims {
            return Err(CodecError::MapShapeMismatch(format!(
                "center {:?} vs {name} {:?}",
                dims,
                grid.dims()
            )));
        }
    }

    let stride = cfg.stride as f64;
    let mut outcome = DecodeOutcome::default();
    let mut candidates = Vec::new();
    for row in 0..dims.0 {
        for col in 0..dims.1 {
            let score = center_pred.at(row, col);
            if score < cfg.score_threshold {
                continue;
            }
            let scale = scale_pred.at(row, col);
            if !scale.is_finite() {
                outcome.skipped_non_finite += 1;
                continue;
            }
            let h = stride * scale.exp();
            let w = r * h;
            let cx = (col as f64 + offset_x_pred.at(row, col)) * stride;
            let cy = (row as f64 + offset_y_pred.at(row, col)) * stride;
            candidates.push(DetBox { x: cx - w / 2.0, y: cy - h / 2.0, w, h, score });
        }
    }
    outcome.raw_count = candidates.len();
    outcome.boxes = nms(&candidates, cfg.nms_iou);
    Ok(outcome)
}
