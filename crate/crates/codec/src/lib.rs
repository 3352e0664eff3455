//! Ground-truth encoding and prediction decoding for anchor-free
//! pedestrian detection at a fixed stride.
//!
//! Encoding turns boxes into a center heatmap, a Gaussian negative mask, a
//! log-scale map and two sub-cell offset maps. Decoding reverses the
//! process, reconstructing widths as `w = r * h` (the aspect ratio can be
//! compressed below the dataset's at inference time to blunt NMS
//! over-suppression in crowds), then applies greedy IoU suppression.

mod decode;
mod encode;
mod error;
mod grid;
mod io;
mod nms;
mod types;

pub use decode::{decode, DecodeOutcome};
pub use encode::encode;
pub use error::CodecError;
pub use grid::Grid;
pub use io::{read_detections_csv, write_detections_csv};
pub use nms::{iou, iou_xywh, nms};
pub use types::{DetBox, EncoderConfig, GtBox, TargetMaps};
