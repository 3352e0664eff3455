use detkit_tensor::{Tensor4, TensorError};

use crate::grid::Grid;

/// Encoder/decoder settings.
///
/// `r_train` is the dataset pedestrian aspect ratio used when boxes are
/// synthesized; `r_infer` is the (compressed) ratio applied when decoding,
/// kept at or below `r_train`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncoderConfig {
    pub stride: usize,
    pub r_train: f64,
    /// sigma = (box extent on the map) / gaussian_divisor.
    pub gaussian_divisor: f64,
    pub score_threshold: f64,
    pub nms_iou: f64,
    pub r_infer: f64,
}

impl Default for EncoderConfig {
    fn default() -> EncoderConfig {
        EncoderConfig {
            stride: 4,
            r_train: 0.41,
            gaussian_divisor: 4.0,
            score_threshold: 0.01,
            nms_iou: 0.5,
            r_infer: 0.40,
        }
    }
}

/// Annotated pedestrian: full-body box in input pixels, visible-area
/// ratio, and an ignore flag for regions that absorb detections without
/// scoring them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GtBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub visibility: f64,
    pub ignore: bool,
}

impl GtBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> GtBox {
        GtBox { x, y, w, h, visibility: 1.0, ignore: false }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }
}

/// Decoded detection: input-pixel box plus confidence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub score: f64,
}

impl DetBox {
    pub fn center(&self) -> (f64, f64) {
        (self.x + self.w / 2.0, self.y + self.h / 2.0)
    }
}

/// Stride-s ground-truth encoding.
///
/// `center` is exactly 1 at positive cells and 0 elsewhere; `gauss_mask`
/// is the pointwise max of per-box Gaussians (1 at positives); `scale` and
/// the offsets are loss-active only where `pos_mask` holds.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetMaps {
    pub center: Grid,
    pub gauss_mask: Grid,
    pub scale: Grid,
    pub offset_x: Grid,
    pub offset_y: Grid,
    pub pos_mask: Vec<bool>,
}

impl TargetMaps {
    pub fn empty(h: usize, w: usize) -> TargetMaps {
        TargetMaps {
            center: Grid::zeros(h, w),
            gauss_mask: Grid::zeros(h, w),
            scale: Grid::zeros(h, w),
            offset_x: Grid::zeros(h, w),
            offset_y: Grid::zeros(h, w),
            pos_mask: vec![false; h * w],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.center.dims()
    }

    #[inline]
    pub fn is_positive(&self, y: usize, x: usize) -> bool {
        self.pos_mask[y * self.center.width() + x]
    }

    pub fn positive_count(&self) -> usize {
        self.pos_mask.iter().filter(|&&p| p).count()
    }

    /// Pack as a (1, 6, H, W) tensor, channel order: center, gauss_mask,
    /// scale, offset_x, offset_y, pos_mask (0/1). Companion of
    /// [`TargetMaps::from_tensor`]; used with the golden-file format.
    pub fn to_tensor(&self) -> Tensor4 {
        let (h, w) = self.dims();
        let mut data = Vec::with_capacity(6 * h * w);
        data.extend_from_slice(self.center.data());
        data.extend_from_slice(self.gauss_mask.data());
        data.extend_from_slice(self.scale.data());
        data.extend_from_slice(self.offset_x.data());
        data.extend_from_slice(self.offset_y.data());
        data.extend(self.pos_mask.iter().map(|&p| if p { 1.0 } else { 0.0 }));
        Tensor4::from_vec((1, 6, h, w), data).unwrap()
    }

    pub fn from_tensor(t: &Tensor4) -> Result<TargetMaps, TensorError> {
        let channel = |c: usize| Grid::from_tensor_channel(t, 0, c);
        Ok(TargetMaps {
            center: channel(0)?,
            gauss_mask: channel(1)?,
            scale: channel(2)?,
            offset_x: channel(3)?,
            offset_y: channel(4)?,
            pos_mask: channel(5)?.data().iter().map(|&v| v != 0.0).collect(),
        })
    }
}
