//! The detection loss stack and its training companions.
//!
//! Center confidence uses a focal-style loss with Gaussian down-weighting
//! of negatives near object centers; scale regression comes in smooth-L1
//! and vanilla-L1 variants with matching weight presets; offsets use
//! smooth L1. All gradients are analytic. Adam and a parameter EMA
//! operate on flat `f64` vectors so any parameter owner can use them.

mod adam;
mod curve;
mod ema;
mod error;
mod losses;

pub use adam::OptimState;
pub use curve::{write_loss_curve_csv, LossRecord};
pub use ema::EmaState;
pub use error::LossError;
pub use losses::{
    center_loss, offset_loss, scale_loss, smooth_l1, total_loss, vanilla_l1, CenterLossConfig,
    LossWeights, ScaleVariant,
};
