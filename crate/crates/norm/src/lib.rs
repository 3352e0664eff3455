//! Normalization layers for the detection stack.
//!
//! The family lives behind the [`NormLayer`] trait: every variant (batch
//! normalization, switchable normalization) is registered by name and
//! selected at runtime from config. Switchable normalization mixes
//! instance/layer/batch statistics through two learned softmax gates, one
//! for means and one for variances, and its backward pass is fully
//! analytic — through the batch statistics and through both softmaxes.

mod bn;
mod error;
mod layer;
mod registry;
mod report;
mod sn;
mod stats;

pub use bn::{in_forward, ln_forward, BnCache, BnGrads, BnLayer};
pub use error::NormError;
pub use layer::{Mode, NormBackward, NormCache, NormLayer};
pub use registry::{available_norms, create_norm};
pub use report::{weight_report, write_weight_report_csv, PartWeights, WeightReport};
pub use sn::{softmax3, SnCache, SnGrads, SnLayer};
pub use stats::{compute_stats, NormStats};
