//! Minimal dense rank-4 tensor in (N, C, H, W) layout.
//!
//! This crate is the numeric substrate for the detection stack: axis
//! reductions with population statistics, elementwise maps, broadcast
//! combines, deterministic seeded fills, and the flat binary formats used
//! by test fixtures and checkpoints. There is deliberately no convolution,
//! no autodiff and no general broadcasting beyond stretching extent-1 axes.

mod checkpoint;
mod error;
mod golden;
mod rng;
mod tensor;

pub mod check;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use error::TensorError;
pub use golden::{read_golden, write_golden};
pub use rng::{Distribution, SeededRng};
pub use tensor::{Axes, Shape4, Tensor4};
