//! Desk-scale synthetic harness around the detection numeric core.
//!
//! Scenes are generated at prediction-map resolution: ground-truth boxes
//! are encoded to target maps, and the feature tensor is a fixed seeded
//! linear mixing of those maps plus noise, so a per-pixel affine head can
//! learn (or be hand-set to) the exact inverse. The trainer couples a
//! registered normalization layer with that head, the losses, Adam and a
//! parameter EMA; the experiment drivers sweep batch sizes, decode aspect
//! ratios and scale-loss variants and report miss rates per subset.

pub mod config;
pub mod experiments;
pub mod fixture;
pub mod gradcheck;
pub mod model;
pub mod rundir;
pub mod scene;
pub mod trainer;
