//! Benchmark-style evaluation of pedestrian detections.
//!
//! Ground truth is filtered into height/visibility subsets; detections are
//! matched greedily per image, with ignore regions absorbing overlaps
//! without scoring; sweeping the score threshold yields an FPPI/miss-rate
//! curve whose log-average at nine reference FPPI points is the headline
//! miss-rate number (lower is better).

mod error;
mod io;
mod matching;
mod mr;
mod report;
mod subsets;

pub use error::EvalError;
pub use io::{load_annotations, load_detections, write_annotations_csv, Annotations, Detections};
pub use matching::{match_image, DetOutcome, MatchResult};
pub use mr::{evaluate, log_average_miss_rate, EvalCurve, SubsetResult, MISS_RATE_FLOOR};
pub use report::{write_curve_csv, write_report_csv};
pub use subsets::SubsetSpec;
