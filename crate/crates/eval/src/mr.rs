use crate::error::EvalError;
use crate::io::{Annotations, Detections};
use crate::matching::{match_image, DetOutcome};
use crate::subsets::SubsetSpec;

/// Floor applied to miss rates inside the log average so ln(0) never
/// occurs; a log-average that bottoms out at the floor is reported as 0.
pub const MISS_RATE_FLOOR: f64 = 1e-10;

/// FPPI/miss-rate curve plus its log-average summary.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalCurve {
    /// One point per distinct score threshold, ascending FPPI.
    pub points: Vec<(f64, f64)>,
    /// The nine (reference FPPI, miss rate) samples entering the average.
    pub reference_points: Vec<(f64, f64)>,
    /// Log-average miss rate in [0, 1]; 0 exactly for a perfect detector.
    pub mr: f64,
}

/// The nine reference FPPI values, log-spaced over [1e-2, 1e0].
pub fn reference_fppi() -> [f64; 9] {
    let mut refs = [0.0; 9];
    for (k, r) in refs.iter_mut().enumerate() {
        *r = 10f64.powf(-2.0 + 0.25 * k as f64);
    }
    refs
}

/// Sweep score thresholds over the pooled per-detection labels and reduce
/// to the log-average miss rate.
///
/// At each distinct score t the detections with score >= t contribute
/// their true/false-positive counts; miss = 1 - TP/total_gts and
/// FPPI = FP/num_images. For each reference FPPI the lowest miss rate at
/// fppi <= reference is taken (falling back to the miss rate at the
/// smallest achieved FPPI, or 1.0 when there are no detections at all).
pub fn log_average_miss_rate(
    labels: &[(f64, DetOutcome)],
    total_gts: usize,
    num_images: usize,
) -> Result<EvalCurve, EvalError> {
    if num_images == 0 {
        return Err(EvalError::NoImages);
    }
    if total_gts == 0 {
        return Err(EvalError::NoGroundTruth);
    }

    let mut sorted: Vec<(f64, DetOutcome)> =
        labels.iter().filter(|(_, o)| *o != DetOutcome::IgnoreMatched).copied().collect();
    sorted.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for (i, &(score, outcome)) in sorted.iter().enumerate() {
        match outcome {
            DetOutcome::TruePositive => tp += 1,
            DetOutcome::FalsePositive => fp += 1,
            DetOutcome::IgnoreMatched => {}
        }
        let next_differs = sorted.get(i + 1).map_or(true, |&(s, _)| s != score);
        if next_differs {
            let miss = 1.0 - tp as f64 / total_gts as f64;
            let fppi = fp as f64 / num_images as f64;
            points.push((fppi, miss));
        }
    }

    let mut reference_points = Vec::with_capacity(9);
    for r in reference_fppi() {
        let miss = if points.is_empty() {
            1.0
        } else {
            let qualifying =
                points.iter().filter(|&&(fppi, _)| fppi <= r).map(|&(_, m)| m).fold(f64::INFINITY, f64::min);
            if qualifying.is_finite() {
                qualifying
            } else {
                // Nothing at or below this reference: fall back to the
                // smallest achieved FPPI, which is the first sweep point
                // (FPPI grows as the threshold drops). Taking that point's
                // own miss — not the best miss among later equal-FPPI
                // points — keeps MR monotone under adding/removing
                // detections.
                points[0].1
            }
        };
        reference_points.push((r, miss));
    }

    let log_mean = reference_points
        .iter()
        .map(|&(_, m)| m.max(MISS_RATE_FLOOR).ln())
        .sum::<f64>()
        / reference_points.len() as f64;
    let raw = log_mean.exp();
    let mr = if raw <= MISS_RATE_FLOOR * (1.0 + 1e-9) { 0.0 } else { raw };

    Ok(EvalCurve { points, reference_points, mr })
}

/// Per-subset evaluation result; `curve` is `None` when the subset holds
/// no ground truth (reported as undefined, never as 0).
#[derive(Clone, Debug)]
pub struct SubsetResult {
    pub spec: SubsetSpec,
    pub curve: Option<EvalCurve>,
}

/// Run matching and the miss-rate reduction for each subset.
pub fn evaluate(
    dets: &Detections,
    anns: &Annotations,
    subsets: &[SubsetSpec],
    iou_thresh: f64,
) -> Result<Vec<SubsetResult>, EvalError> {
    if anns.num_images() == 0 {
        return Err(EvalError::NoImages);
    }
    let mut results = Vec::with_capacity(subsets.len());
    for spec in subsets {
        let mut labels = Vec::new();
        let mut total_gts = 0usize;
        for idx in 0..anns.num_images() {
            let m = match_image(dets.boxes(idx), anns.boxes(idx), spec, iou_thresh);
            total_gts += m.subset_gts;
            labels.extend(m.labels);
        }
        let curve = match log_average_miss_rate(&labels, total_gts, anns.num_images()) {
            Ok(curve) => Some(curve),
            Err(EvalError::NoGroundTruth) => None,
            Err(other) => return Err(other),
        };
        results.push(SubsetResult { spec: spec.clone(), curve });
    }
    Ok(results)
}
