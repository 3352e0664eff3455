use detkit_codec::{iou_xywh, DetBox, GtBox};

use crate::subsets::SubsetSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetOutcome {
    TruePositive,
    FalsePositive,
    /// Overlapped an ignore region (annotated ignore or out-of-subset GT):
    /// counted neither for nor against.
    IgnoreMatched,
}

#[derive(Clone, Debug, Default)]
pub struct MatchResult {
    pub tp: usize,
    pub fp: usize,
    pub missed: usize,
    /// Non-ignore GTs inside the subset.
    pub subset_gts: usize,
    /// (score, outcome) per detection, descending score (ties in input order).
    pub labels: Vec<(f64, DetOutcome)>,
}

/// Greedy ignore-aware matching of one image.
///
/// GTs outside the subset become ignore regions. Detections are processed
/// in descending score order (equal scores keep input order); each takes
/// the highest-IoU unmatched scoring GT at or above `iou_thresh`, else the
/// best ignore region at or above the threshold (absorbed, and ignore
/// regions may absorb any number of detections), else counts as a false
/// positive. Scoring GTs left unmatched are misses.
pub fn match_image(
    dets: &[DetBox],
    gts: &[GtBox],
    subset: &SubsetSpec,
    iou_thresh: f64,
) -> MatchResult {
    let scoring: Vec<bool> = gts.iter().map(|gt| !gt.ignore && subset.contains(gt)).collect();

    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b].score.partial_cmp(&dets[a].score).unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut gt_taken = vec![false; gts.len()];
    let mut result = MatchResult { subset_gts: scoring.iter().filter(|&&s| s).count(), ..Default::default() };

    for &di in &order {
        let det = &dets[di];
        let overlap = |gt: &GtBox| iou_xywh(det.x, det.y, det.w, det.h, gt.x, gt.y, gt.w, gt.h);

        let mut best_scoring: Option<(usize, f64)> = None;
        let mut best_ignore: Option<f64> = None;
        for (gi, gt) in gts.iter().enumerate() {
            let ov = overlap(gt);
            if ov < iou_thresh {
                continue;
            }
            if scoring[gi] {
                if !gt_taken[gi] && best_scoring.map_or(true, |(_, b)| ov > b) {
                    best_scoring = Some((gi, ov));
                }
            } else if best_ignore.map_or(true, |b| ov > b) {
                best_ignore = Some(ov);
            }
        }

        let outcome = if let Some((gi, _)) = best_scoring {
            gt_taken[gi] = true;
            result.tp += 1;
            DetOutcome::TruePositive
        } else if best_ignore.is_some() {
            DetOutcome::IgnoreMatched
        } else {
            result.fp += 1;
            DetOutcome::FalsePositive
        };
        result.labels.push((det.score, outcome));
    }

    result.missed = (0..gts.len()).filter(|&gi| scoring[gi] && !gt_taken[gi]).count();
    result
}
