//! Randomized matching scenes compared against an independent oracle, and
//! the monotone response of the miss rate to label edits.

use detkit_codec::{iou_xywh, DetBox, GtBox};
use detkit_eval::{log_average_miss_rate, match_image, DetOutcome, SubsetSpec};
use detkit_tensor::SeededRng;

/// Oracle matcher: builds the full IoU matrix first, then replays the
/// greedy definition literally — detections in descending score order
/// (ties by input position), each claiming the best still-free scoring
/// box, else any qualifying ignore region.
fn match_oracle(
    dets: &[DetBox],
    gts: &[GtBox],
    subset: &SubsetSpec,
    thresh: f64,
) -> (usize, usize, usize, Vec<DetOutcome>) {
    let iou = |d: &DetBox, g: &GtBox| iou_xywh(d.x, d.y, d.w, d.h, g.x, g.y, g.w, g.h);
    let matrix: Vec<Vec<f64>> =
        dets.iter().map(|d| gts.iter().map(|g| iou(d, g)).collect()).collect();
    let scoring: Vec<bool> = gts.iter().map(|g| !g.ignore && subset.contains(g)).collect();

    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b].score.partial_cmp(&dets[a].score).unwrap().then(a.cmp(&b))
    });

    let mut free: Vec<bool> = scoring.clone();
    let mut outcomes = vec![DetOutcome::FalsePositive; dets.len()];
    let (mut tp, mut fp) = (0usize, 0usize);
    for &di in &order {
        let mut best: Option<usize> = None;
        for gi in 0..gts.len() {
            if free[gi]
                && matrix[di][gi] >= thresh
                && best.map_or(true, |b| matrix[di][gi] > matrix[di][b])
            {
                best = Some(gi);
            }
        }
        if let Some(gi) = best {
            free[gi] = false;
            outcomes[di] = DetOutcome::TruePositive;
            tp += 1;
            continue;
        }
        let absorbed =
            (0..gts.len()).any(|gi| !scoring[gi] && matrix[di][gi] >= thresh);
        if absorbed {
            outcomes[di] = DetOutcome::IgnoreMatched;
        } else {
            fp += 1;
        }
    }
    let missed = (0..gts.len()).filter(|&gi| free[gi]).count();
    (tp, fp, missed, outcomes)
}

fn random_gt(rng: &mut SeededRng) -> GtBox {
    let h = rng.uniform(30.0, 160.0);
    GtBox {
        x: rng.uniform(0.0, 400.0),
        y: rng.uniform(0.0, 200.0),
        w: 0.41 * h,
        h,
        visibility: rng.unit(),
        ignore: rng.unit() < 0.2,
    }
}

#[test]
fn randomized_scenes_match_the_oracle() {
    let mut rng = SeededRng::new(8811);
    let subset = SubsetSpec::reasonable();
    for scene in 0..300 {
        let gt_count = rng.uniform_usize(0, 10);
        let det_count = rng.uniform_usize(0, 10);
        let gts: Vec<GtBox> = (0..gt_count).map(|_| random_gt(&mut rng)).collect();
        // mix of on-target and stray detections with distinct-ish scores
        let dets: Vec<DetBox> = (0..det_count)
            .map(|i| {
                if !gts.is_empty() && rng.unit() < 0.6 {
                    let g = &gts[i % gts.len()];
                    DetBox {
                        x: g.x + rng.uniform(-6.0, 6.0),
                        y: g.y + rng.uniform(-6.0, 6.0),
                        w: g.w,
                        h: g.h,
                        score: rng.unit(),
                    }
                } else {
                    DetBox {
                        x: rng.uniform(0.0, 400.0),
                        y: rng.uniform(0.0, 200.0),
                        w: rng.uniform(10.0, 60.0),
                        h: rng.uniform(20.0, 150.0),
                        score: rng.unit(),
                    }
                }
            })
            .collect();

        let got = match_image(&dets, &gts, &subset, 0.5);
        let (tp, fp, missed, oracle_outcomes) = match_oracle(&dets, &gts, &subset, 0.5);
        assert_eq!((got.tp, got.fp, got.missed), (tp, fp, missed), "scene {scene}");

        // same per-detection outcomes, matched up by descending score
        let mut order: Vec<usize> = (0..dets.len()).collect();
        order.sort_by(|&a, &b| dets[b].score.partial_cmp(&dets[a].score).unwrap().then(a.cmp(&b)));
        for (slot, &di) in order.iter().enumerate() {
            assert_eq!(got.labels[slot].1, oracle_outcomes[di], "scene {scene} det {di}");
        }
    }
}

#[test]
fn removing_a_false_positive_never_raises_mr() {
    let mut rng = SeededRng::new(5150);
    for _ in 0..200 {
        let n = 3 + rng.uniform_usize(0, 8);
        let labels: Vec<(f64, DetOutcome)> = (0..n)
            .map(|_| {
                let outcome = if rng.unit() < 0.5 {
                    DetOutcome::TruePositive
                } else {
                    DetOutcome::FalsePositive
                };
                (rng.unit(), outcome)
            })
            .collect();
        let total_gts = labels.iter().filter(|(_, o)| *o == DetOutcome::TruePositive).count()
            + rng.uniform_usize(0, 3);
        if total_gts == 0 {
            continue;
        }
        let base = log_average_miss_rate(&labels, total_gts, 3).unwrap().mr;
        if let Some(pos) = labels.iter().position(|(_, o)| *o == DetOutcome::FalsePositive) {
            let mut fewer = labels.clone();
            fewer.remove(pos);
            let after = log_average_miss_rate(&fewer, total_gts, 3).unwrap().mr;
            assert!(after <= base + 1e-12, "removing an FP raised MR: {base} -> {after}");
        }
        if let Some(pos) = labels.iter().position(|(_, o)| *o == DetOutcome::TruePositive) {
            let mut fewer = labels.clone();
            fewer.remove(pos);
            let after = log_average_miss_rate(&fewer, total_gts, 3).unwrap().mr;
            assert!(after >= base - 1e-12, "removing a TP lowered MR: {base} -> {after}");
        }
    }
}

#[test]
fn evaluation_is_deterministic() {
    let mut rng = SeededRng::new(31337);
    let gts: Vec<GtBox> = (0..6).map(|_| random_gt(&mut rng)).collect();
    let dets: Vec<DetBox> = (0..8)
        .map(|_| DetBox {
            x: rng.uniform(0.0, 400.0),
            y: rng.uniform(0.0, 200.0),
            w: rng.uniform(10.0, 60.0),
            h: rng.uniform(20.0, 150.0),
            score: rng.unit(),
        })
        .collect();
    let a = match_image(&dets, &gts, &SubsetSpec::reasonable(), 0.5);
    let b = match_image(&dets, &gts, &SubsetSpec::reasonable(), 0.5);
    assert_eq!(a.labels, b.labels);
    assert_eq!((a.tp, a.fp, a.missed), (b.tp, b.fp, b.missed));
}
