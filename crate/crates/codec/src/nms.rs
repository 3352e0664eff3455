use crate::types::DetBox;

/// Intersection over union of two (x, y, w, h) boxes.
pub fn iou_xywh(ax: f64, ay: f64, aw: f64, ah: f64, bx: f64, by: f64, bw: f64, bh: f64) -> f64 {
    let ix = (ax + aw).min(bx + bw) - ax.max(bx);
    let iy = (ay + ah).min(by + bh) - ay.max(by);
    if ix <= 0.0 || iy <= 0.0 {
        return 0.0;
    }
    let inter = ix * iy;
    let union = aw * ah + bw * bh - inter;
    inter / union
}

pub fn iou(a: &DetBox, b: &DetBox) -> f64 {
    iou_xywh(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h)
}

/// Greedy non-maximum suppression: repeatedly keep the highest-scoring
/// remaining box and drop every box overlapping it at IoU >= `threshold`.
/// Score ties resolve to the earlier input index (stable sort), and the
/// kept boxes come back in descending score order.
pub fn nms(boxes: &[DetBox], threshold: f64) -> Vec<DetBox> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| {
        boxes[b].score.partial_cmp(&boxes[a].score).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut suppressed = vec![false; boxes.len()];
    let mut kept = Vec::new();
    for (rank, &i) in order.iter().enumerate() {
        if suppressed[i] {
            continue;
        }
        kept.push(boxes[i]);
        for &j in &order[rank + 1..] {
            if !suppressed[j] && iou(&boxes[i], &boxes[j]) >= threshold {
                suppressed[j] = true;
            }
        }
    }
    kept
}
