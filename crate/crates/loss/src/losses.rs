use detkit_codec::{Grid, TargetMaps};

use crate::error::LossError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleVariant {
    Smooth,
    Vanilla,
}

impl ScaleVariant {
    pub fn parse(s: &str) -> Option<ScaleVariant> {
        match s.to_ascii_lowercase().as_str() {
            "smooth" => Some(ScaleVariant::Smooth),
            "vanilla" => Some(ScaleVariant::Vanilla),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScaleVariant::Smooth => "smooth",
            ScaleVariant::Vanilla => "vanilla",
        }
    }
}

/// Weights of the three loss parts. The presets pair each scale-loss
/// variant with its published weight triple: (0.01, 1, 0.1) for smooth L1
/// and (0.01, 0.05, 0.1) for vanilla L1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossWeights {
    pub lambda_center: f64,
    pub lambda_scale: f64,
    pub lambda_offset: f64,
    pub scale_variant: ScaleVariant,
}

impl LossWeights {
    pub fn smooth_preset() -> LossWeights {
        LossWeights {
            lambda_center: 0.01,
            lambda_scale: 1.0,
            lambda_offset: 0.1,
            scale_variant: ScaleVariant::Smooth,
        }
    }

    pub fn vanilla_preset() -> LossWeights {
        LossWeights {
            lambda_center: 0.01,
            lambda_scale: 0.05,
            lambda_offset: 0.1,
            scale_variant: ScaleVariant::Vanilla,
        }
    }

    pub fn preset(variant: ScaleVariant) -> LossWeights {
        match variant {
            ScaleVariant::Smooth => LossWeights::smooth_preset(),
            ScaleVariant::Vanilla => LossWeights::vanilla_preset(),
        }
    }
}

/// Focal exponent and negative down-weighting exponent of the center loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterLossConfig {
    pub gamma: f64,
    pub beta_neg: f64,
}

impl Default for CenterLossConfig {
    fn default() -> CenterLossConfig {
        CenterLossConfig { gamma: 2.0, beta_neg: 4.0 }
    }
}

const CLAMP: f64 = 1e-12;

fn check_dims(pred: &Grid, targets: &TargetMaps) -> Result<(), LossError> {
    if pred.dims() != targets.dims() {
        return Err(LossError::ShapeMismatch { pred: pred.dims(), target: targets.dims() });
    }
    Ok(())
}

/// Focal-style center loss over a probability map.
///
/// Positives contribute (1-p)^gamma ln p; negatives contribute
/// (1-gauss)^beta p^gamma ln(1-p), so negatives under a Gaussian lobe are
/// progressively discounted. Normalized by the positive count with floor
/// 1 to keep empty scenes finite. Returns the loss and its analytic
/// gradient with respect to the (clamped) probabilities.
pub fn center_loss(
    pred: &Grid,
    targets: &TargetMaps,
    cfg: &CenterLossConfig,
) -> Result<(f64, Grid), LossError> {
    check_dims(pred, targets)?;
    let (h, w) = pred.dims();
    let k = targets.positive_count().max(1) as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            let p = pred.at(y, x).clamp(CLAMP, 1.0 - CLAMP);
            let idx = y * w + x;
            if targets.is_positive(y, x) {
                let one_minus = 1.0 - p;
                loss += one_minus.powf(cfg.gamma) * p.ln();
                grad[idx] = -(-cfg.gamma * one_minus.powf(cfg.gamma - 1.0) * p.ln()
                    + one_minus.powf(cfg.gamma) / p)
                    / k;
            } else {
                let damp = (1.0 - targets.gauss_mask.at(y, x)).powf(cfg.beta_neg);
                loss += damp * p.powf(cfg.gamma) * (1.0 - p).ln();
                grad[idx] = -damp
                    * (cfg.gamma * p.powf(cfg.gamma - 1.0) * (1.0 - p).ln()
                        - p.powf(cfg.gamma) / (1.0 - p))
                    / k;
            }
        }
    }
    Ok((-loss / k, Grid::from_vec(h, w, grad)))
}

pub fn smooth_l1(d: f64) -> f64 {
    if d.abs() < 1.0 {
        0.5 * d * d
    } else {
        d.abs() - 0.5
    }
}

fn smooth_l1_grad(d: f64) -> f64 {
    if d.abs() < 1.0 {
        d
    } else {
        d.signum()
    }
}

pub fn vanilla_l1(d: f64) -> f64 {
    d.abs()
}

// subgradient 0 at the kink keeps exact fits stationary
fn vanilla_l1_grad(d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        d.signum()
    }
}

/// Scale regression loss: mean over positive cells of the chosen L1
/// flavor applied to (pred - target).
pub fn scale_loss(
    pred: &Grid,
    targets: &TargetMaps,
    variant: ScaleVariant,
) -> Result<(f64, Grid), LossError> {
    check_dims(pred, targets)?;
    let (h, w) = pred.dims();
    let k = targets.positive_count().max(1) as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            if !targets.is_positive(y, x) {
                continue;
            }
            let d = pred.at(y, x) - targets.scale.at(y, x);
            match variant {
                ScaleVariant::Smooth => {
                    loss += smooth_l1(d);
                    grad[y * w + x] = smooth_l1_grad(d) / k;
                }
                ScaleVariant::Vanilla => {
                    loss += vanilla_l1(d);
                    grad[y * w + x] = vanilla_l1_grad(d) / k;
                }
            }
        }
    }
    Ok((loss / k, Grid::from_vec(h, w, grad)))
}

/// Offset regression loss: smooth L1 over positive cells, averaged over
/// the positives and both coordinates.
pub fn offset_loss(
    pred_x: &Grid,
    pred_y: &Grid,
    targets: &TargetMaps,
) -> Result<(f64, (Grid, Grid)), LossError> {
    check_dims(pred_x, targets)?;
    check_dims(pred_y, targets)?;
    let (h, w) = pred_x.dims();
    let k = targets.positive_count().max(1) as f64;
    let denom = 2.0 * k;
    let mut loss = 0.0;
    let mut grad_x = vec![0.0; h * w];
    let mut grad_y = vec![0.0; h * w];
    for y in 0..h {
        for x in 0..w {
            if !targets.is_positive(y, x) {
                continue;
            }
            let dx = pred_x.at(y, x) - targets.offset_x.at(y, x);
            let dy = pred_y.at(y, x) - targets.offset_y.at(y, x);
            loss += smooth_l1(dx) + smooth_l1(dy);
            grad_x[y * w + x] = smooth_l1_grad(dx) / denom;
            grad_y[y * w + x] = smooth_l1_grad(dy) / denom;
        }
    }
    Ok((loss / denom, (Grid::from_vec(h, w, grad_x), Grid::from_vec(h, w, grad_y))))
}

/// Weighted total: lambda_c * center + lambda_s * scale + lambda_o * offset.
pub fn total_loss(center: f64, scale: f64, offset: f64, weights: &LossWeights) -> f64 {
    weights.lambda_center * center + weights.lambda_scale * scale + weights.lambda_offset * offset
}
