use crate::error::CodecError;
use crate::types::{EncoderConfig, GtBox, TargetMaps};

/// Encode ground truth into stride-s target maps.
///
/// Each non-ignore box lights the map cell under its center: the center
/// map gets 1, the scale map ln(h / stride), and the offset maps the
/// fractional position of the true center inside the cell (corner-relative,
/// in [0, 1)). Centers landing exactly on a cell boundary belong to the
/// floor cell. The Gaussian mask accumulates one anisotropic Gaussian per
/// box, centered on the positive cell with sigma = extent-on-map / divisor
/// per axis, combined across boxes by pointwise max. Ignore boxes
/// contribute nothing here; they matter only to evaluation.
pub fn encode(
    gts: &[GtBox],
    input_h: usize,
    input_w: usize,
    cfg: &EncoderConfig,
) -> Result<TargetMaps, CodecError> {
    if input_h % cfg.stride != 0 || input_w % cfg.stride != 0 {
        return Err(CodecError::ShapeStrideMismatch { input_h, input_w, stride: cfg.stride });
    }
    let map_h = input_h / cfg.stride;
    let map_w = input_w / cfg.stride;
    let mut maps = TargetMaps::empty(map_h, map_w);
    let stride = cfg.stride as f64;

    for gt in gts {
        if gt.ignore {
            continue;
        }
        let (cx, cy) = gt.center();
        let fx = cx / stride;
        let fy = cy / stride;
        let ix = fx.floor() as usize;
        let iy = fy.floor() as usize;
        if ix >= map_w || iy >= map_h {
            continue; // center outside the map; nothing to encode
        }
        maps.center.set(iy, ix, 1.0);
        maps.scale.set(iy, ix, (gt.h / stride).ln());
        maps.offset_x.set(iy, ix, fx - ix as f64);
        maps.offset_y.set(iy, ix, fy - iy as f64);
        maps.pos_mask[iy * map_w + ix] = true;

        let sigma_x = (gt.w / stride) / cfg.gaussian_divisor;
        let sigma_y = (gt.h / stride) / cfg.gaussian_divisor;
        for y in 0..map_h {
            for x in 0..map_w {
                let dx = (x as f64 - ix as f64) / sigma_x;
                let dy = (y as f64 - iy as f64) / sigma_y;
                let g = (-(dx * dx + dy * dy) / 2.0).exp();
                if g > maps.gauss_mask.at(y, x) {
                    maps.gauss_mask.set(y, x, g);
                }
            }
        }
    }
    Ok(maps)
}
