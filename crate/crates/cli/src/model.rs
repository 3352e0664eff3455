use detkit_codec::{decode, DetBox, EncoderConfig, Grid};
use detkit_norm::{Mode, NormLayer};
use detkit_tensor::{SeededRng, Tensor4};

use crate::scene::MixingMatrix;

/// Output channel order of the detection head.
pub const CH_CENTER: usize = 0;
pub const CH_SCALE: usize = 1;
pub const CH_OFFSET_X: usize = 2;
pub const CH_OFFSET_Y: usize = 3;

/// Logit gain of the oracle head: sigmoid(GAIN * (gauss - 1/2)) is ~0.998
/// at positives and ~0.002 on empty background.
pub const ORACLE_LOGIT_GAIN: f64 = 12.0;

/// Per-pixel affine map from feature channels to the four prediction
/// channels (center logit, scale, offset x, offset y).
#[derive(Clone, Debug)]
pub struct PixelHead {
    pub in_channels: usize,
    /// Row-major (4 x in_channels).
    pub weight: Vec<f64>,
    pub bias: [f64; 4],
}

impl PixelHead {
    pub fn zeros(in_channels: usize) -> PixelHead {
        PixelHead { in_channels, weight: vec![0.0; 4 * in_channels], bias: [0.0; 4] }
    }

    /// Small random init, deterministic per seed.
    pub fn seeded(in_channels: usize, seed: u64) -> PixelHead {
        let mut rng = SeededRng::new(seed);
        PixelHead {
            in_channels,
            weight: (0..4 * in_channels).map(|_| 0.1 * rng.standard_normal()).collect(),
            bias: [0.0; 4],
        }
    }

    /// The exact inverse of the feature mixing: recovers the Gaussian mask
    /// (as a sharp logit), scale and offsets from noise-free features.
    pub fn oracle(mixing: &MixingMatrix) -> PixelHead {
        let c = mixing.channels;
        let mut head = PixelHead::zeros(c);
        for ci in 0..c {
            head.weight[CH_CENTER * c + ci] = ORACLE_LOGIT_GAIN * mixing.inverse[ci];
            head.weight[CH_SCALE * c + ci] = mixing.inverse[c + ci];
            head.weight[CH_OFFSET_X * c + ci] = mixing.inverse[2 * c + ci];
            head.weight[CH_OFFSET_Y * c + ci] = mixing.inverse[3 * c + ci];
        }
        head.bias[CH_CENTER] = -ORACLE_LOGIT_GAIN / 2.0;
        head
    }

    pub fn forward(&self, x: &Tensor4) -> Tensor4 {
        let (n, c, h, w) = x.shape();
        assert_eq!(c, self.in_channels, "head input channels");
        let plane = h * w;
        let mut out = vec![0.0; n * 4 * plane];
        for ni in 0..n {
            for k in 0..4 {
                for ci in 0..c {
                    let wkc = self.weight[k * c + ci];
                    if wkc == 0.0 {
                        continue;
                    }
                    let src = (ni * c + ci) * plane;
                    let dst = (ni * 4 + k) * plane;
                    for p in 0..plane {
                        out[dst + p] += wkc * x.data()[src + p];
                    }
                }
                let dst = (ni * 4 + k) * plane;
                for p in 0..plane {
                    out[dst + p] += self.bias[k];
                }
            }
        }
        Tensor4::from_vec((n, 4, h, w), out).unwrap()
    }

    /// Gradients of a scalar loss through the head: returns (dx, dweight,
    /// dbias) given the input and the loss gradient at the output.
    pub fn backward(&self, x: &Tensor4, dout: &Tensor4) -> (Tensor4, Vec<f64>, [f64; 4]) {
        let (n, c, h, w) = x.shape();
        let plane = h * w;
        let mut dx = vec![0.0; x.len()];
        let mut dweight = vec![0.0; 4 * c];
        let mut dbias = [0.0; 4];
        for ni in 0..n {
            for k in 0..4 {
                let out_base = (ni * 4 + k) * plane;
                for ci in 0..c {
                    let in_base = (ni * c + ci) * plane;
                    let wkc = self.weight[k * c + ci];
                    let mut wacc = 0.0;
                    for p in 0..plane {
                        let g = dout.data()[out_base + p];
                        wacc += g * x.data()[in_base + p];
                        dx[in_base + p] += wkc * g;
                    }
                    dweight[k * c + ci] += wacc;
                }
                for p in 0..plane {
                    dbias[k] += dout.data()[out_base + p];
                }
            }
        }
        (Tensor4::from_vec(x.shape(), dx).unwrap(), dweight, dbias)
    }

    pub fn params_flat(&self) -> Vec<f64> {
        let mut v = self.weight.clone();
        v.extend_from_slice(&self.bias);
        v
    }

    pub fn set_params_flat(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.weight.len() + 4);
        self.weight.copy_from_slice(&params[..self.weight.len()]);
        self.bias.copy_from_slice(&params[self.weight.len()..]);
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Head outputs for one sample, as prediction grids (center after
/// sigmoid).
pub struct PredictionMaps {
    pub center: Grid,
    pub scale: Grid,
    pub offset_x: Grid,
    pub offset_y: Grid,
}

pub fn prediction_maps(out: &Tensor4, sample: usize) -> PredictionMaps {
    let grid = |ch: usize| Grid::from_tensor_channel(out, sample, ch).unwrap();
    PredictionMaps {
        center: grid(CH_CENTER).map(sigmoid),
        scale: grid(CH_SCALE),
        offset_x: grid(CH_OFFSET_X),
        offset_y: grid(CH_OFFSET_Y),
    }
}

/// Decode one sample of raw head outputs into detections.
pub fn decode_sample(
    out: &Tensor4,
    sample: usize,
    cfg: &EncoderConfig,
    r: f64,
) -> Vec<DetBox> {
    let maps = prediction_maps(out, sample);
    decode(&maps.center, &maps.scale, &maps.offset_x, &maps.offset_y, cfg, r)
        .expect("prediction maps share one shape")
        .boxes
}

/// Trainable model: a registered normalization layer feeding the pixel
/// head. Parameters live in one flat vector, norm first.
pub struct Model {
    pub norm: Box<dyn NormLayer>,
    pub head: PixelHead,
}

impl Model {
    pub fn new(norm: Box<dyn NormLayer>, head: PixelHead) -> Model {
        Model { norm, head }
    }

    pub fn params_flat(&self) -> Vec<f64> {
        let mut v = self.norm.params_flat();
        v.extend(self.head.params_flat());
        v
    }

    pub fn set_params_flat(&mut self, params: &[f64]) {
        let norm_len = self.norm.params_flat().len();
        self.norm.set_params_flat(&params[..norm_len]);
        self.head.set_params_flat(&params[norm_len..]);
    }

    /// Normalization (in the given mode) followed by the head.
    pub fn forward(&mut self, x: &Tensor4, mode: Mode) -> (Tensor4, Tensor4, detkit_norm::NormCache) {
        let (xn, cache) = self.norm.forward(x, mode).expect("model forward");
        let out = self.head.forward(&xn);
        (xn, out, cache)
    }

    pub fn checkpoint_entries(&self) -> Vec<(String, Tensor4)> {
        let mut entries = self.norm.checkpoint_entries("norm.");
        let c = self.head.in_channels;
        entries.push((
            "head.weight".to_string(),
            Tensor4::from_vec((1, 1, 4, c), self.head.weight.clone()).unwrap(),
        ));
        entries.push((
            "head.bias".to_string(),
            Tensor4::from_vec((1, 4, 1, 1), self.head.bias.to_vec()).unwrap(),
        ));
        entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use detkit_tensor::Distribution;

    #[test]
    fn head_forward_matches_loop_oracle() {
        let head = PixelHead::seeded(3, 5);
        let x = Tensor4::seeded_fill((2, 3, 2, 2), 9, Distribution::Normal { mean: 0.0, std: 1.0 });
        let y = head.forward(&x);
        for ni in 0..2 {
            for k in 0..4 {
                for hi in 0..2 {
                    for wi in 0..2 {
                        let mut expect = head.bias[k];
                        for ci in 0..3 {
                            expect += head.weight[k * 3 + ci] * x.at(ni, ci, hi, wi);
                        }
                        assert!((y.at(ni, k, hi, wi) - expect).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn head_backward_matches_finite_differences() {
        use detkit_tensor::check::relative_error;
        let head = PixelHead::seeded(3, 6);
        let x = Tensor4::seeded_fill((1, 3, 2, 2), 10, Distribution::Normal { mean: 0.0, std: 1.0 });
        let g = Tensor4::seeded_fill((1, 4, 2, 2), 11, Distribution::Normal { mean: 0.0, std: 1.0 });
        let loss = |head: &PixelHead, x: &Tensor4| -> f64 {
            head.forward(x).data().iter().zip(g.data()).map(|(a, b)| a * b).sum()
        };
        let (dx, dw, db) = head.backward(&x, &g);
        let step = 1e-6;
        for idx in 0..x.len() {
            let mut plus = x.data().to_vec();
            plus[idx] += step;
            let mut minus = x.data().to_vec();
            minus[idx] -= step;
            let num = (loss(&head, &Tensor4::from_vec(x.shape(), plus).unwrap())
                - loss(&head, &Tensor4::from_vec(x.shape(), minus).unwrap()))
                / (2.0 * step);
            assert!(relative_error(dx.data()[idx], num) < 1e-6);
        }
        for idx in 0..dw.len() {
            let mut plus = head.clone();
            plus.weight[idx] += step;
            let mut minus = head.clone();
            minus.weight[idx] -= step;
            let num = (loss(&plus, &x) - loss(&minus, &x)) / (2.0 * step);
            assert!(relative_error(dw[idx], num) < 1e-6);
        }
        for k in 0..4 {
            let mut plus = head.clone();
            plus.bias[k] += step;
            let mut minus = head.clone();
            minus.bias[k] -= step;
            let num = (loss(&plus, &x) - loss(&minus, &x)) / (2.0 * step);
            assert!(relative_error(db[k], num) < 1e-6);
        }
    }

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert!(sigmoid(800.0) <= 1.0);
        assert!(sigmoid(-800.0) >= 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
    }
}
