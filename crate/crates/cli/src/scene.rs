use detkit_codec::{encode, iou_xywh, EncoderConfig, GtBox, TargetMaps};
use detkit_tensor::{SeededRng, Tensor4};
use serde::Serialize;

/// Scene generator settings. Heights are log-uniform, aspect is fixed,
/// visibility is sampled over the three occlusion bands so every
/// evaluation subset sees ground truth.
#[derive(Clone, Debug, Serialize)]
pub struct SceneConfig {
    pub image_h: usize,
    pub image_w: usize,
    pub stride: usize,
    pub channels: usize,
    pub count_min: usize,
    pub count_max: usize,
    pub height_min: f64,
    pub height_max: f64,
    pub aspect: f64,
    pub noise_sigma: f64,
    /// Reject placements overlapping an accepted box at or above this IoU;
    /// 1.0 disables the constraint (crowd scenes).
    pub max_pairwise_iou: f64,
    /// Seed of the fixed mixing matrix (not of the per-scene randomness).
    pub mixing_seed: u64,
}

impl Default for SceneConfig {
    fn default() -> SceneConfig {
        SceneConfig {
            image_h: 256,
            image_w: 512,
            stride: 4,
            channels: 8,
            count_min: 3,
            count_max: 8,
            height_min: 40.0,
            height_max: 200.0,
            aspect: 0.41,
            noise_sigma: 0.05,
            max_pairwise_iou: 0.45,
            mixing_seed: 777,
        }
    }
}

impl SceneConfig {
    pub fn map_dims(&self) -> (usize, usize) {
        (self.image_h / self.stride, self.image_w / self.stride)
    }

    /// Dense crowd variant: overlap constraint off, tall boxes packed into
    /// a horizontal band.
    pub fn crowd(mut self) -> SceneConfig {
        self.count_min = 12;
        self.count_max = 18;
        self.height_min = 120.0;
        self.height_max = 200.0;
        self.max_pairwise_iou = 1.0;
        self
    }
}

/// The fixed channel mixing: features = M * [gauss, scale, offset_x,
/// offset_y] + noise. `M` is (channels x 4), seeded once per fixture; its
/// left inverse gives the oracle head.
#[derive(Clone, Debug)]
pub struct MixingMatrix {
    pub channels: usize,
    /// Row-major (channels x 4).
    pub forward: Vec<f64>,
    /// Row-major (4 x channels), left inverse: inverse * forward = I4.
    pub inverse: Vec<f64>,
}

impl MixingMatrix {
    pub fn seeded(channels: usize, seed: u64) -> MixingMatrix {
        assert!(channels >= 4, "need at least 4 channels to invert the mixing");
        let mut rng = SeededRng::new(seed);
        let forward: Vec<f64> = (0..channels * 4).map(|_| rng.standard_normal()).collect();
        let inverse = left_inverse(&forward, channels);
        MixingMatrix { channels, forward, inverse }
    }

    pub fn to_tensor(&self) -> Tensor4 {
        Tensor4::from_vec((1, 1, self.channels, 4), self.forward.clone()).unwrap()
    }
}

/// (M^T M)^{-1} M^T for an (n x 4) matrix via Gauss-Jordan on the 4x4
/// normal matrix.
fn left_inverse(m: &[f64], n: usize) -> Vec<f64> {
    let mut mtm = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for row in 0..n {
                acc += m[row * 4 + i] * m[row * 4 + j];
            }
            mtm[i][j] = acc;
        }
    }
    // augment with identity and eliminate
    let mut aug = [[0.0f64; 8]; 4];
    for i in 0..4 {
        aug[i][..4].copy_from_slice(&mtm[i]);
        aug[i][4 + i] = 1.0;
    }
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| aug[a][col].abs().partial_cmp(&aug[b][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-12, "mixing matrix is rank deficient");
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for row in 0..4 {
            if row != col {
                let factor = aug[row][col];
                for k in 0..8 {
                    aug[row][k] -= factor * aug[col][k];
                }
            }
        }
    }
    // inverse = (M^T M)^{-1} M^T, shape (4 x n)
    let mut out = vec![0.0; 4 * n];
    for i in 0..4 {
        for col in 0..n {
            let mut acc = 0.0;
            for j in 0..4 {
                acc += aug[i][4 + j] * m[col * 4 + j];
            }
            out[i * n + col] = acc;
        }
    }
    out
}

/// One synthetic scene: map-resolution features, the boxes that generated
/// them, and their target encoding.
#[derive(Clone, Debug)]
pub struct Scene {
    pub features: Tensor4,
    pub gts: Vec<GtBox>,
    pub maps: TargetMaps,
    /// Boxes requested but not placed within the retry budget.
    pub placement_failures: usize,
}

fn sample_visibility(rng: &mut SeededRng) -> f64 {
    let u = rng.unit();
    if u < 0.55 {
        rng.uniform(0.905, 0.999)
    } else if u < 0.8 {
        rng.uniform(0.66, 0.895)
    } else {
        rng.uniform(0.2, 0.645)
    }
}

/// Deterministic scene synthesis.
///
/// Boxes are placed whole inside the image with distinct center cells
/// (and, below `max_pairwise_iou`, limited mutual overlap); failures after
/// the retry budget are counted, not fatal. Features mix the Gaussian
/// mask, scale and offset maps through the fixed matrix, plus per-channel
/// Gaussian noise.
pub fn generate_scene(cfg: &SceneConfig, seed: u64) -> Scene {
    let mut rng = SeededRng::new(seed);
    let (map_h, map_w) = cfg.map_dims();
    let stride = cfg.stride as f64;

    let count = rng.uniform_usize(cfg.count_min, cfg.count_max);
    let mut gts: Vec<GtBox> = Vec::with_capacity(count);
    let mut occupied = std::collections::HashSet::new();
    let mut placement_failures = 0usize;
    for _ in 0..count {
        let mut placed = false;
        for _ in 0..50 {
            let h = (rng.uniform(cfg.height_min.ln(), cfg.height_max.ln())).exp();
            let w = cfg.aspect * h;
            if w + 2.0 >= cfg.image_w as f64 || h + 2.0 >= cfg.image_h as f64 {
                continue;
            }
            let cx = rng.uniform(w / 2.0 + 1.0, cfg.image_w as f64 - w / 2.0 - 1.0);
            let cy = rng.uniform(h / 2.0 + 1.0, cfg.image_h as f64 - h / 2.0 - 1.0);
            let cell = ((cy / stride).floor() as usize, (cx / stride).floor() as usize);
            if cell.0 >= map_h || cell.1 >= map_w || occupied.contains(&cell) {
                continue;
            }
            let x = cx - w / 2.0;
            let y = cy - h / 2.0;
            if cfg.max_pairwise_iou < 1.0
                && gts.iter().any(|g| {
                    iou_xywh(g.x, g.y, g.w, g.h, x, y, w, h) >= cfg.max_pairwise_iou
                })
            {
                continue;
            }
            occupied.insert(cell);
            let visibility = sample_visibility(&mut rng);
            gts.push(GtBox { x, y, w, h, visibility, ignore: false });
            placed = true;
            break;
        }
        if !placed {
            placement_failures += 1;
        }
    }

    let encoder = EncoderConfig { stride: cfg.stride, ..EncoderConfig::default() };
    let maps = encode(&gts, cfg.image_h, cfg.image_w, &encoder)
        .expect("scene dimensions are stride-aligned by construction");

    let mixing = MixingMatrix::seeded(cfg.channels, cfg.mixing_seed);
    let sources =
        [maps.gauss_mask.data(), maps.scale.data(), maps.offset_x.data(), maps.offset_y.data()];
    let plane = map_h * map_w;
    let mut features = vec![0.0; cfg.channels * plane];
    for c in 0..cfg.channels {
        for p in 0..plane {
            let mut acc = 0.0;
            for (j, source) in sources.iter().enumerate() {
                acc += mixing.forward[c * 4 + j] * source[p];
            }
            features[c * plane + p] = acc;
        }
    }
    if cfg.noise_sigma > 0.0 {
        for v in features.iter_mut() {
            *v += cfg.noise_sigma * rng.standard_normal();
        }
    }

    Scene {
        features: Tensor4::from_vec((1, cfg.channels, map_h, map_w), features).unwrap(),
        gts,
        maps,
        placement_failures,
    }
}
