use detkit_tensor::{Axes, Tensor4};

use crate::error::NormError;
use crate::layer::Mode;

/// Plain batch normalization with running statistics, kept independent of
/// the switchable layer so the two act as cross-checks on each other.
#[derive(Clone, Debug)]
pub struct BnLayer {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub running_var: Vec<f64>,
    pub running_initialized: bool,
    pub momentum: f64,
    pub epsilon: f64,
}

#[derive(Debug)]
pub struct BnCache {
    pub x: Tensor4,
    /// Per-channel mean/var actually used (batch in train, running in eval).
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub mode: Mode,
}

#[derive(Debug)]
pub struct BnGrads {
    pub dx: Tensor4,
    pub dgamma: Vec<f64>,
    pub dbeta: Vec<f64>,
}

impl BnLayer {
    pub fn new(channels: usize) -> BnLayer {
        BnLayer {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
            running_mean: vec![0.0; channels],
            running_var: vec![1.0; channels],
            running_initialized: false,
            momentum: 0.1,
            epsilon: 1e-5,
        }
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    pub fn forward(&mut self, x: &Tensor4, mode: Mode) -> Result<(Tensor4, BnCache), NormError> {
        let (n, c, h, w) = x.shape();
        if c != self.channels() {
            return Err(NormError::ChannelMismatch { layer: self.channels(), input: c });
        }
        let (mean, var) = match mode {
            Mode::Train => {
                let (mu, var) = x.reduce_stats(Axes::NHW)?;
                let mu: Vec<f64> = mu.data().to_vec();
                let var: Vec<f64> = var.data().to_vec();
                if !self.running_initialized {
                    self.running_mean = mu.clone();
                    self.running_var = var.clone();
                    self.running_initialized = true;
                } else {
                    for ci in 0..c {
                        self.running_mean[ci] += self.momentum * (mu[ci] - self.running_mean[ci]);
                        self.running_var[ci] += self.momentum * (var[ci] - self.running_var[ci]);
                    }
                }
                (mu, var)
            }
            Mode::Eval => {
                if !self.running_initialized {
                    return Err(NormError::UninitializedRunningStats);
                }
                (self.running_mean.clone(), self.running_var.clone())
            }
        };

        let mut y = vec![0.0; x.len()];
        for ni in 0..n {
            for ci in 0..c {
                let s = 1.0 / (var[ci] + self.epsilon).sqrt();
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = x.offset(ni, ci, hi, wi);
                        y[idx] = self.gamma[ci] * (x.data()[idx] - mean[ci]) * s + self.beta[ci];
                    }
                }
            }
        }
        let cache = BnCache { x: x.clone(), mean, var, mode };
        Ok((Tensor4::from_vec(x.shape(), y)?, cache))
    }

    pub fn backward(&self, cache: &BnCache, dy: &Tensor4) -> Result<BnGrads, NormError> {
        if dy.shape() != cache.x.shape() {
            return Err(NormError::GradientShapeMismatch { cache: cache.x.shape(), dy: dy.shape() });
        }
        let (n, c, h, w) = cache.x.shape();
        let m = (n * h * w) as f64;
        let train = cache.mode == Mode::Train;

        let mut dgamma = vec![0.0; c];
        let mut dbeta = vec![0.0; c];
        let mut dvar = vec![0.0; c];
        let mut dmu = vec![0.0; c];
        for ni in 0..n {
            for ci in 0..c {
                let s = 1.0 / (cache.var[ci] + self.epsilon).sqrt();
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = cache.x.offset(ni, ci, hi, wi);
                        let g = dy.data()[idx];
                        let centered = cache.x.data()[idx] - cache.mean[ci];
                        dgamma[ci] += g * centered * s;
                        dbeta[ci] += g;
                        let dxhat = g * self.gamma[ci];
                        dvar[ci] += -0.5 * dxhat * centered * s * s * s;
                        dmu[ci] += -dxhat * s;
                    }
                }
            }
        }

        let mut dx = vec![0.0; cache.x.len()];
        for ni in 0..n {
            for ci in 0..c {
                let s = 1.0 / (cache.var[ci] + self.epsilon).sqrt();
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = cache.x.offset(ni, ci, hi, wi);
                        let centered = cache.x.data()[idx] - cache.mean[ci];
                        let mut acc = dy.data()[idx] * self.gamma[ci] * s;
                        if train {
                            acc += dvar[ci] * 2.0 * centered / m + dmu[ci] / m;
                        }
                        dx[idx] = acc;
                    }
                }
            }
        }
        Ok(BnGrads { dx: Tensor4::from_vec(cache.x.shape(), dx)?, dgamma, dbeta })
    }

    pub fn checkpoint_entries(&self, prefix: &str) -> Vec<(String, Tensor4)> {
        let vec_t = |v: &[f64]| Tensor4::from_vec((1, v.len(), 1, 1), v.to_vec()).unwrap();
        vec![
            (format!("{prefix}gamma"), vec_t(&self.gamma)),
            (format!("{prefix}beta"), vec_t(&self.beta)),
            (format!("{prefix}running_mean"), vec_t(&self.running_mean)),
            (format!("{prefix}running_var"), vec_t(&self.running_var)),
            (
                format!("{prefix}meta"),
                Tensor4::from_vec(
                    (1, 3, 1, 1),
                    vec![
                        self.momentum,
                        self.epsilon,
                        if self.running_initialized { 1.0 } else { 0.0 },
                    ],
                )
                .unwrap(),
            ),
        ]
    }

    pub fn from_checkpoint_entries(
        prefix: &str,
        entries: &[(String, Tensor4)],
    ) -> Result<BnLayer, NormError> {
        let get = |name: &str| -> Result<Vec<f64>, NormError> {
            entries
                .iter()
                .find(|(k, _)| k == &format!("{prefix}{name}"))
                .map(|(_, t)| t.data().to_vec())
                .ok_or_else(|| NormError::UnknownKind(format!("missing checkpoint entry {name}")))
        };
        let meta = get("meta")?;
        Ok(BnLayer {
            gamma: get("gamma")?,
            beta: get("beta")?,
            running_mean: get("running_mean")?,
            running_var: get("running_var")?,
            running_initialized: meta[2] != 0.0,
            momentum: meta[0],
            epsilon: meta[1],
        })
    }
}

/// Instance normalization with affine gamma/beta: per-(sample, channel)
/// statistics over space. Comparison reference for the one-hot switchable
/// mix; stateless, so a free function.
pub fn in_forward(
    gamma: &[f64],
    beta: &[f64],
    epsilon: f64,
    x: &Tensor4,
) -> Result<Tensor4, NormError> {
    let (mu, var) = x.reduce_stats(Axes::HW)?;
    affine_normalize(gamma, beta, epsilon, x, |ni, ci| (mu.at(ni, ci, 0, 0), var.at(ni, ci, 0, 0)))
}

/// Layer normalization with affine gamma/beta: per-sample statistics over
/// channels and space.
pub fn ln_forward(
    gamma: &[f64],
    beta: &[f64],
    epsilon: f64,
    x: &Tensor4,
) -> Result<Tensor4, NormError> {
    let (mu, var) = x.reduce_stats(Axes::CHW)?;
    affine_normalize(gamma, beta, epsilon, x, |ni, _| (mu.at(ni, 0, 0, 0), var.at(ni, 0, 0, 0)))
}

fn affine_normalize(
    gamma: &[f64],
    beta: &[f64],
    epsilon: f64,
    x: &Tensor4,
    stat: impl Fn(usize, usize) -> (f64, f64),
) -> Result<Tensor4, NormError> {
    let (n, c, h, w) = x.shape();
    if c != gamma.len() {
        return Err(NormError::ChannelMismatch { layer: gamma.len(), input: c });
    }
    let mut y = vec![0.0; x.len()];
    for ni in 0..n {
        for ci in 0..c {
            let (mu, var) = stat(ni, ci);
            let s = 1.0 / (var + epsilon).sqrt();
            for hi in 0..h {
                for wi in 0..w {
                    let idx = x.offset(ni, ci, hi, wi);
                    y[idx] = gamma[ci] * (x.data()[idx] - mu) * s + beta[ci];
                }
            }
        }
    }
    Ok(Tensor4::from_vec(x.shape(), y)?)
}
