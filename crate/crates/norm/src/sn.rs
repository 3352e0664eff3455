use detkit_tensor::Tensor4;

use crate::error::NormError;
use crate::layer::Mode;
use crate::stats::{compute_stats, NormStats};

/// Numerically stable softmax over three logits.
pub fn softmax3(logits: [f64; 3]) -> [f64; 3] {
    let m = logits[0].max(logits[1]).max(logits[2]);
    let e = [(logits[0] - m).exp(), (logits[1] - m).exp(), (logits[2] - m).exp()];
    let s = e[0] + e[1] + e[2];
    [e[0] / s, e[1] / s, e[2] / s]
}

/// Mixing-weight order used throughout: instance, layer, batch.
pub const KIND_IN: usize = 0;
pub const KIND_LN: usize = 1;
pub const KIND_BN: usize = 2;

/// Switchable normalization layer.
///
/// One logit triple per layer gates the means and another the variances;
/// softmax of each triple gives the mixing proportions. Per-channel affine
/// gamma/beta follow the normalization. Running batch statistics are kept
/// for eval mode (instance and layer statistics always come from the
/// input itself).
#[derive(Clone, Debug)]
pub struct SnLayer {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    /// Order: (IN, LN, BN).
    pub mean_logits: [f64; 3],
    pub var_logits: [f64; 3],
    pub running_bn_mean: Vec<f64>,
    pub running_bn_var: Vec<f64>,
    pub running_initialized: bool,
    pub momentum: f64,
    pub epsilon: f64,
}

#[derive(Debug)]
pub struct SnCache {
    pub x: Tensor4,
    pub stats: NormStats,
    pub mean_weights: [f64; 3],
    pub var_weights: [f64; 3],
    pub inv_std: Tensor4,
    pub x_hat: Tensor4,
    pub mode: Mode,
    pub override_active: bool,
}

#[derive(Debug)]
pub struct SnGrads {
    pub dx: Tensor4,
    pub dgamma: Vec<f64>,
    pub dbeta: Vec<f64>,
    pub dmean_logits: [f64; 3],
    pub dvar_logits: [f64; 3],
}

impl SnLayer {
    /// Neutral initialization: identity affine, uniform 1/3 mixing weights,
    /// momentum 0.1, epsilon 1e-5.
    pub fn new(channels: usize) -> SnLayer {
        SnLayer {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
            mean_logits: [0.0; 3],
            var_logits: [0.0; 3],
            running_bn_mean: vec![0.0; channels],
            running_bn_var: vec![1.0; channels],
            running_initialized: false,
            momentum: 0.1,
            epsilon: 1e-5,
        }
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    pub fn forward(&mut self, x: &Tensor4, mode: Mode) -> Result<(Tensor4, SnCache), NormError> {
        self.forward_with_override(x, mode, None)
    }

    /// Forward pass. `weight_override` replaces the softmax outputs with
    /// exact (mean, variance) weight triples; each must sum to 1. Intended
    /// for tests pinning one-hot mixes.
    pub fn forward_with_override(
        &mut self,
        x: &Tensor4,
        mode: Mode,
        weight_override: Option<([f64; 3], [f64; 3])>,
    ) -> Result<(Tensor4, SnCache), NormError> {
        let (n, c, h, w) = x.shape();
        if c != self.channels() {
            return Err(NormError::ChannelMismatch { layer: self.channels(), input: c });
        }

        let (mean_weights, var_weights, override_active) = match weight_override {
            Some((wm, wv)) => {
                for weights in [wm, wv] {
                    let sum: f64 = weights.iter().sum();
                    if (sum - 1.0).abs() > 1e-9 {
                        return Err(NormError::BadWeightOverride(sum));
                    }
                }
                (wm, wv, true)
            }
            None => (softmax3(self.mean_logits), softmax3(self.var_logits), false),
        };

        let mut stats = compute_stats(x)?;
        match mode {
            Mode::Train => {
                // Fold the fresh batch statistics into the running ones:
                // running <- (1 - momentum) * running + momentum * batch.
                if !self.running_initialized {
                    for ci in 0..c {
                        self.running_bn_mean[ci] = stats.mu_bn.at(0, ci, 0, 0);
                        self.running_bn_var[ci] = stats.var_bn.at(0, ci, 0, 0);
                    }
                    self.running_initialized = true;
                } else {
                    for ci in 0..c {
                        let m = stats.mu_bn.at(0, ci, 0, 0);
                        let v = stats.var_bn.at(0, ci, 0, 0);
                        self.running_bn_mean[ci] += self.momentum * (m - self.running_bn_mean[ci]);
                        self.running_bn_var[ci] += self.momentum * (v - self.running_bn_var[ci]);
                    }
                }
            }
            Mode::Eval => {
                if !self.running_initialized {
                    return Err(NormError::UninitializedRunningStats);
                }
                stats.mu_bn = Tensor4::from_vec((1, c, 1, 1), self.running_bn_mean.clone())?;
                stats.var_bn = Tensor4::from_vec((1, c, 1, 1), self.running_bn_var.clone())?;
            }
        }

        let mut y = vec![0.0; x.len()];
        let mut inv_std = vec![0.0; x.len()];
        let mut x_hat = vec![0.0; x.len()];
        for ni in 0..n {
            for ci in 0..c {
                let mu = mean_weights[KIND_IN] * stats.mu_in.at(ni, ci, 0, 0)
                    + mean_weights[KIND_LN] * stats.mu_ln.at(ni, 0, 0, 0)
                    + mean_weights[KIND_BN] * stats.mu_bn.at(0, ci, 0, 0);
                let var = var_weights[KIND_IN] * stats.var_in.at(ni, ci, 0, 0)
                    + var_weights[KIND_LN] * stats.var_ln.at(ni, 0, 0, 0)
                    + var_weights[KIND_BN] * stats.var_bn.at(0, ci, 0, 0);
                let s = 1.0 / (var + self.epsilon).sqrt();
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = x.offset(ni, ci, hi, wi);
                        let xh = (x.data()[idx] - mu) * s;
                        inv_std[idx] = s;
                        x_hat[idx] = xh;
                        y[idx] = self.gamma[ci] * xh + self.beta[ci];
                    }
                }
            }
        }

        let cache = SnCache {
            x: x.clone(),
            stats,
            mean_weights,
            var_weights,
            inv_std: Tensor4::from_vec(x.shape(), inv_std)?,
            x_hat: Tensor4::from_vec(x.shape(), x_hat)?,
            mode,
            override_active,
        };
        Ok((Tensor4::from_vec(x.shape(), y)?, cache))
    }

    /// Exact gradients of the forward map with respect to the input, the
    /// affine parameters, and both logit triples.
    ///
    /// The statistics are treated as functions of `x` with total
    /// derivatives d(mu)/dx_i = 1/M and d(var)/dx_i = 2 (x_i - mu) / M over
    /// their group of M elements; in eval mode the batch statistics are
    /// running constants and contribute nothing to `dx`. With an active
    /// weight override the softmax is bypassed, so logit gradients are
    /// zero.
    pub fn backward(&self, cache: &SnCache, dy: &Tensor4) -> Result<SnGrads, NormError> {
        if dy.shape() != cache.x.shape() {
            return Err(NormError::GradientShapeMismatch { cache: cache.x.shape(), dy: dy.shape() });
        }
        let (n, c, h, w) = cache.x.shape();
        let hw = (h * w) as f64;
        let chw = (c * h * w) as f64;
        let nhw = (n * h * w) as f64;
        let wm = cache.mean_weights;
        let wv = cache.var_weights;
        let stats = &cache.stats;

        let mut dgamma = vec![0.0; c];
        let mut dbeta = vec![0.0; c];
        // Upstream gradients flowing into each statistic's group slot.
        let mut dmu_in = vec![0.0; n * c];
        let mut dvar_in = vec![0.0; n * c];
        let mut dmu_ln = vec![0.0; n];
        let mut dvar_ln = vec![0.0; n];
        let mut dmu_bn = vec![0.0; c];
        let mut dvar_bn = vec![0.0; c];
        let mut dw_mean = [0.0; 3];
        let mut dw_var = [0.0; 3];

        for ni in 0..n {
            for ci in 0..c {
                let mu_in = stats.mu_in.at(ni, ci, 0, 0);
                let mu_ln = stats.mu_ln.at(ni, 0, 0, 0);
                let mu_bn = stats.mu_bn.at(0, ci, 0, 0);
                let var_in = stats.var_in.at(ni, ci, 0, 0);
                let var_ln = stats.var_ln.at(ni, 0, 0, 0);
                let var_bn = stats.var_bn.at(0, ci, 0, 0);
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = cache.x.offset(ni, ci, hi, wi);
                        let g = dy.data()[idx];
                        let xh = cache.x_hat.data()[idx];
                        let s = cache.inv_std.data()[idx];
                        dgamma[ci] += g * xh;
                        dbeta[ci] += g;
                        let dxhat = g * self.gamma[ci];
                        // mixed mean and variance receive:
                        let dmi = -dxhat * s;
                        let dvi = -0.5 * dxhat * xh * s * s;
                        dmu_in[ni * c + ci] += wm[KIND_IN] * dmi;
                        dvar_in[ni * c + ci] += wv[KIND_IN] * dvi;
                        dmu_ln[ni] += wm[KIND_LN] * dmi;
                        dvar_ln[ni] += wv[KIND_LN] * dvi;
                        dmu_bn[ci] += wm[KIND_BN] * dmi;
                        dvar_bn[ci] += wv[KIND_BN] * dvi;
                        dw_mean[KIND_IN] += dmi * mu_in;
                        dw_mean[KIND_LN] += dmi * mu_ln;
                        dw_mean[KIND_BN] += dmi * mu_bn;
                        dw_var[KIND_IN] += dvi * var_in;
                        dw_var[KIND_LN] += dvi * var_ln;
                        dw_var[KIND_BN] += dvi * var_bn;
                    }
                }
            }
        }

        let train = cache.mode == Mode::Train;
        let mut dx = vec![0.0; cache.x.len()];
        for ni in 0..n {
            for ci in 0..c {
                let mu_in = stats.mu_in.at(ni, ci, 0, 0);
                let mu_ln = stats.mu_ln.at(ni, 0, 0, 0);
                let mu_bn = stats.mu_bn.at(0, ci, 0, 0);
                for hi in 0..h {
                    for wi in 0..w {
                        let idx = cache.x.offset(ni, ci, hi, wi);
                        let xv = cache.x.data()[idx];
                        let dxhat = dy.data()[idx] * self.gamma[ci];
                        let mut acc = dxhat * cache.inv_std.data()[idx];
                        acc += dmu_in[ni * c + ci] / hw
                            + dvar_in[ni * c + ci] * 2.0 * (xv - mu_in) / hw;
                        acc += dmu_ln[ni] / chw + dvar_ln[ni] * 2.0 * (xv - mu_ln) / chw;
                        if train {
                            acc += dmu_bn[ci] / nhw + dvar_bn[ci] * 2.0 * (xv - mu_bn) / nhw;
                        }
                        dx[idx] = acc;
                    }
                }
            }
        }

        let (dmean_logits, dvar_logits) = if cache.override_active {
            ([0.0; 3], [0.0; 3])
        } else {
            (softmax_backward(wm, dw_mean), softmax_backward(wv, dw_var))
        };

        Ok(SnGrads {
            dx: Tensor4::from_vec(cache.x.shape(), dx)?,
            dgamma,
            dbeta,
            dmean_logits,
            dvar_logits,
        })
    }

    /// Named parameter and buffer tensors for checkpointing.
    pub fn checkpoint_entries(&self, prefix: &str) -> Vec<(String, Tensor4)> {
        let c = self.channels();
        let vec_t = |v: &[f64]| Tensor4::from_vec((1, v.len(), 1, 1), v.to_vec()).unwrap();
        vec![
            (format!("{prefix}gamma"), vec_t(&self.gamma)),
            (format!("{prefix}beta"), vec_t(&self.beta)),
            (format!("{prefix}mean_logits"), vec_t(&self.mean_logits)),
            (format!("{prefix}var_logits"), vec_t(&self.var_logits)),
            (format!("{prefix}running_bn_mean"), vec_t(&self.running_bn_mean)),
            (format!("{prefix}running_bn_var"), vec_t(&self.running_bn_var)),
            (
                format!("{prefix}meta"),
                Tensor4::from_vec(
                    (1, 4, 1, 1),
                    vec![
                        c as f64,
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
    ) -> Result<SnLayer, NormError> {
        let get = |name: &str| -> Result<Vec<f64>, NormError> {
            entries
                .iter()
                .find(|(k, _)| k == &format!("{prefix}{name}"))
                .map(|(_, t)| t.data().to_vec())
                .ok_or_else(|| NormError::UnknownKind(format!("missing checkpoint entry {name}")))
        };
        let meta = get("meta")?;
        let triple = |v: Vec<f64>| -> [f64; 3] { [v[0], v[1], v[2]] };
        Ok(SnLayer {
            gamma: get("gamma")?,
            beta: get("beta")?,
            mean_logits: triple(get("mean_logits")?),
            var_logits: triple(get("var_logits")?),
            running_bn_mean: get("running_bn_mean")?,
            running_bn_var: get("running_bn_var")?,
            running_initialized: meta[3] != 0.0,
            momentum: meta[1],
            epsilon: meta[2],
        })
    }
}

/// Jacobian-vector product of softmax: dlogit_a = w_a (dw_a - sum_b dw_b w_b).
fn softmax_backward(weights: [f64; 3], dweights: [f64; 3]) -> [f64; 3] {
    let dot = dweights[0] * weights[0] + dweights[1] * weights[1] + dweights[2] * weights[2];
    [
        weights[0] * (dweights[0] - dot),
        weights[1] * (dweights[1] - dot),
        weights[2] * (dweights[2] - dot),
    ]
}
