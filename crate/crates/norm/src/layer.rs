use detkit_tensor::Tensor4;

use crate::bn::{BnCache, BnLayer};
use crate::error::NormError;
use crate::sn::{SnCache, SnLayer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// Forward cache of whichever variant produced it.
pub enum NormCache {
    Sn(SnCache),
    Bn(BnCache),
}

/// Backward results in the layer's flat parameter layout (see
/// [`NormLayer::params_flat`]), plus the input gradient.
pub struct NormBackward {
    pub dx: Tensor4,
    pub dparams: Vec<f64>,
}

/// Common interface of the interchangeable normalization variants.
///
/// Parameters are exposed as one flat vector so optimizers and weight
/// averaging can treat every variant uniformly; running statistics are
/// buffers, not parameters, and stay out of the flat view.
pub trait NormLayer: Send {
    fn kind(&self) -> &'static str;
    fn channels(&self) -> usize;
    fn forward(&mut self, x: &Tensor4, mode: Mode) -> Result<(Tensor4, NormCache), NormError>;
    fn backward(&self, cache: &NormCache, dy: &Tensor4) -> Result<NormBackward, NormError>;
    fn params_flat(&self) -> Vec<f64>;
    fn set_params_flat(&mut self, params: &[f64]);
    fn checkpoint_entries(&self, prefix: &str) -> Vec<(String, Tensor4)>;
    /// Switchable layers report themselves for the mixing-weight summary.
    fn as_sn(&self) -> Option<&SnLayer> {
        None
    }
}

impl NormLayer for SnLayer {
    fn kind(&self) -> &'static str {
        "sn"
    }

    fn channels(&self) -> usize {
        SnLayer::channels(self)
    }

    fn forward(&mut self, x: &Tensor4, mode: Mode) -> Result<(Tensor4, NormCache), NormError> {
        let (y, cache) = SnLayer::forward(self, x, mode)?;
        Ok((y, NormCache::Sn(cache)))
    }

    fn backward(&self, cache: &NormCache, dy: &Tensor4) -> Result<NormBackward, NormError> {
        let NormCache::Sn(cache) = cache else {
            return Err(NormError::CacheKindMismatch);
        };
        let g = SnLayer::backward(self, cache, dy)?;
        let mut dparams = Vec::with_capacity(2 * self.channels() + 6);
        dparams.extend_from_slice(&g.dgamma);
        dparams.extend_from_slice(&g.dbeta);
        dparams.extend_from_slice(&g.dmean_logits);
        dparams.extend_from_slice(&g.dvar_logits);
        Ok(NormBackward { dx: g.dx, dparams })
    }

    fn params_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.channels() + 6);
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.beta);
        v.extend_from_slice(&self.mean_logits);
        v.extend_from_slice(&self.var_logits);
        v
    }

    fn set_params_flat(&mut self, params: &[f64]) {
        let c = self.channels();
        assert_eq!(params.len(), 2 * c + 6, "flat parameter length");
        self.gamma.copy_from_slice(&params[..c]);
        self.beta.copy_from_slice(&params[c..2 * c]);
        self.mean_logits.copy_from_slice(&params[2 * c..2 * c + 3]);
        self.var_logits.copy_from_slice(&params[2 * c + 3..]);
    }

    fn checkpoint_entries(&self, prefix: &str) -> Vec<(String, Tensor4)> {
        SnLayer::checkpoint_entries(self, prefix)
    }

    fn as_sn(&self) -> Option<&SnLayer> {
        Some(self)
    }
}

impl NormLayer for BnLayer {
    fn kind(&self) -> &'static str {
        "bn"
    }

    fn channels(&self) -> usize {
        BnLayer::channels(self)
    }

    fn forward(&mut self, x: &Tensor4, mode: Mode) -> Result<(Tensor4, NormCache), NormError> {
        let (y, cache) = BnLayer::forward(self, x, mode)?;
        Ok((y, NormCache::Bn(cache)))
    }

    fn backward(&self, cache: &NormCache, dy: &Tensor4) -> Result<NormBackward, NormError> {
        let NormCache::Bn(cache) = cache else {
            return Err(NormError::CacheKindMismatch);
        };
        let g = BnLayer::backward(self, cache, dy)?;
        let mut dparams = Vec::with_capacity(2 * self.channels());
        dparams.extend_from_slice(&g.dgamma);
        dparams.extend_from_slice(&g.dbeta);
        Ok(NormBackward { dx: g.dx, dparams })
    }

    fn params_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.channels());
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.beta);
        v
    }

    fn set_params_flat(&mut self, params: &[f64]) {
        let c = self.channels();
        assert_eq!(params.len(), 2 * c, "flat parameter length");
        self.gamma.copy_from_slice(&params[..c]);
        self.beta.copy_from_slice(&params[c..]);
    }

    fn checkpoint_entries(&self, prefix: &str) -> Vec<(String, Tensor4)> {
        BnLayer::checkpoint_entries(self, prefix)
    }
}
