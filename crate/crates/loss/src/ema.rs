/// Exponential moving average of a flat parameter vector:
/// shadow <- decay * shadow + (1 - decay) * params. Swapping the shadow in
/// for evaluation and back out again is a single call each way.
#[derive(Clone, Debug)]
pub struct EmaState {
    pub decay: f64,
    shadow: Vec<f64>,
}

impl EmaState {
    pub fn new(params: &[f64], decay: f64) -> EmaState {
        EmaState { decay, shadow: params.to_vec() }
    }

    pub fn update(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.shadow.len(), "parameter length");
        for (s, &p) in self.shadow.iter_mut().zip(params) {
            *s = self.decay * *s + (1.0 - self.decay) * p;
        }
    }

    pub fn shadow(&self) -> &[f64] {
        &self.shadow
    }

    /// Exchange shadow and live values; calling twice restores both.
    pub fn swap(&mut self, params: &mut [f64]) {
        assert_eq!(params.len(), self.shadow.len(), "parameter length");
        for (s, p) in self.shadow.iter_mut().zip(params.iter_mut()) {
            std::mem::swap(s, p);
        }
    }
}
