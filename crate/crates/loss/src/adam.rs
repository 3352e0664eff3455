use crate::error::LossError;

/// Bias-corrected Adam over a flat parameter vector.
#[derive(Clone, Debug)]
pub struct OptimState {
    pub step: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
}

impl OptimState {
    pub fn new(param_count: usize, lr: f64) -> OptimState {
        OptimState {
            step: 0,
            lr,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            first_moment: vec![0.0; param_count],
            second_moment: vec![0.0; param_count],
        }
    }

    /// One update in place. Rejects non-finite gradients so a divergence
    /// flag can be raised by the caller instead of poisoning the state.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<(), LossError> {
        if params.len() != grads.len() || params.len() != self.first_moment.len() {
            return Err(LossError::LengthMismatch { params: params.len(), grads: grads.len() });
        }
        if let Some(idx) = grads.iter().position(|g| !g.is_finite()) {
            return Err(LossError::DivergentGradient(idx));
        }
        self.step += 1;
        let t = self.step as i32;
        let bias1 = 1.0 - self.beta1.powi(t);
        let bias2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            let g = grads[i];
            self.first_moment[i] = self.beta1 * self.first_moment[i] + (1.0 - self.beta1) * g;
            self.second_moment[i] = self.beta2 * self.second_moment[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.first_moment[i] / bias1;
            let v_hat = self.second_moment[i] / bias2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.epsilon);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_untouched() {
        let mut state = OptimState::new(3, 2e-4);
        let mut params = vec![1.0, -2.0, 0.5];
        let before = params.clone();
        state.step(&mut params, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(params, before);
        assert_eq!(state.step, 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        // With bias correction the first update is lr * g / (|g| + eps'),
        // essentially a signed learning-rate step for scalar g.
        let lr = 2e-4;
        let mut state = OptimState::new(1, lr);
        let mut params = vec![1.0];
        state.step(&mut params, &[0.3]).unwrap();
        let moved = 1.0 - params[0];
        assert!((moved - lr).abs() < 1e-8, "moved {moved}");

        let mut state = OptimState::new(1, lr);
        let mut params = vec![1.0];
        state.step(&mut params, &[-7.0]).unwrap();
        assert!((params[0] - (1.0 + lr)).abs() < 1e-8);
    }

    #[test]
    fn quadratic_bowl_converges() {
        // f(theta) = theta^2, grad = 2 theta
        let mut state = OptimState::new(1, 2e-4);
        let mut params = vec![1.0];
        for _ in 0..100_000 {
            let g = 2.0 * params[0];
            state.step(&mut params, &[g]).unwrap();
        }
        assert!(params[0].abs() < 1e-3, "theta {}", params[0]);
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let mut state = OptimState::new(2, 1e-3);
        let mut params = vec![0.0, 0.0];
        let err = state.step(&mut params, &[1.0, f64::INFINITY]).unwrap_err();
        assert!(err.to_string().contains("divergent gradient"));
        assert_eq!(state.step, 0);
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let run = || {
            let mut state = OptimState::new(2, 1e-2);
            let mut params = vec![0.4, -0.4];
            for k in 0..500 {
                let g0 = params[0] * 3.0 + (k as f64 * 0.01).sin();
                let g1 = params[1] - 0.2;
                state.step(&mut params, &[g0, g1]).unwrap();
            }
            params
        };
        let a = run();
        let b = run();
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert_eq!(a[1].to_bits(), b[1].to_bits());
    }
}
