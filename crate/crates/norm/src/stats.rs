use detkit_tensor::{Axes, Tensor4};

use crate::error::NormError;

/// The three statistic families entering the switchable mix.
///
/// Instance stats are per (sample, channel), layer stats per sample, batch
/// stats per channel. All variances are population variances.
#[derive(Clone, Debug)]
pub struct NormStats {
    /// (n, c, 1, 1)
    pub mu_in: Tensor4,
    pub var_in: Tensor4,
    /// (n, 1, 1, 1)
    pub mu_ln: Tensor4,
    pub var_ln: Tensor4,
    /// (1, c, 1, 1)
    pub mu_bn: Tensor4,
    pub var_bn: Tensor4,
}

/// Instance, layer and batch statistics of `x`, each computed directly
/// from the input (layer/batch stats are not re-derived from instance
/// stats; the algebraic identity between them is a test, not a code path).
pub fn compute_stats(x: &Tensor4) -> Result<NormStats, NormError> {
    let (mu_in, var_in) = x.reduce_stats(Axes::HW)?;
    let (mu_ln, var_ln) = x.reduce_stats(Axes::CHW)?;
    let (mu_bn, var_bn) = x.reduce_stats(Axes::NHW)?;
    Ok(NormStats { mu_in, var_in, mu_ln, var_ln, mu_bn, var_bn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use detkit_tensor::Distribution;

    #[test]
    fn constant_input_stats() {
        let x = Tensor4::full((2, 3, 4, 4), 2.5);
        let s = compute_stats(&x).unwrap();
        for t in [&s.mu_in, &s.mu_ln, &s.mu_bn] {
            assert!(t.data().iter().all(|&v| v == 2.5));
        }
        for t in [&s.var_in, &s.var_ln, &s.var_bn] {
            assert!(t.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn degenerate_axes_coincide() {
        // With a single sample and single channel the three families see
        // the same element set.
        let x = Tensor4::seeded_fill((1, 1, 3, 5), 2, Distribution::Normal { mean: 0.0, std: 1.0 });
        let s = compute_stats(&x).unwrap();
        assert_eq!(s.mu_in.data()[0], s.mu_ln.data()[0]);
        assert_eq!(s.mu_in.data()[0], s.mu_bn.data()[0]);
        assert_eq!(s.var_in.data()[0], s.var_ln.data()[0]);
        assert_eq!(s.var_in.data()[0], s.var_bn.data()[0]);
    }

    #[test]
    fn matches_scalar_oracle() {
        let x = Tensor4::seeded_fill((2, 2, 2, 2), 3, Distribution::Normal { mean: 0.0, std: 1.0 });
        let s = compute_stats(&x).unwrap();
        // instance stats for sample 1, channel 0, by direct loop
        let vals: Vec<f64> = (0..2)
            .flat_map(|h| (0..2).map(move |w| (h, w)))
            .map(|(h, w)| x.at(1, 0, h, w))
            .collect();
        let mean = vals.iter().sum::<f64>() / 4.0;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 4.0;
        assert!((s.mu_in.at(1, 0, 0, 0) - mean).abs() < 1e-12);
        assert!((s.var_in.at(1, 0, 0, 0) - var).abs() < 1e-12);
    }

    #[test]
    fn layer_and_batch_identities_hold() {
        // mu_ln = mean_c(mu_in); var_ln = mean_c(var_in + mu_in^2) - mu_ln^2,
        // and the analogous identity across the batch for BN.
        let x = Tensor4::seeded_fill((3, 4, 5, 6), 8, Distribution::Uniform { lo: -1.0, hi: 4.0 });
        let (n, c, _, _) = x.shape();
        let s = compute_stats(&x).unwrap();
        for ni in 0..n {
            let mu = (0..c).map(|ci| s.mu_in.at(ni, ci, 0, 0)).sum::<f64>() / c as f64;
            let second = (0..c)
                .map(|ci| {
                    let m = s.mu_in.at(ni, ci, 0, 0);
                    s.var_in.at(ni, ci, 0, 0) + m * m
                })
                .sum::<f64>()
                / c as f64;
            assert!((s.mu_ln.at(ni, 0, 0, 0) - mu).abs() < 1e-10);
            assert!((s.var_ln.at(ni, 0, 0, 0) - (second - mu * mu)).abs() < 1e-10);
        }
        for ci in 0..c {
            let mu = (0..n).map(|ni| s.mu_in.at(ni, ci, 0, 0)).sum::<f64>() / n as f64;
            let second = (0..n)
                .map(|ni| {
                    let m = s.mu_in.at(ni, ci, 0, 0);
                    s.var_in.at(ni, ci, 0, 0) + m * m
                })
                .sum::<f64>()
                / n as f64;
            assert!((s.mu_bn.at(0, ci, 0, 0) - mu).abs() < 1e-10);
            assert!((s.var_bn.at(0, ci, 0, 0) - (second - mu * mu)).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_spatial_extent_errors() {
        let x = Tensor4::zeros((2, 3, 0, 4));
        assert!(compute_stats(&x).is_err());
    }
}
