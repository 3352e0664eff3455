//! Reduction and broadcast results checked against naive scalar loops.

use detkit_tensor::{Axes, Distribution, Tensor4};

/// Scalar-loop statistics: mean/variance per channel over (N, H, W),
/// written with nothing but nested loops and index arithmetic.
fn per_channel_stats_oracle(x: &Tensor4) -> (Vec<f64>, Vec<f64>) {
    let (n, c, h, w) = x.shape();
    let mut means = vec![0.0; c];
    let mut vars = vec![0.0; c];
    for ci in 0..c {
        let mut sum = 0.0;
        let mut count = 0usize;
        for ni in 0..n {
            for hi in 0..h {
                for wi in 0..w {
                    sum += x.at(ni, ci, hi, wi);
                    count += 1;
                }
            }
        }
        let mean = sum / count as f64;
        let mut sq = 0.0;
        for ni in 0..n {
            for hi in 0..h {
                for wi in 0..w {
                    let d = x.at(ni, ci, hi, wi) - mean;
                    sq += d * d;
                }
            }
        }
        means[ci] = mean;
        vars[ci] = sq / count as f64;
    }
    (means, vars)
}

#[test]
fn per_channel_stats_match_loop_oracle() {
    let x = Tensor4::seeded_fill((2, 3, 4, 4), 7, Distribution::Normal { mean: 0.0, std: 1.0 });
    let (mean, var) = x.reduce_stats(Axes::NHW).unwrap();
    let (mean_ref, var_ref) = per_channel_stats_oracle(&x);
    for ci in 0..3 {
        assert!((mean.at(0, ci, 0, 0) - mean_ref[ci]).abs() < 1e-12);
        assert!((var.at(0, ci, 0, 0) - var_ref[ci]).abs() < 1e-12);
    }
}

#[test]
fn broadcast_add_matches_loop_oracle() {
    let x = Tensor4::seeded_fill((2, 3, 4, 4), 11, Distribution::Uniform { lo: -2.0, hi: 2.0 });
    let bias = Tensor4::from_vec((1, 3, 1, 1), vec![0.5, -1.5, 3.0]).unwrap();
    let y = x.combine(&bias, |a, b| a + b).unwrap();
    for ni in 0..2 {
        for ci in 0..3 {
            for hi in 0..4 {
                for wi in 0..4 {
                    let expect = x.at(ni, ci, hi, wi) + bias.at(0, ci, 0, 0);
                    assert_eq!(y.at(ni, ci, hi, wi), expect);
                }
            }
        }
    }
}

#[test]
fn variance_is_nonnegative_across_seeds() {
    for seed in 0..20 {
        let x = Tensor4::seeded_fill(
            (2, 3, 3, 3),
            seed,
            Distribution::Normal { mean: 5.0, std: 0.001 },
        );
        for axes in [Axes::HW, Axes::CHW, Axes::NHW, Axes::ALL] {
            let (_, var) = x.reduce_stats(axes).unwrap();
            assert!(var.data().iter().all(|&v| v >= 0.0));
        }
    }
}
