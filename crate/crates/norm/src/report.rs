//! Per-part summary of learned mixing proportions: for each named part of
//! a network, the average softmax weights of its switchable layers, means
//! and variances reported separately.

use std::io::Write;
use std::path::Path;

use crate::error::NormError;
use crate::sn::{softmax3, SnLayer};

#[derive(Clone, Debug, PartialEq)]
pub struct PartWeights {
    pub part: String,
    pub layer_count: usize,
    /// Average softmax(mean_logits), order (IN, LN, BN).
    pub mean_weights: [f64; 3],
    /// Average softmax(var_logits), order (IN, LN, BN).
    pub var_weights: [f64; 3],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightReport {
    pub parts: Vec<PartWeights>,
}

/// Average the mixing proportions of `layers` per part label, preserving
/// first-appearance order of the labels. Parts with no layers simply never
/// appear.
pub fn weight_report(layers: &[(String, SnLayer)]) -> WeightReport {
    let mut parts: Vec<PartWeights> = Vec::new();
    for (label, layer) in layers {
        let wm = softmax3(layer.mean_logits);
        let wv = softmax3(layer.var_logits);
        match parts.iter_mut().find(|p| &p.part == label) {
            Some(part) => {
                for k in 0..3 {
                    part.mean_weights[k] += wm[k];
                    part.var_weights[k] += wv[k];
                }
                part.layer_count += 1;
            }
            None => parts.push(PartWeights {
                part: label.clone(),
                layer_count: 1,
                mean_weights: wm,
                var_weights: wv,
            }),
        }
    }
    for part in &mut parts {
        let inv = 1.0 / part.layer_count as f64;
        for k in 0..3 {
            part.mean_weights[k] *= inv;
            part.var_weights[k] *= inv;
        }
    }
    WeightReport { parts }
}

/// CSV schema: part,stat,w_in,w_ln,w_bn with stat in {mean, var}.
pub fn write_weight_report_csv(report: &WeightReport, path: &Path) -> Result<(), NormError> {
    let mut out = Vec::new();
    writeln!(out, "part,stat,w_in,w_ln,w_bn")?;
    for part in &report.parts {
        let [mi, ml, mb] = part.mean_weights;
        let [vi, vl, vb] = part.var_weights;
        writeln!(out, "{},mean,{},{},{}", part.part, mi, ml, mb)?;
        writeln!(out, "{},var,{},{},{}", part.part, vi, vl, vb)?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturated_logits_dominate() {
        let mut layer = SnLayer::new(2);
        layer.mean_logits = [50.0, -50.0, -50.0];
        let report = weight_report(&[("head".into(), layer)]);
        assert!((report.parts[0].mean_weights[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn part_average_of_two_one_hot_layers() {
        let mut a = SnLayer::new(2);
        a.mean_logits = [80.0, 0.0, 0.0];
        a.var_logits = [80.0, 0.0, 0.0];
        let mut b = SnLayer::new(2);
        b.mean_logits = [0.0, 80.0, 0.0];
        b.var_logits = [0.0, 80.0, 0.0];
        let report = weight_report(&[("stem".into(), a), ("stem".into(), b)]);
        assert_eq!(report.parts.len(), 1);
        let w = report.parts[0].mean_weights;
        assert!((w[0] - 0.5).abs() < 1e-12);
        assert!((w[1] - 0.5).abs() < 1e-12);
        assert!(w[2].abs() < 1e-12);
    }

    #[test]
    fn zero_logits_give_uniform_thirds() {
        let report = weight_report(&[("p".into(), SnLayer::new(1))]);
        for w in [report.parts[0].mean_weights, report.parts[0].var_weights] {
            for v in w {
                assert!((v - 1.0 / 3.0).abs() < 1e-12);
            }
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.csv");
        let report = weight_report(&[
            ("before".into(), SnLayer::new(1)),
            ("after".into(), SnLayer::new(1)),
        ]);
        write_weight_report_csv(&report, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "part,stat,w_in,w_ln,w_bn");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("before,mean,"));
        assert!(lines[2].starts_with("before,var,"));
        assert!(lines[3].starts_with("after,mean,"));
    }
}
