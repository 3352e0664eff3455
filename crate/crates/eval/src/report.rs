use std::io::Write;
use std::path::Path;

use crate::error::EvalError;
use crate::mr::SubsetResult;

/// Summary report. Schema: subset,mr,point_fppi_1..9,point_miss_1..9;
/// undefined subsets carry "undefined" in the mr column and empty points.
pub fn write_report_csv(path: &Path, results: &[SubsetResult]) -> Result<(), EvalError> {
    let mut out = Vec::new();
    write!(out, "subset,mr")?;
    for k in 1..=9 {
        write!(out, ",point_fppi_{k}")?;
    }
    for k in 1..=9 {
        write!(out, ",point_miss_{k}")?;
    }
    writeln!(out)?;
    for r in results {
        match &r.curve {
            Some(curve) => {
                write!(out, "{},{}", r.spec.name, curve.mr)?;
                for &(fppi, _) in &curve.reference_points {
                    write!(out, ",{fppi}")?;
                }
                for &(_, miss) in &curve.reference_points {
                    write!(out, ",{miss}")?;
                }
                writeln!(out)?;
            }
            None => {
                write!(out, "{},undefined", r.spec.name)?;
                out.extend(std::iter::repeat(b',').take(18));
                writeln!(out)?;
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Plot-ready full curve. Schema: subset,fppi,miss.
pub fn write_curve_csv(path: &Path, results: &[SubsetResult]) -> Result<(), EvalError> {
    let mut out = Vec::new();
    writeln!(out, "subset,fppi,miss")?;
    for r in results {
        if let Some(curve) = &r.curve {
            for &(fppi, miss) in &curve.points {
                writeln!(out, "{},{},{}", r.spec.name, fppi, miss)?;
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
