use std::io::Write;
use std::path::Path;

use crate::error::LossError;

/// One row of a training loss curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossRecord {
    pub epoch: usize,
    pub step: usize,
    pub center: f64,
    pub scale: f64,
    pub offset: f64,
    pub total: f64,
}

/// CSV schema: epoch,step,center,scale,offset,total.
pub fn write_loss_curve_csv(path: &Path, records: &[LossRecord]) -> Result<(), LossError> {
    let mut out = Vec::new();
    writeln!(out, "epoch,step,center,scale,offset,total")?;
    for r in records {
        writeln!(out, "{},{},{},{},{},{}", r.epoch, r.step, r.center, r.scale, r.offset, r.total)?;
    }
    std::fs::write(path, out)?;
    Ok(())
}
