//! Detections file: CSV with one record per detection,
//! `image_id,x,y,w,h,score`, LF line endings, '.' decimal separator.

use std::io::Write;
use std::path::Path;

use crate::error::CodecError;
use crate::types::DetBox;

pub fn write_detections_csv(
    path: &Path,
    per_image: &[(String, Vec<DetBox>)],
) -> Result<(), CodecError> {
    let mut out = Vec::new();
    writeln!(out, "image_id,x,y,w,h,score")?;
    for (image_id, boxes) in per_image {
        for b in boxes {
            writeln!(out, "{},{},{},{},{},{}", image_id, b.x, b.y, b.w, b.h, b.score)?;
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parse a detections CSV back into per-image lists, in file order.
pub fn read_detections_csv(path: &Path) -> Result<Vec<(String, Vec<DetBox>)>, CodecError> {
    let text = std::fs::read_to_string(path)?;
    let mut per_image: Vec<(String, Vec<DetBox>)> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line_no == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CodecError::Malformed {
                line: line_no + 1,
                field: "record".into(),
                message: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let num = |idx: usize, name: &str| -> Result<f64, CodecError> {
            fields[idx].parse::<f64>().map_err(|e| CodecError::Malformed {
                line: line_no + 1,
                field: name.into(),
                message: e.to_string(),
            })
        };
        let det = DetBox {
            x: num(1, "x")?,
            y: num(2, "y")?,
            w: num(3, "w")?,
            h: num(4, "h")?,
            score: num(5, "score")?,
        };
        match per_image.iter_mut().find(|(id, _)| id == fields[0]) {
            Some((_, boxes)) => boxes.push(det),
            None => per_image.push((fields[0].to_string(), vec![det])),
        }
    }
    Ok(per_image)
}
