//! Annotation and detection ingestion.
//!
//! Annotations: CSV records `image_id,x,y,w,h,vis_x,vis_y,vis_w,vis_h,ignore`
//! with the visibility ratio computed as visible-box area over full-box
//! area. A record with `ignore=1` and zero extents is an image placeholder:
//! it registers the image id without contributing a box, so images with no
//! pedestrians survive a write/read round trip. Detections use the codec's
//! CSV schema and must reference known image ids.

use std::io::Write;
use std::path::Path;

use detkit_codec::{DetBox, GtBox};

use crate::error::EvalError;

/// Per-image ground truth in stable (first-appearance) order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Annotations {
    images: Vec<String>,
    boxes: Vec<Vec<GtBox>>,
}

impl Annotations {
    pub fn new() -> Annotations {
        Annotations::default()
    }

    pub fn push_image(&mut self, image_id: &str, gts: Vec<GtBox>) {
        match self.index_of(image_id) {
            Some(idx) => self.boxes[idx].extend(gts),
            None => {
                self.images.push(image_id.to_string());
                self.boxes.push(gts);
            }
        }
    }

    pub fn index_of(&self, image_id: &str) -> Option<usize> {
        self.images.iter().position(|id| id == image_id)
    }

    pub fn num_images(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[String] {
        &self.images
    }

    pub fn boxes(&self, idx: usize) -> &[GtBox] {
        &self.boxes[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<GtBox>)> {
        self.images.iter().zip(self.boxes.iter())
    }
}

/// Detections aligned with an [`Annotations`] image order.
#[derive(Clone, Debug, PartialEq)]
pub struct Detections {
    per_image: Vec<Vec<DetBox>>,
}

impl Detections {
    pub fn aligned(anns: &Annotations, mut lists: Vec<(String, Vec<DetBox>)>) -> Result<Detections, EvalError> {
        let mut per_image = vec![Vec::new(); anns.num_images()];
        for (image_id, boxes) in lists.drain(..) {
            let idx = anns.index_of(&image_id).ok_or(EvalError::UnknownImage(image_id))?;
            per_image[idx].extend(boxes);
        }
        Ok(Detections { per_image })
    }

    pub fn empty(anns: &Annotations) -> Detections {
        Detections { per_image: vec![Vec::new(); anns.num_images()] }
    }

    pub fn boxes(&self, idx: usize) -> &[DetBox] {
        &self.per_image[idx]
    }
}

pub fn write_annotations_csv(
    path: &Path,
    per_image: &[(String, Vec<GtBox>)],
) -> Result<(), EvalError> {
    let mut out = Vec::new();
    writeln!(out, "image_id,x,y,w,h,vis_x,vis_y,vis_w,vis_h,ignore")?;
    for (image_id, gts) in per_image {
        if gts.is_empty() {
            // placeholder so the image id survives the round trip
            writeln!(out, "{image_id},0,0,0,0,0,0,0,0,1")?;
            continue;
        }
        for gt in gts {
            let vis_h = gt.h * gt.visibility;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                image_id,
                gt.x,
                gt.y,
                gt.w,
                gt.h,
                gt.x,
                gt.y,
                gt.w,
                vis_h,
                if gt.ignore { 1 } else { 0 }
            )?;
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_annotations(path: &Path) -> Result<Annotations, EvalError> {
    let text = std::fs::read_to_string(path)?;
    let mut anns = Annotations::new();
    for (line_no, line) in text.lines().enumerate() {
        if line_no == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(EvalError::Malformed {
                line: line_no + 1,
                field: "record".into(),
                message: format!("expected 10 fields, got {}", fields.len()),
            });
        }
        let num = |idx: usize, name: &str| -> Result<f64, EvalError> {
            fields[idx].parse::<f64>().map_err(|e| EvalError::Malformed {
                line: line_no + 1,
                field: name.into(),
                message: e.to_string(),
            })
        };
        let image_id = fields[0];
        let (x, y, w, h) = (num(1, "x")?, num(2, "y")?, num(3, "w")?, num(4, "h")?);
        let (vis_w, vis_h) = (num(7, "vis_w")?, num(8, "vis_h")?);
        let ignore = match fields[9].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(EvalError::Malformed {
                    line: line_no + 1,
                    field: "ignore".into(),
                    message: format!("expected 0 or 1, got '{other}'"),
                })
            }
        };
        if ignore && w == 0.0 && h == 0.0 {
            anns.push_image(image_id, Vec::new());
            continue;
        }
        if !ignore && (w <= 0.0 || h <= 0.0) {
            return Err(EvalError::Malformed {
                line: line_no + 1,
                field: "w/h".into(),
                message: "non-ignore box must have positive extents".into(),
            });
        }
        let full_area = w * h;
        let visibility = if full_area > 0.0 {
            ((vis_w * vis_h) / full_area).clamp(0.0, 1.0)
        } else {
            0.0
        };
        anns.push_image(image_id, vec![GtBox { x, y, w, h, visibility, ignore }]);
    }
    Ok(anns)
}

/// Read a detections CSV (codec schema) and align it to `anns`. Unknown
/// image ids are an error; images without detections get empty lists.
pub fn load_detections(path: &Path, anns: &Annotations) -> Result<Detections, EvalError> {
    let lists = detkit_codec::read_detections_csv(path).map_err(|e| match e {
        detkit_codec::CodecError::Malformed { line, field, message } => {
            EvalError::Malformed { line, field, message }
        }
        detkit_codec::CodecError::Io(e) => EvalError::Io(e),
        other => EvalError::Malformed { line: 0, field: "file".into(), message: other.to_string() },
    })?;
    Detections::aligned(anns, lists)
}
