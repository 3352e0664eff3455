//! Checkpoint container: an ordered key-value file mapping parameter names
//! to tensor golden-file blobs.
//!
//! Layout: `u64` entry count, then per entry a `u64` name length, the UTF-8
//! name, and the tensor blob (extents + payload, as in the golden format).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::TensorError;
use crate::golden::{read_blob, read_u64, write_blob};
use crate::tensor::Tensor4;

pub fn write_checkpoint(path: &Path, entries: &[(String, Tensor4)]) -> Result<(), TensorError> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&(entries.len() as u64).to_le_bytes())?;
    for (name, tensor) in entries {
        let bytes = name.as_bytes();
        out.write_all(&(bytes.len() as u64).to_le_bytes())?;
        out.write_all(bytes)?;
        write_blob(tensor, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Vec<(String, Tensor4)>, TensorError> {
    let mut reader = BufReader::new(File::open(path)?);
    let count = read_u64(&mut reader)? as usize;
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let name_len = read_u64(&mut reader)? as usize;
        let mut name = vec![0u8; name_len];
        reader
            .read_exact(&mut name)
            .map_err(|_| TensorError::MalformedFile("truncated entry name".into()))?;
        let name = String::from_utf8(name)
            .map_err(|_| TensorError::MalformedFile("entry name is not UTF-8".into()))?;
        entries.push((name, read_blob(&mut reader)?));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Distribution;

    #[test]
    fn checkpoint_roundtrip_preserves_order_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("layer.ckpt");
        let entries = vec![
            ("gamma".to_string(), Tensor4::full((1, 4, 1, 1), 1.0)),
            ("beta".to_string(), Tensor4::zeros((1, 4, 1, 1))),
            (
                "running_mean".to_string(),
                Tensor4::seeded_fill((1, 4, 1, 1), 3, Distribution::Normal { mean: 0.0, std: 1.0 }),
            ),
        ];
        write_checkpoint(&path, &entries).unwrap();
        let loaded = read_checkpoint(&path).unwrap();
        assert_eq!(entries.len(), loaded.len());
        for ((n0, t0), (n1, t1)) in entries.iter().zip(&loaded) {
            assert_eq!(n0, n1);
            assert_eq!(t0, t1);
        }
    }
}
