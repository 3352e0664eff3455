//! Flat binary tensor files: four little-endian `u64` extents followed by
//! the row-major payload as little-endian `f64`. Used by test fixtures and
//! as the blob format inside checkpoints.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::TensorError;
use crate::tensor::Tensor4;

pub fn write_golden(tensor: &Tensor4, path: &Path) -> Result<(), TensorError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_blob(tensor, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_golden(path: &Path) -> Result<Tensor4, TensorError> {
    let mut reader = BufReader::new(File::open(path)?);
    let tensor = read_blob(&mut reader)?;
    let mut rest = [0u8; 1];
    if reader.read(&mut rest)? != 0 {
        return Err(TensorError::MalformedFile("trailing bytes after payload".into()));
    }
    Ok(tensor)
}

pub(crate) fn write_blob<W: Write>(tensor: &Tensor4, out: &mut W) -> Result<(), TensorError> {
    let (n, c, h, w) = tensor.shape();
    for extent in [n, c, h, w] {
        out.write_all(&(extent as u64).to_le_bytes())?;
    }
    for &v in tensor.data() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_blob<R: Read>(reader: &mut R) -> Result<Tensor4, TensorError> {
    let mut extents = [0usize; 4];
    for extent in &mut extents {
        *extent = read_u64(reader)? as usize;
    }
    let shape = (extents[0], extents[1], extents[2], extents[3]);
    let count = extents.iter().product::<usize>();
    let mut data = Vec::with_capacity(count);
    let mut buf = [0u8; 8];
    for _ in 0..count {
        reader
            .read_exact(&mut buf)
            .map_err(|_| TensorError::MalformedFile("payload shorter than extents imply".into()))?;
        data.push(f64::from_le_bytes(buf));
    }
    Tensor4::from_vec(shape, data)
}

pub(crate) fn read_u64<R: Read>(reader: &mut R) -> Result<u64, TensorError> {
    let mut buf = [0u8; 8];
    reader
        .read_exact(&mut buf)
        .map_err(|_| TensorError::MalformedFile("truncated header".into()))?;
    Ok(u64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Distribution;

    #[test]
    fn golden_roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.tensor");
        let x = Tensor4::seeded_fill((2, 3, 4, 5), 17, Distribution::Normal { mean: 0.0, std: 1.0 });
        write_golden(&x, &path).unwrap();
        let y = read_golden(&path).unwrap();
        assert_eq!(x.shape(), y.shape());
        for (a, b) in x.data().iter().zip(y.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn truncated_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tensor");
        std::fs::write(&path, [1u8, 2, 3]).unwrap();
        assert!(read_golden(&path).is_err());
    }
}
