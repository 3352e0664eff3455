use crate::error::TensorError;
use crate::rng::{Distribution, SeededRng};

/// Extents along (N, C, H, W).
pub type Shape4 = (usize, usize, usize, usize);

/// Axis set for reductions.
///
/// `true` marks an axis as reduced; reduced axes keep extent 1 in the
/// output so results broadcast back against the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Axes {
    pub n: bool,
    pub c: bool,
    pub h: bool,
    pub w: bool,
}

impl Axes {
    pub const NONE: Axes = Axes { n: false, c: false, h: false, w: false };
    pub const ALL: Axes = Axes { n: true, c: true, h: true, w: true };
    /// Spatial axes: per-(n, c) statistics.
    pub const HW: Axes = Axes { n: false, c: false, h: true, w: true };
    /// Per-sample statistics over channels and space.
    pub const CHW: Axes = Axes { n: false, c: true, h: true, w: true };
    /// Per-channel statistics over the batch and space.
    pub const NHW: Axes = Axes { n: true, c: false, h: true, w: true };
}

/// Dense rank-4 tensor of `f64` in row-major (n, c, h, w) order.
///
/// Tensors are immutable after construction; every operation returns a new
/// tensor, so values can be shared freely across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    shape: Shape4,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(shape: Shape4) -> Tensor4 {
        Tensor4 { shape, data: vec![0.0; numel(shape)] }
    }

    pub fn full(shape: Shape4, value: f64) -> Tensor4 {
        Tensor4 { shape, data: vec![value; numel(shape)] }
    }

    pub fn from_vec(shape: Shape4, data: Vec<f64>) -> Result<Tensor4, TensorError> {
        let expected = numel(shape);
        if data.len() != expected {
            return Err(TensorError::ShapeMismatch { shape, expected, got: data.len() });
        }
        Ok(Tensor4 { shape, data })
    }

    /// Deterministic random fill. The generator is pinned (ChaCha8 stream,
    /// explicit bit mappings — see [`SeededRng`]) so fixtures stay stable.
    pub fn seeded_fill(shape: Shape4, seed: u64, dist: Distribution) -> Tensor4 {
        let mut rng = SeededRng::new(seed);
        let data = (0..numel(shape)).map(|_| rng.sample(dist)).collect();
        Tensor4 { shape, data }
    }

    pub fn shape(&self) -> Shape4 {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn offset(&self, n: usize, c: usize, h: usize, w: usize) -> usize {
        let (_, cc, hh, ww) = self.shape;
        ((n * cc + c) * hh + h) * ww + w
    }

    #[inline]
    pub fn at(&self, n: usize, c: usize, h: usize, w: usize) -> f64 {
        self.data[self.offset(n, c, h, w)]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Tensor4 {
        Tensor4 { shape: self.shape, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Elementwise combination with extent-1 broadcasting on both sides.
    pub fn combine<F: Fn(f64, f64) -> f64>(
        &self,
        other: &Tensor4,
        f: F,
    ) -> Result<Tensor4, TensorError> {
        let out_shape = broadcast_shape(self.shape, other.shape)?;
        let (n, c, h, w) = out_shape;
        let mut data = Vec::with_capacity(numel(out_shape));
        for ni in 0..n {
            for ci in 0..c {
                for hi in 0..h {
                    for wi in 0..w {
                        let a = self.at(
                            bcast(ni, self.shape.0),
                            bcast(ci, self.shape.1),
                            bcast(hi, self.shape.2),
                            bcast(wi, self.shape.3),
                        );
                        let b = other.at(
                            bcast(ni, other.shape.0),
                            bcast(ci, other.shape.1),
                            bcast(hi, other.shape.2),
                            bcast(wi, other.shape.3),
                        );
                        data.push(f(a, b));
                    }
                }
            }
        }
        Ok(Tensor4 { shape: out_shape, data })
    }

    /// Mean and population variance over `axes` (divisor = element count,
    /// matching normalization-layer convention). Reduced axes keep extent 1.
    ///
    /// With `Axes::NONE` this returns `(x, 0)`.
    pub fn reduce_stats(&self, axes: Axes) -> Result<(Tensor4, Tensor4), TensorError> {
        let (n, c, h, w) = self.shape;
        for (reduced, extent, name) in [
            (axes.n, n, 'N'),
            (axes.c, c, 'C'),
            (axes.h, h, 'H'),
            (axes.w, w, 'W'),
        ] {
            if reduced && extent == 0 {
                return Err(TensorError::EmptyReduction { axis: name });
            }
        }

        let out_shape = (
            if axes.n { 1 } else { n },
            if axes.c { 1 } else { c },
            if axes.h { 1 } else { h },
            if axes.w { 1 } else { w },
        );
        let count = [(axes.n, n), (axes.c, c), (axes.h, h), (axes.w, w)]
            .iter()
            .map(|&(reduced, extent)| if reduced { extent } else { 1 })
            .product::<usize>();
        let mut sum = vec![0.0; numel(out_shape)];
        let mut sum_sq = vec![0.0; numel(out_shape)];
        let (_, oc, oh, ow) = out_shape;
        for ni in 0..n {
            for ci in 0..c {
                for hi in 0..h {
                    for wi in 0..w {
                        let v = self.at(ni, ci, hi, wi);
                        let on = if axes.n { 0 } else { ni };
                        let oci = if axes.c { 0 } else { ci };
                        let ohi = if axes.h { 0 } else { hi };
                        let owi = if axes.w { 0 } else { wi };
                        let idx = ((on * oc + oci) * oh + ohi) * ow + owi;
                        sum[idx] += v;
                        sum_sq[idx] += v * v;
                    }
                }
            }
        }
        let inv = 1.0 / count as f64;
        let mean: Vec<f64> = sum.iter().map(|&s| s * inv).collect();
        // E[x^2] - E[x]^2 can dip a hair below zero from cancellation.
        let var: Vec<f64> = sum_sq
            .iter()
            .zip(&mean)
            .map(|(&sq, &m)| (sq * inv - m * m).max(0.0))
            .collect();
        Ok((
            Tensor4 { shape: out_shape, data: mean },
            Tensor4 { shape: out_shape, data: var },
        ))
    }
}

fn numel(shape: Shape4) -> usize {
    shape.0 * shape.1 * shape.2 * shape.3
}

#[inline]
fn bcast(i: usize, extent: usize) -> usize {
    if extent == 1 {
        0
    } else {
        i
    }
}

fn broadcast_shape(a: Shape4, b: Shape4) -> Result<Shape4, TensorError> {
    let dim = |x: usize, y: usize| -> Option<usize> {
        if x == y || y == 1 {
            Some(x)
        } else if x == 1 {
            Some(y)
        } else {
            None
        }
    };
    match (dim(a.0, b.0), dim(a.1, b.1), dim(a.2, b.2), dim(a.3, b.3)) {
        (Some(n), Some(c), Some(h), Some(w)) => Ok((n, c, h, w)),
        _ => Err(TensorError::BroadcastMismatch { lhs: a, rhs: b }),
    }
}
