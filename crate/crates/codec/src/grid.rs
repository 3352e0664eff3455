use detkit_tensor::{Tensor4, TensorError};

/// Dense 2D map of `f64`, row-major, indexed (row y, column x).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    h: usize,
    w: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn zeros(h: usize, w: usize) -> Grid {
        Grid { h, w, data: vec![0.0; h * w] }
    }

    pub fn from_vec(h: usize, w: usize, data: Vec<f64>) -> Grid {
        assert_eq!(data.len(), h * w, "grid payload length");
        Grid { h, w, data }
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h, self.w)
    }

    #[inline]
    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.w + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, value: f64) {
        self.data[y * self.w + x] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Grid {
        Grid { h: self.h, w: self.w, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// View as a single-sample, single-channel tensor.
    pub fn to_tensor(&self) -> Tensor4 {
        Tensor4::from_vec((1, 1, self.h, self.w), self.data.clone()).unwrap()
    }

    /// Extract channel `c` of sample `n` from a tensor.
    pub fn from_tensor_channel(t: &Tensor4, n: usize, c: usize) -> Result<Grid, TensorError> {
        let (_, _, h, w) = t.shape();
        let mut data = Vec::with_capacity(h * w);
        for y in 0..h {
            for x in 0..w {
                data.push(t.at(n, c, y, x));
            }
        }
        Ok(Grid { h, w, data })
    }
}
