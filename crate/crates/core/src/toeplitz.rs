//! Symmetric Toeplitz matrices held by their first column.

use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Below this dimension the direct `O(n²)` product is used by [`SymmetricToeplitz::matvec`].
pub const FFT_THRESHOLD: usize = 256;

struct Circulant {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    eigenvalues: Vec<Complex64>,
}

/// A symmetric Toeplitz matrix `T[i][j] = col[|i - j|]`.
pub struct SymmetricToeplitz {
    col: Vec<f64>,
    circulant: OnceLock<Circulant>,
}

impl Clone for SymmetricToeplitz {
    fn clone(&self) -> Self {
        Self::new(self.col.clone())
    }
}

impl std::fmt::Debug for SymmetricToeplitz {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymmetricToeplitz")
            .field("col", &self.col)
            .finish()
    }
}

impl PartialEq for SymmetricToeplitz {
    fn eq(&self, other: &Self) -> bool {
        self.col == other.col
    }
}

impl SymmetricToeplitz {
    pub fn new(col: Vec<f64>) -> Self {
        Self {
            col,
            circulant: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.col.len()
    }

    pub fn column(&self) -> &[f64] {
        &self.col
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.col[i.abs_diff(j)]
    }

    /// Row-major dense copy. Meant for small systems and test oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Reference `O(n²)` product.
    pub fn matvec_direct(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            // left part uses col[i], col[i-1], ..., col[1]; right part col[0..n-i]
            let left: f64 = v[..i]
                .iter()
                .zip(self.col[1..=i].iter().rev())
                .map(|(a, b)| a * b)
                .sum();
            let right: f64 = v[i..].iter().zip(&self.col).map(|(a, b)| a * b).sum();
            *o = left + right;
        }
        Ok(out)
    }

    fn circulant(&self) -> &Circulant {
        self.circulant.get_or_init(|| {
            let n = self.dim();
            let size = 2 * n;
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(size);
            let inverse = planner.plan_fft_inverse(size);
            // [c0, c1, ..., c_{n-1}, 0, c_{n-1}, ..., c1]
            let mut buf: Vec<Complex64> = Vec::with_capacity(size);
            buf.extend(self.col.iter().map(|&c| Complex64::new(c, 0.0)));
            buf.push(Complex64::new(0.0, 0.0));
            buf.extend(self.col[1..].iter().rev().map(|&c| Complex64::new(c, 0.0)));
            forward.process(&mut buf);
            Circulant {
                forward,
                inverse,
                eigenvalues: buf,
            }
        })
    }

    /// `O(n log n)` product through a circulant embedding of size `2n`.
    pub fn matvec_fft(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v)?;
        let n = self.dim();
        if n == 0 {
            return Ok(Vec::new());
        }
        let circ = self.circulant();
        let mut buf: Vec<Complex64> = v
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .chain(std::iter::repeat(Complex64::new(0.0, 0.0)).take(n))
            .collect();
        circ.forward.process(&mut buf);
        for (b, e) in buf.iter_mut().zip(&circ.eigenvalues) {
            *b *= e;
        }
        circ.inverse.process(&mut buf);
        let scale = 1.0 / (2 * n) as f64;
        Ok(buf[..n].iter().map(|c| c.re * scale).collect())
    }

    /// Product using the direct path for small `n` and the FFT path above
    /// [`FFT_THRESHOLD`].
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.dim() >= FFT_THRESHOLD {
            self.matvec_fft(v)
        } else {
            self.matvec_direct(v)
        }
    }
}
