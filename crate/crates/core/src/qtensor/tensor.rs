use std::ops::{Index, IndexMut};

use crate::error::{dims_mismatch, Result};
use crate::quat::{QMatrix, Quaternion};

/// Dimensions `(I1, I2, I3)`: rows, columns and frontal slices.
pub type Dims = (usize, usize, usize);

/// Third-order quaternion tensor.
///
/// Storage is frontal-slice major: slice `k` is the contiguous row-major
/// `I1×I2` block at offset `k·I1·I2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QTensor3 {
    dims: Dims,
    data: Vec<Quaternion>,
}

impl QTensor3 {
    pub fn zeros(dims: Dims) -> Self {
        Self { dims, data: vec![Quaternion::ZERO; dims.0 * dims.1 * dims.2] }
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(dims.0 * dims.1 * dims.2);
        for k in 0..dims.2 {
            for i in 0..dims.0 {
                for j in 0..dims.1 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dims, data }
    }

    /// Wraps frontal-slice-major data. Panics if the length does not match.
    pub fn from_vec(dims: Dims, data: Vec<Quaternion>) -> Self {
        assert_eq!(data.len(), dims.0 * dims.1 * dims.2, "QTensor3::from_vec length");
        Self { dims, data }
    }

    /// Stacks equally shaped matrices as frontal slices.
    pub fn from_slices(slices: Vec<QMatrix>) -> Result<Self> {
        let Some(first) = slices.first() else {
            return Ok(Self::zeros((0, 0, 0)));
        };
        let (r, c) = first.shape();
        let mut data = Vec::with_capacity(r * c * slices.len());
        for s in &slices {
            if s.shape() != (r, c) {
                return Err(dims_mismatch("from_slices", (r, c), s.shape()));
            }
            data.extend_from_slice(s.as_slice());
        }
        Ok(Self { dims: (r, c, slices.len()), data })
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub(crate) fn slice_len(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    #[inline]
    pub fn linear_index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims.0 + i) * self.dims.1 + j
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Quaternion] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Quaternion> {
        self.data
    }

    /// Contiguous entries of frontal slice `k`.
    pub fn slice_data(&self, k: usize) -> &[Quaternion] {
        let n = self.slice_len();
        &self.data[k * n..(k + 1) * n]
    }

    pub fn slice_data_mut(&mut self, k: usize) -> &mut [Quaternion] {
        let n = self.slice_len();
        &mut self.data[k * n..(k + 1) * n]
    }

    /// Frontal slice `k` as a matrix.
    pub fn frontal_slice(&self, k: usize) -> QMatrix {
        QMatrix::from_vec(self.dims.0, self.dims.1, self.slice_data(k).to_vec())
    }

    pub fn frontal_slices(&self) -> Vec<QMatrix> {
        (0..self.dims.2).map(|k| self.frontal_slice(k)).collect()
    }

    pub fn set_frontal_slice(&mut self, k: usize, m: &QMatrix) {
        assert_eq!(m.shape(), (self.dims.0, self.dims.1));
        self.slice_data_mut(k).copy_from_slice(m.as_slice());
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum()
    }

    /// Sum of entry moduli.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).sum()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &QTensor3) -> f64 {
        assert_eq!(self.dims, other.dims);
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every real part is exactly zero.
    pub fn is_pure(&self) -> bool {
        self.data.iter().all(|q| q.w == 0.0)
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QTensor3 {
        QTensor3 { dims: self.dims, data: self.data.iter().map(|&q| f(q)).collect() }
    }

    /// Entrywise combination of two equally shaped tensors.
    pub fn zip_map(&self, other: &QTensor3, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QTensor3 {
        assert_eq!(self.dims, other.dims, "zip_map dims");
        QTensor3 {
            dims: self.dims,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &QTensor3) -> QTensor3 {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QTensor3) -> QTensor3 {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> QTensor3 {
        self.map(|q| q.scale(s))
    }

    /// `self += alpha · other`.
    pub fn axpy(&mut self, alpha: f64, other: &QTensor3) {
        assert_eq!(self.dims, other.dims, "axpy dims");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b.scale(alpha);
        }
    }

    /// Left multiplication of every entry by `q`.
    pub fn left_mul(&self, q: Quaternion) -> QTensor3 {
        self.map(|x| q * x)
    }

    /// Right multiplication of every entry by `q`.
    pub fn right_mul(&self, q: Quaternion) -> QTensor3 {
        self.map(|x| x * q)
    }

    /// Tensor conjugate transpose: each frontal slice is conjugate transposed.
    ///
    /// With a real mode-3 transform this is the adjoint under the ⋆QT-product.
    pub fn conj_transpose(&self) -> QTensor3 {
        let (n1, n2, n3) = self.dims;
        QTensor3::from_fn((n2, n1, n3), |i, j, k| self[(j, i, k)].conj())
    }

    /// Frontal slices `0..I3` restricted to lateral slices (columns) `start..end`.
    pub fn lateral_range(&self, start: usize, end: usize) -> QTensor3 {
        let (n1, _, n3) = self.dims;
        QTensor3::from_fn((n1, end - start, n3), |i, j, k| self[(i, start + j, k)])
    }
}

impl Index<(usize, usize, usize)> for QTensor3 {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &Quaternion {
        debug_assert!(i < self.dims.0 && j < self.dims.1 && k < self.dims.2);
        &self.data[self.linear_index(i, j, k)]
    }
}

impl IndexMut<(usize, usize, usize)> for QTensor3 {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut Quaternion {
        debug_assert!(i < self.dims.0 && j < self.dims.1 && k < self.dims.2);
        let idx = self.linear_index(i, j, k);
        &mut self.data[idx]
    }
}
