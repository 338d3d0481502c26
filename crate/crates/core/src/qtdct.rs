//! Quaternion tensor discrete cosine transform.
//!
//! The transform applies an orthonormal DCT-II along all three modes and then
//! multiplies every coefficient by a unit pure quaternion `u` (so `u² = −1`).
//! Because the DCT matrices are real, the mode products are computed on the
//! two complex halves of the Cayley–Dickson split `T = T_p + T_q·j`.

use faer::Mat;
use num_complex::Complex64;

use crate::dct::dct2_matrix;
use crate::error::{dims_mismatch, invalid, Result};
use crate::modes::mode_product;
use crate::qtensor::{Dims, QTensor3};
use crate::Quaternion;

/// DCT matrices for each mode plus the axis quaternion `u`.
#[derive(Clone, Debug)]
pub struct QtdctContext {
    c1: Mat<f64>,
    c2: Mat<f64>,
    c3: Mat<f64>,
    u: Quaternion,
}

/// Histogram of coefficient moduli.
///
/// Bin 0 is the near-zero bin `[0, 1e-3·max)`; the remaining bins split
/// `[1e-3·max, max]` evenly.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsityProfile {
    /// `counts.len() + 1` increasing edges from 0 to the largest modulus.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Fraction of entries whose modulus is below `1e-3` of the largest one.
    pub sparse_fraction: f64,
}

/// Moduli below this fraction of the largest one count as zero.
pub const SPARSE_CUTOFF: f64 = 1e-3;

/// Gray axis `(i + j + k)/√3`.
pub fn gray_axis() -> Quaternion {
    let s = 1.0 / 3f64.sqrt();
    Quaternion::pure(s, s, s)
}

impl QtdctContext {
    /// Context for tensors of shape `dims` with `u` on the gray axis.
    pub fn new(dims: Dims) -> Self {
        Self { c1: dct2_matrix(dims.0), c2: dct2_matrix(dims.1), c3: dct2_matrix(dims.2), u: gray_axis() }
    }

    /// Same as [`new`](Self::new) with a caller-chosen axis. `u` must be a
    /// unit pure quaternion.
    pub fn with_axis(dims: Dims, u: Quaternion) -> Result<Self> {
        if u.w.abs() > 1e-12 || (u.norm() - 1.0).abs() > 1e-12 {
            return Err(invalid("u", format!("{u} is not a unit pure quaternion")));
        }
        Ok(Self { u, ..Self::new(dims) })
    }

    pub fn dims(&self) -> Dims {
        (self.c1.nrows(), self.c2.nrows(), self.c3.nrows())
    }

    pub fn axis(&self) -> Quaternion {
        self.u
    }

    pub fn matrices(&self) -> [&Mat<f64>; 3] {
        [&self.c1, &self.c2, &self.c3]
    }

    fn check(&self, t: &QTensor3, op: &'static str) -> Result<()> {
        if t.dims() != self.dims() {
            return Err(dims_mismatch(op, self.dims(), t.dims()));
        }
        Ok(())
    }

    /// `T ×₁C1 ×₂C2 ×₃C3`, or with the transposes when `inverse`.
    fn separable(&self, t: &QTensor3, inverse: bool) -> QTensor3 {
        let pick = |c: &Mat<f64>| if inverse { c.transpose().to_owned() } else { c.clone() };
        let ms = [pick(&self.c1), pick(&self.c2), pick(&self.c3)];

        let (mut p, mut q): (Vec<Complex64>, Vec<Complex64>) =
            t.as_slice().iter().map(|e| e.cayley_dickson()).unzip();
        let mut dims = t.dims();
        for (mode, m) in ms.iter().enumerate() {
            let (np, d) = mode_product(&p, dims, mode + 1, m);
            let (nq, _) = mode_product(&q, dims, mode + 1, m);
            p = np;
            q = nq;
            dims = d;
        }
        let data = p.into_iter().zip(q).map(|(a, b)| Quaternion::from_cayley_dickson(a, b)).collect();
        QTensor3::from_vec(dims, data)
    }

    /// Left-handed transform `u·(T ×₁C1 ×₂C2 ×₃C3)`.
    pub fn forward(&self, t: &QTensor3) -> Result<QTensor3> {
        self.check(t, "qtdct_forward")?;
        Ok(self.separable(t, false).left_mul(self.u))
    }

    /// Inverse of [`forward`](Self::forward): `(−u·S) ×₁C1ᵀ ×₂C2ᵀ ×₃C3ᵀ`.
    pub fn inverse(&self, s: &QTensor3) -> Result<QTensor3> {
        self.check(s, "qtdct_inverse")?;
        Ok(self.separable(&s.left_mul(-self.u), true))
    }

    /// Right-handed transform `(T ×₁C1 ×₂C2 ×₃C3)·u`.
    pub fn forward_right(&self, t: &QTensor3) -> Result<QTensor3> {
        self.check(t, "qtdct_forward_right")?;
        Ok(self.separable(t, false).right_mul(self.u))
    }

    pub fn inverse_right(&self, s: &QTensor3) -> Result<QTensor3> {
        self.check(s, "qtdct_inverse_right")?;
        Ok(self.separable(&s.right_mul(-self.u), true))
    }
}

/// Left-handed transform of `t`.
pub fn qtdct_forward(t: &QTensor3, ctx: &QtdctContext) -> Result<QTensor3> {
    ctx.forward(t)
}

pub fn qtdct_inverse(s: &QTensor3, ctx: &QtdctContext) -> Result<QTensor3> {
    ctx.inverse(s)
}

/// Modulus histogram: the near-zero bin followed by `bins` equal-width bins.
pub fn sparsity_profile(s: &QTensor3, bins: usize) -> SparsityProfile {
    let bins = bins.max(1);
    let moduli: Vec<f64> = s.as_slice().iter().map(|q| q.norm()).collect();
    let max = moduli.iter().copied().fold(0.0, f64::max);
    let cut = SPARSE_CUTOFF * max;
    let mut edges = vec![0.0];
    edges.extend((0..=bins).map(|b| cut + (max - cut) * b as f64 / bins as f64));
    let mut counts = vec![0usize; bins + 1];
    if max == 0.0 {
        counts[0] = moduli.len();
        return SparsityProfile { edges, counts, sparse_fraction: 1.0 };
    }
    for &m in &moduli {
        if m < cut {
            counts[0] += 1;
        } else {
            let b = ((m - cut) / (max - cut) * bins as f64) as usize;
            counts[1 + b.min(bins - 1)] += 1;
        }
    }
    SparsityProfile { edges, sparse_fraction: counts[0] as f64 / moduli.len() as f64, counts }
}
