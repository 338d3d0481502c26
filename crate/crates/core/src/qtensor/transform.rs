use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use super::QTensor3;
use crate::dct::{dct2_matrix, identity_defect};
use crate::error::{dims_mismatch, invalid, Result};
use crate::modes::mode_product;

/// Invertible real mode-3 transform `L(T) = T ×₃ Q3` with its inverse.
#[derive(Clone, Debug)]
pub struct TransformSpec {
    name: String,
    forward: Mat<f64>,
    inverse: Mat<f64>,
    orthonormal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl TransformSpec {
    /// Orthonormal DCT-II along the frames; the default transform.
    pub fn dct(n: usize) -> Self {
        let forward = dct2_matrix(n);
        let inverse = forward.transpose().to_owned();
        Self { name: "dct2".into(), forward, inverse, orthonormal: true }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            name: "identity".into(),
            forward: Mat::identity(n, n),
            inverse: Mat::identity(n, n),
            orthonormal: true,
        }
    }

    /// Any square invertible matrix; the inverse is computed by LU.
    pub fn from_matrix(name: impl Into<String>, q3: Mat<f64>) -> Result<Self> {
        let n = q3.nrows();
        if q3.ncols() != n {
            return Err(dims_mismatch("TransformSpec::from_matrix", (n, n), q3.shape()));
        }
        let inverse = q3.partial_piv_lu().inverse();
        let tol = 1e-10 * (n as f64).sqrt();
        if !inverse.as_ref().is_all_finite() || identity_defect(&q3, &inverse) > tol {
            return Err(invalid("q3", "matrix is singular or too ill-conditioned"));
        }
        let qt = q3.transpose().to_owned();
        let orthonormal = identity_defect(&q3, &qt) <= tol;
        Ok(Self { name: name.into(), forward: q3, inverse, orthonormal })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.forward.nrows()
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.forward
    }

    pub fn inverse_matrix(&self) -> &Mat<f64> {
        &self.inverse
    }

    /// `Q3·Q3ᵀ = I`; the transform is then an isometry.
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub(crate) fn check(&self, t: &QTensor3, op: &'static str) -> Result<()> {
        if t.dims().2 != self.size() {
            return Err(dims_mismatch(op, self.size(), t.dims().2));
        }
        Ok(())
    }
}

/// Applies `Q3` (forward) or `Q3⁻¹` (inverse) to every mode-3 fiber.
pub fn mode3_transform(t: &QTensor3, spec: &TransformSpec, direction: Direction) -> Result<QTensor3> {
    spec.check(t, "mode3_transform")?;
    let m = match direction {
        Direction::Forward => &spec.forward,
        Direction::Inverse => &spec.inverse,
    };
    let (data, dims) = mode_product(t.as_slice(), t.dims(), 3, m);
    Ok(QTensor3::from_vec(dims, data))
}
