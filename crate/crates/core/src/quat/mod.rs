//! Quaternion scalars, dense quaternion and complex matrices, and the QSVD.

mod matrix;
mod qsvd;
mod quaternion;

pub(crate) use matrix::mul_into;
pub use matrix::{complex_adjoint, CMatrix, QMatrix};
pub(crate) use qsvd::recompose;
pub use qsvd::{qsvd, singular_values, Qsvd, RANK_TOLERANCE};
pub use quaternion::{q_soft_threshold, qmul, Quaternion};
