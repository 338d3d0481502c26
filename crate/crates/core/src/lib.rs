//! Low-rank completion of third-order quaternion tensors.
//!
//! Color videos are encoded as pure quaternion tensors (red, green and blue
//! on the three imaginary parts) and recovered from a subset of their entries
//! by a two-step scheme: a truncated TQt-SVD fixes the leading singular
//! subspaces, then an ADMM loop minimizes a truncated nuclear (or
//! logarithmic) norm plus an `l1` penalty on the quaternion tensor DCT.

pub mod dct;
pub mod error;
pub mod mask;
pub mod media;
mod modes;
pub mod prox;
pub mod qtdct;
pub mod qtensor;
pub mod quat;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use qtensor::{QTensor3, TransformSpec};
pub use quat::{complex_adjoint, qmul, qsvd, CMatrix, QMatrix, Qsvd, Quaternion};
