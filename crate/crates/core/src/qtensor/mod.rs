//! Third-order quaternion tensors, the ⋆QT-product, the TQt-SVD and rank
//! surrogates measured on transform-domain singular values.

mod product;
mod tensor;
mod transform;
mod tsvd;

pub use product::{facewise_product, identity_tensor, qt_product, qt_trace};
pub use tensor::{Dims, QTensor3};
pub use transform::{mode3_transform, Direction, TransformSpec};
pub use tsvd::{
    rank_surrogates, tqt_svd, transform_svd, tubal_spectrum, RankSurrogates, TqtSvd, TransformSvd,
    TubalSpectrum,
};
