use rayon::prelude::*;

use super::{mode3_transform, Direction, QTensor3, TransformSpec};
use crate::error::{dims_mismatch, Result};
use crate::quat::{mul_into, QMatrix, Quaternion};

/// Facewise product: slice `k` of the result is `A⁽ᵏ⁾ · B⁽ᵏ⁾`.
pub fn facewise_product(a: &QTensor3, b: &QTensor3) -> Result<QTensor3> {
    let (m, l, n3) = a.dims();
    let (l2, n, n3b) = b.dims();
    if l != l2 || n3 != n3b {
        return Err(dims_mismatch("facewise_product", (m, l, n3), (l2, n, n3b)));
    }
    let slices: Vec<QMatrix> = (0..n3)
        .into_par_iter()
        .map(|k| {
            let mut out = QMatrix::zeros(m, n);
            mul_into(&a.frontal_slice(k), &b.frontal_slice(k), &mut out);
            out
        })
        .collect();
    let mut out = QTensor3::zeros((m, n, n3));
    for (k, s) in slices.iter().enumerate() {
        out.set_frontal_slice(k, s);
    }
    Ok(out)
}

/// ⋆QT-product `L⁻¹(L(A) ⋆QF L(B))`.
pub fn qt_product(a: &QTensor3, b: &QTensor3, spec: &TransformSpec) -> Result<QTensor3> {
    spec.check(a, "qt_product")?;
    spec.check(b, "qt_product")?;
    if a.dims().1 != b.dims().0 {
        return Err(dims_mismatch("qt_product", a.dims().1, b.dims().0));
    }
    let ah = mode3_transform(a, spec, Direction::Forward)?;
    let bh = mode3_transform(b, spec, Direction::Forward)?;
    mode3_transform(&facewise_product(&ah, &bh)?, spec, Direction::Inverse)
}

/// Identity for the ⋆QT-product: identity frontal slices in the transform domain.
pub fn identity_tensor(n: usize, spec: &TransformSpec) -> QTensor3 {
    let hat = QTensor3::from_fn(
        (n, n, spec.size()),
        |i, j, _| {
            if i == j {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        },
    );
    mode3_transform(&hat, spec, Direction::Inverse).expect("dims match by construction")
}

/// Sum of the traces of the transform-domain frontal slices.
pub fn qt_trace(t: &QTensor3, spec: &TransformSpec) -> Result<Quaternion> {
    let hat = mode3_transform(t, spec, Direction::Forward)?;
    let (n1, n2, n3) = hat.dims();
    Ok((0..n3).flat_map(|k| (0..n1.min(n2)).map(move |i| (i, k))).map(|(i, k)| hat[(i, i, k)]).sum())
}
