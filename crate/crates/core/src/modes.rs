//! Mode-n products of dense third-order arrays in frontal-slice-major layout
//! with real matrices.

use std::ops::{AddAssign, Mul};

use faer::Mat;

pub(crate) trait Entry: Copy + Default + AddAssign + Mul<f64, Output = Self> + Send + Sync {}

impl<T> Entry for T where T: Copy + Default + AddAssign + Mul<f64, Output = T> + Send + Sync {}

/// `X ×_mode M` for `mode ∈ {1, 2, 3}`; `M` is `J × I_mode`.
pub(crate) fn mode_product<T: Entry>(
    data: &[T],
    dims: (usize, usize, usize),
    mode: usize,
    m: &Mat<f64>,
) -> (Vec<T>, (usize, usize, usize)) {
    let (n1, n2, n3) = dims;
    let rows = m.nrows();
    match mode {
        1 => {
            assert_eq!(m.ncols(), n1);
            let mut out = vec![T::default(); rows * n2 * n3];
            for k in 0..n3 {
                let src = &data[k * n1 * n2..(k + 1) * n1 * n2];
                let dst = &mut out[k * rows * n2..(k + 1) * rows * n2];
                for r in 0..rows {
                    let drow = &mut dst[r * n2..(r + 1) * n2];
                    for i in 0..n1 {
                        let c = m[(r, i)];
                        if c == 0.0 {
                            continue;
                        }
                        for (d, &s) in drow.iter_mut().zip(&src[i * n2..(i + 1) * n2]) {
                            *d += s * c;
                        }
                    }
                }
            }
            (out, (rows, n2, n3))
        }
        2 => {
            assert_eq!(m.ncols(), n2);
            let mut out = vec![T::default(); n1 * rows * n3];
            for k in 0..n3 {
                for i in 0..n1 {
                    let srow = &data[(k * n1 + i) * n2..(k * n1 + i + 1) * n2];
                    let drow = &mut out[(k * n1 + i) * rows..(k * n1 + i + 1) * rows];
                    for (r, d) in drow.iter_mut().enumerate() {
                        let mut acc = T::default();
                        for (j, &s) in srow.iter().enumerate() {
                            acc += s * m[(r, j)];
                        }
                        *d = acc;
                    }
                }
            }
            (out, (n1, rows, n3))
        }
        3 => {
            assert_eq!(m.ncols(), n3);
            let len = n1 * n2;
            let mut out = vec![T::default(); len * rows];
            for r in 0..rows {
                let dst = &mut out[r * len..(r + 1) * len];
                for k in 0..n3 {
                    let c = m[(r, k)];
                    if c == 0.0 {
                        continue;
                    }
                    for (d, &s) in dst.iter_mut().zip(&data[k * len..(k + 1) * len]) {
                        *d += s * c;
                    }
                }
            }
            (out, (n1, n2, rows))
        }
        _ => panic!("mode must be 1, 2 or 3"),
    }
}
