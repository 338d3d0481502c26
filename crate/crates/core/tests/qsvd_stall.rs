//! A 30×30 quaternion matrix whose adjoint made the default complex SVD
//! stall during a completion run.

use num_complex::Complex64;
use quatcomp::{complex_adjoint, qsvd, QMatrix, Quaternion};

fn load() -> QMatrix {
    let txt = include_str!("data/stalled_adjoint.txt");
    let mut lines = txt.lines();
    let dims: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    let vals: Vec<Complex64> = lines
        .map(|l| {
            let p: Vec<f64> = l.split(' ').map(|x| x.parse().unwrap()).collect();
            Complex64::new(p[0], p[1])
        })
        .collect();
    let (m, n) = (dims[0] / 2, dims[1] / 2);
    let at = |i: usize, j: usize| vals[i * dims[1] + j];
    QMatrix::from_fn(m, n, |i, j| Quaternion::from_cayley_dickson(at(i, j), at(i, n + j)))
}

#[test]
fn stalled_adjoint_still_decomposes() {
    let q = load();
    // The file really is the adjoint of the rebuilt matrix.
    let chi = complex_adjoint(&q);
    assert_eq!(chi.rows(), 60);
    let s = qsvd(&q).expect("decomposition succeeds");
    let err = s.recompose().sub(&q).frobenius_norm() / q.frobenius_norm();
    assert!(err < 1e-10, "relative reconstruction error {err:e}");
    let g = s.u.conj_transpose().matmul(&s.u).unwrap();
    assert!(g.sub(&QMatrix::identity(30)).frobenius_norm() < 1e-10);
}
