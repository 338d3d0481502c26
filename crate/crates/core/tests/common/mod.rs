//! Random inputs and independent reference computations shared by the
//! integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quatcomp::{QMatrix, QTensor3, Quaternion};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn quat(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn pure(rng: &mut impl Rng) -> Quaternion {
    Quaternion::pure(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn qmatrix(rng: &mut impl Rng, m: usize, n: usize) -> QMatrix {
    QMatrix::from_fn(m, n, |_, _| quat(rng))
}

pub fn qtensor(rng: &mut impl Rng, dims: (usize, usize, usize)) -> QTensor3 {
    QTensor3::from_fn(dims, |_, _, _| quat(rng))
}

/// Hamilton product through the 4×4 real left-multiplication matrix of `p`.
pub fn hamilton(p: Quaternion, q: Quaternion) -> Quaternion {
    let (a, b, c, d) = (p.w, p.x, p.y, p.z);
    let l = [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]];
    let v = [q.w, q.x, q.y, q.z];
    let r: Vec<f64> = l.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
    Quaternion::new(r[0], r[1], r[2], r[3])
}

/// `[[A1, A2], [−conj(A2), conj(A1)]]` for `Q = A1 + A2·j`, built from scratch.
pub fn adjoint_oracle(q: &QMatrix) -> DMatrix<Complex64> {
    let (m, n) = q.shape();
    DMatrix::from_fn(2 * m, 2 * n, |i, j| {
        let e = q[(i % m, j % n)];
        let a1 = Complex64::new(e.w, e.x);
        let a2 = Complex64::new(e.y, e.z);
        match (i < m, j < n) {
            (true, true) => a1,
            (true, false) => a2,
            (false, true) => -a2.conj(),
            (false, false) => a1.conj(),
        }
    })
}

/// Singular values of the complex adjoint from nalgebra, descending.
pub fn adjoint_singular_values(q: &QMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = adjoint_oracle(q).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal DCT-II matrix written out from the cosine formula.
pub fn dct_oracle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let a = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
                    a * (std::f64::consts::PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos()
                })
                .collect()
        })
        .collect()
}

/// `u·Σ C1[a,i] C2[b,j] C3[c,k] T[i,j,k]` by direct summation.
pub fn qtdct_oracle(t: &QTensor3, u: Quaternion) -> QTensor3 {
    let (n1, n2, n3) = t.dims();
    let (c1, c2, c3) = (dct_oracle(n1), dct_oracle(n2), dct_oracle(n3));
    QTensor3::from_fn((n1, n2, n3), |a, b, c| {
        let mut acc = Quaternion::ZERO;
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    acc += t[(i, j, k)].scale(c1[a][i] * c2[b][j] * c3[c][k]);
                }
            }
        }
        hamilton(u, acc)
    })
}

/// Real inner product `Σ Re(conj(a)·b)` over entries.
pub fn real_inner(a: &QTensor3, b: &QTensor3) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.w * y.w + x.x * y.x + x.y * y.y + x.z * y.z).sum()
}

/// Random perturbation with Frobenius norm `size`.
pub fn perturbation(rng: &mut impl Rng, dims: (usize, usize, usize), size: f64) -> QTensor3 {
    let d = qtensor(rng, dims);
    let n = d.frobenius_norm();
    d.scale(size / n)
}
