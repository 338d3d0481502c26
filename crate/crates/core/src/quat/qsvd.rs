//! Quaternion singular value decomposition through the complex adjoint.
//!
//! The adjoint `χ(Q)` of an `M×N` quaternion matrix is a `2M×2N` complex
//! matrix whose singular values come in equal pairs. A complex right singular
//! vector `c = [c1; c2]` of `χ(Q)` is the first column of `χ(x)` for the
//! quaternion vector `x = c1 - conj(c2)·j`, and `Q·x` then has the modulus of
//! the matching singular value. Columns are converted one pair at a time with
//! a quaternion Gram–Schmidt pass, which also resolves repeated singular
//! values where a floating-point SVD mixes the two members of several pairs.

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::svd::{svd, svd_scratch, ComputeSvdVectors, SvdParams};
use faer::{Auto, Mat, Par};
use num_complex::Complex64;

use super::{complex_adjoint, QMatrix, Quaternion};
use crate::error::{Error, Result};

/// Relative cutoff under which a singular value counts as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Singular values at or below this fraction of the largest one do not
/// define a left singular vector; the left basis is completed instead.
const NULL_CUTOFF: f64 = 1e-13;

/// Residual norm a candidate needs to survive Gram–Schmidt.
const ACCEPT: f64 = 0.5;

/// `Q = U · diag(sigma) · Vᴴ` with `U`, `V` unitary.
#[derive(Clone, Debug)]
pub struct Qsvd {
    pub u: QMatrix,
    pub sigma: Vec<f64>,
    pub v: QMatrix,
}

impl Qsvd {
    /// Numerical rank: entries above `RANK_TOLERANCE · sigma[0]`.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.sigma)
    }

    /// Quaternion nuclear norm, the sum of singular values.
    pub fn nuclear_norm(&self) -> f64 {
        self.sigma.iter().sum()
    }

    /// Rebuilds `U · diag(sigma) · Vᴴ`.
    pub fn recompose(&self) -> QMatrix {
        recompose(&self.u, &self.sigma, &self.v)
    }
}

pub(crate) fn numerical_rank(sigma: &[f64]) -> usize {
    let top = sigma.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > RANK_TOLERANCE * top).count()
}

/// `U · diag(weights) · Vᴴ` using only the leading `weights.len()` columns.
pub(crate) fn recompose(u: &QMatrix, weights: &[f64], v: &QMatrix) -> QMatrix {
    let (m, n) = (u.rows(), v.rows());
    let mut out = QMatrix::zeros(m, n);
    let data = out.as_mut_slice();
    for (l, &s) in weights.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        for i in 0..m {
            let us = u[(i, l)].scale(s);
            let row = &mut data[i * n..(i + 1) * n];
            for (j, o) in row.iter_mut().enumerate() {
                *o += us * v[(j, l)].conj();
            }
        }
    }
    out
}

/// Singular value decomposition of a quaternion matrix.
///
/// Singular values are real, nonnegative and sorted in descending order. Each
/// left singular vector is rotated so that its largest-modulus entry is a
/// positive real number, with the matching right vector rotated alongside.
pub fn qsvd(q: &QMatrix) -> Result<Qsvd> {
    let (m, n) = q.shape();
    let mut out = if m >= n {
        qsvd_tall(q)?
    } else {
        let t = qsvd_tall(&q.conj_transpose())?;
        Qsvd { u: t.v, sigma: t.sigma, v: t.u }
    };
    fix_phases(&mut out);
    Ok(out)
}

/// Singular values only, read from the paired spectrum of the adjoint.
pub fn singular_values(q: &QMatrix) -> Result<Vec<f64>> {
    let (m, n) = q.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(Vec::new());
    }
    let a = adjoint_mat(q);
    let s = run_svd(&a, false)?.0;
    Ok((0..k).map(|i| 0.5 * (s[2 * i] + s[2 * i + 1])).collect())
}

fn adjoint_mat(q: &QMatrix) -> Mat<Complex64> {
    let c = complex_adjoint(q);
    Mat::from_fn(c.rows(), c.cols(), |i, j| c[(i, j)])
}

/// Runs faer's SVD sequentially; returns singular values and, optionally,
/// the full right singular basis.
///
/// The bidiagonal QR iteration occasionally stalls on the exactly paired
/// spectra of adjoint matrices; those cases are retried with the
/// divide-and-conquer path.
fn run_svd(a: &Mat<Complex64>, want_v: bool) -> Result<(Vec<f64>, Option<Mat<Complex64>>)> {
    let auto = <SvdParams as Auto<Complex64>>::auto();
    run_svd_with(a, want_v, auto)
        .or_else(|_| run_svd_with(a, want_v, SvdParams { recursion_threshold: 4, ..auto }))
}

fn run_svd_with(
    a: &Mat<Complex64>,
    want_v: bool,
    params: SvdParams,
) -> Result<(Vec<f64>, Option<Mat<Complex64>>)> {
    let (m, n) = a.shape();
    let k = m.min(n);
    let par = Par::Seq;
    let compute_v = if want_v { ComputeSvdVectors::Full } else { ComputeSvdVectors::No };
    let mut s = Diag::<Complex64>::zeros(k);
    let mut v = want_v.then(|| Mat::<Complex64>::zeros(n, n));
    let mut mem =
        MemBuffer::new(svd_scratch::<Complex64>(m, n, ComputeSvdVectors::No, compute_v, par, params.into()));
    svd(
        a.as_ref(),
        s.as_mut(),
        None,
        v.as_mut().map(|v| v.as_mut()),
        par,
        MemStack::new(&mut mem),
        params.into(),
    )
    .map_err(|_| Error::ConvergenceFailure)?;
    let s: Vec<f64> = (0..k).map(|i| s.column_vector()[i].re).collect();
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    Ok((s, v))
}

fn qsvd_tall(q: &QMatrix) -> Result<Qsvd> {
    let (m, n) = q.shape();
    if n == 0 {
        return Ok(Qsvd { u: QMatrix::identity(m), sigma: Vec::new(), v: QMatrix::zeros(0, 0) });
    }
    let (_, vc) = run_svd(&adjoint_mat(q), true)?;
    let vc = vc.expect("right vectors requested");

    // Right basis from complex right singular vectors, in descending order.
    let mut basis = OrthoBasis::new(n);
    for col in 0..2 * n {
        if basis.is_full() {
            break;
        }
        let x: Vec<Quaternion> =
            (0..n).map(|i| Quaternion::from_cayley_dickson(vc[(i, col)], -vc[(n + i, col)].conj())).collect();
        basis.try_push(x);
    }
    basis.complete();
    let mut v_cols = basis.into_columns();

    // w_i = Q v_i, sigma_i = |w_i|.
    let mut w_cols: Vec<Vec<Quaternion>> = v_cols.iter().map(|v| matvec(q, v)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = w_cols.iter().map(|w| vec_norm(w)).collect();
    order.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| sig[i]).collect();
    v_cols = order.iter().map(|&i| std::mem::take(&mut v_cols[i])).collect();
    w_cols = order.iter().map(|&i| std::mem::take(&mut w_cols[i])).collect();

    let top = sigma[0];
    let mut left = OrthoBasis::new(m);
    for (w, &s) in w_cols.iter().zip(&sigma) {
        if top > 0.0 && s > NULL_CUTOFF * top {
            let u: Vec<Quaternion> = w.iter().map(|&x| x / s).collect();
            if left.try_push(u) {
                continue;
            }
        }
        break;
    }
    left.complete();

    let mut v = QMatrix::zeros(n, n);
    for (j, col) in v_cols.iter().enumerate() {
        v.set_column(j, col);
    }
    let mut u = QMatrix::zeros(m, m);
    for (j, col) in left.into_columns().iter().enumerate() {
        u.set_column(j, col);
    }
    Ok(Qsvd { u, sigma, v })
}

/// Right-multiplies each left vector by a unit quaternion so that its largest
/// entry is real positive, and applies the same rotation to the right vector.
fn fix_phases(s: &mut Qsvd) {
    let (m, n) = (s.u.rows(), s.v.rows());
    for j in 0..m {
        let mut best = 0;
        let mut best_norm = -1.0;
        for i in 0..m {
            let nrm = s.u[(i, j)].norm_sqr();
            if nrm > best_norm {
                best_norm = nrm;
                best = i;
            }
        }
        let pivot = s.u[(best, j)];
        let mag = pivot.norm();
        if mag == 0.0 {
            continue;
        }
        let phase = pivot.conj() / mag;
        for i in 0..m {
            s.u[(i, j)] = s.u[(i, j)] * phase;
        }
        s.u[(best, j)] = Quaternion::real(mag);
        if j < n {
            for i in 0..n {
                s.v[(i, j)] = s.v[(i, j)] * phase;
            }
        }
    }
}

fn matvec(q: &QMatrix, x: &[Quaternion]) -> Vec<Quaternion> {
    (0..q.rows()).map(|i| (0..q.cols()).map(|j| q[(i, j)] * x[j]).sum()).collect()
}

fn vec_norm(x: &[Quaternion]) -> f64 {
    x.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// `xᴴ y`.
fn inner(x: &[Quaternion], y: &[Quaternion]) -> Quaternion {
    x.iter().zip(y).map(|(&a, &b)| a.conj() * b).sum()
}

/// Orthonormal set of quaternion column vectors under the right-scalar inner
/// product, grown by Gram–Schmidt with reorthogonalization.
struct OrthoBasis {
    dim: usize,
    cols: Vec<Vec<Quaternion>>,
}

impl OrthoBasis {
    fn new(dim: usize) -> Self {
        Self { dim, cols: Vec::with_capacity(dim) }
    }

    fn is_full(&self) -> bool {
        self.cols.len() == self.dim
    }

    /// Orthonormalizes `x` against the basis and keeps it when enough of it
    /// survives. `x` is expected to have unit norm.
    fn try_push(&mut self, x: Vec<Quaternion>) -> bool {
        if self.is_full() {
            return false;
        }
        let start = vec_norm(&x);
        if start == 0.0 || !start.is_finite() {
            return false;
        }
        let x = self.residual(x);
        let rest = vec_norm(&x);
        if rest < ACCEPT * start {
            return false;
        }
        self.push_normalized(x, rest);
        true
    }

    /// `x` minus its projection on the basis, done twice.
    fn residual(&self, mut x: Vec<Quaternion>) -> Vec<Quaternion> {
        for _ in 0..2 {
            for b in &self.cols {
                let c = inner(b, &x);
                for (xi, &bi) in x.iter_mut().zip(b) {
                    *xi -= bi * c;
                }
            }
        }
        x
    }

    fn push_normalized(&mut self, mut x: Vec<Quaternion>, norm: f64) {
        for xi in &mut x {
            *xi = *xi / norm;
        }
        self.cols.push(x);
    }

    /// Fills the remaining directions from the standard basis, each time
    /// taking the unit vector that keeps the largest residual. Some unit
    /// vector always keeps at least `1/√dim` of its norm.
    fn complete(&mut self) {
        while !self.is_full() {
            let best = (0..self.dim)
                .map(|e| {
                    let mut x = vec![Quaternion::ZERO; self.dim];
                    x[e] = Quaternion::ONE;
                    let r = self.residual(x);
                    let n = vec_norm(&r);
                    (r, n)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("dim > 0 when not full");
            self.push_normalized(best.0, best.1);
        }
    }

    fn into_columns(self) -> Vec<Vec<Quaternion>> {
        self.cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn unitarity_defect(u: &QMatrix) -> f64 {
        let g = u.conj_transpose().matmul(u).unwrap();
        g.sub(&QMatrix::identity(u.cols())).frobenius_norm()
    }

    #[test]
    fn rank_deficient_bases_stay_unitary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &(m, n, r) in &[(30, 30, 3), (12, 10, 2), (9, 16, 1), (20, 20, 19)] {
            let mut g = || {
                q(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            };
            let a = QMatrix::from_fn(m, r, |_, _| g());
            let b = QMatrix::from_fn(r, n, |_, _| g());
            let p = a.matmul(&b).unwrap();
            let s = qsvd(&p).unwrap();
            assert!(unitarity_defect(&s.u) < 1e-10, "{m}x{n} rank {r}");
            assert!(unitarity_defect(&s.v) < 1e-10, "{m}x{n} rank {r}");
            assert!(s.recompose().sub(&p).frobenius_norm() < 1e-10 * p.frobenius_norm());
            assert_eq!(s.rank(), r);
        }
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let s = qsvd(&QMatrix::identity(5)).unwrap();
        for &x in &s.sigma {
            assert!((x - 1.0).abs() < 1e-14);
        }
        assert!(unitarity_defect(&s.u) < 1e-13);
        assert!(s.recompose().sub(&QMatrix::identity(5)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = [q(0.5, 0.5, 0.5, 0.5), q(0.0, 0.0, 0.0, 0.0), q(0.0, 0.0, 0.0, 0.0)];
        let v = [q(0.0, 0.6, 0.0, 0.0), q(0.0, 0.0, 0.8, 0.0)];
        let m = QMatrix::from_fn(3, 2, |i, j| u[i] * v[j].conj());
        let s = qsvd(&m).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-14);
        assert!(s.sigma[1].abs() < 1e-14);
        assert_eq!(s.rank(), 1);
        assert!(s.recompose().sub(&m).frobenius_norm() < 1e-14);
    }

    #[test]
    fn wide_and_zero_matrices() {
        let m = QMatrix::from_fn(2, 4, |i, j| q(i as f64, j as f64, 1.0, -(i as f64) * (j as f64)));
        let s = qsvd(&m).unwrap();
        assert_eq!(s.sigma.len(), 2);
        assert_eq!((s.u.shape(), s.v.shape()), ((2, 2), (4, 4)));
        assert!(s.recompose().sub(&m).frobenius_norm() < 1e-13 * m.frobenius_norm());
        assert!(unitarity_defect(&s.v) < 1e-13);

        let z = qsvd(&QMatrix::zeros(3, 2)).unwrap();
        assert_eq!(z.sigma, vec![0.0, 0.0]);
        assert_eq!(z.rank(), 0);
        assert!(unitarity_defect(&z.u) < 1e-14);
    }

    #[test]
    fn phase_convention() {
        let m = QMatrix::from_fn(4, 3, |i, j| q((i + j) as f64, 1.0 - j as f64, 0.5 * i as f64, 0.25));
        let s = qsvd(&m).unwrap();
        for j in 0..4 {
            let col = s.u.column(j);
            let (imax, _) =
                col.iter().enumerate().max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr())).unwrap();
            let p = col[imax];
            assert!(p.w > 0.0 && p.x == 0.0 && p.y == 0.0 && p.z == 0.0);
        }
    }

    #[test]
    fn singular_values_agree_with_full_decomposition() {
        let m = QMatrix::from_fn(5, 3, |i, j| q((i * j) as f64 * 0.1, -(i as f64), 0.3 * j as f64, 1.0));
        let a = qsvd(&m).unwrap().sigma;
        let b = singular_values(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * a[0]);
        }
    }
}
