use faer::Mat;

/// Orthonormal DCT-II matrix `C[k][n] = a_k · cos(π(2n+1)k / 2N)` with
/// `a_0 = sqrt(1/N)` and `a_k = sqrt(2/N)` otherwise, so `C⁻¹ = Cᵀ`.
pub fn dct2_matrix(n: usize) -> Mat<f64> {
    let nf = n as f64;
    Mat::from_fn(n, n, |k, i| {
        let a = if k == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        a * (std::f64::consts::PI * (2 * i + 1) as f64 * k as f64 / (2.0 * nf)).cos()
    })
}

/// `‖A·B − I‖_F` for square `A`, `B`.
pub(crate) fn identity_defect(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let p = a * b;
    let n = p.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = p[(i, j)] - if i == j { 1.0 } else { 0.0 };
            s += e * e;
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal() {
        for n in [1, 2, 3, 8, 17] {
            let c = dct2_matrix(n);
            let ct = c.transpose().to_owned();
            assert!(identity_defect(&c, &ct) < 1e-13);
        }
    }

    #[test]
    fn first_row_is_constant() {
        let c = dct2_matrix(4);
        for i in 0..4 {
            assert!((c[(0, i)] - 0.5).abs() < 1e-15);
        }
    }
}
