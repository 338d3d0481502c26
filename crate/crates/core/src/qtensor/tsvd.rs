use rayon::prelude::*;

use super::{mode3_transform, Direction, QTensor3, TransformSpec};
use crate::error::{invalid, Error, Result};
use crate::quat::{qsvd, recompose, singular_values, QMatrix, Qsvd, RANK_TOLERANCE};

/// `T = U ⋆QT D ⋆QT Vᴴ`, all three factors in the spatial domain.
#[derive(Clone, Debug)]
pub struct TqtSvd {
    pub u: QTensor3,
    pub d: QTensor3,
    pub v: QTensor3,
}

/// Per-slice QSVDs of `L(T)`.
#[derive(Clone, Debug)]
pub struct TransformSvd {
    dims: (usize, usize, usize),
    slices: Vec<Qsvd>,
}

/// Singular values of every transform-domain frontal slice.
///
/// Column `k` holds the descending singular values of `L(T)⁽ᵏ⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct TubalSpectrum {
    rows: usize,
    slices: usize,
    values: Vec<f64>,
}

/// Rank surrogates measured on a spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankSurrogates {
    /// Sum of all singular values.
    pub qtnn: f64,
    /// Sum of all but the `r` largest singular values of each slice.
    pub qt_rnn: f64,
    /// `Σ log(σᵖ + ε)` over the spectrum.
    pub qtln: f64,
}

/// Runs a QSVD on every frontal slice of `L(T)`.
pub fn transform_svd(t: &QTensor3, spec: &TransformSpec) -> Result<TransformSvd> {
    let hat = mode3_transform(t, spec, Direction::Forward)?;
    let slices =
        (0..hat.dims().2).into_par_iter().map(|k| qsvd(&hat.frontal_slice(k))).collect::<Result<Vec<_>>>()?;
    Ok(TransformSvd { dims: t.dims(), slices })
}

/// TQt-SVD: QSVD of each transform-domain slice, mapped back with `L⁻¹`.
pub fn tqt_svd(t: &QTensor3, spec: &TransformSpec) -> Result<TqtSvd> {
    transform_svd(t, spec)?.into_tqt_svd(spec)
}

/// Transform-domain singular values of `T`.
pub fn tubal_spectrum(t: &QTensor3, spec: &TransformSpec) -> Result<TubalSpectrum> {
    let hat = mode3_transform(t, spec, Direction::Forward)?;
    let (n1, n2, n3) = hat.dims();
    let cols = (0..n3)
        .into_par_iter()
        .map(|k| singular_values(&hat.frontal_slice(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TubalSpectrum::from_columns(n1.min(n2), cols))
}

impl TransformSvd {
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn slices(&self) -> &[Qsvd] {
        &self.slices
    }

    pub fn spectrum(&self) -> TubalSpectrum {
        let rows = self.dims.0.min(self.dims.1);
        TubalSpectrum::from_columns(rows, self.slices.iter().map(|s| s.sigma.clone()).collect())
    }

    /// `L⁻¹` of the slices `U⁽ᵏ⁾ · diag(f(σ)) · V⁽ᵏ⁾ᴴ`.
    pub fn recompose_with(&self, spec: &TransformSpec, f: impl Fn(f64) -> f64 + Sync) -> Result<QTensor3> {
        let (n1, n2, n3) = self.dims;
        let slices: Vec<QMatrix> = self
            .slices
            .par_iter()
            .map(|s| {
                let w: Vec<f64> = s.sigma.iter().map(|&x| f(x)).collect();
                recompose(&s.u, &w, &s.v)
            })
            .collect();
        let mut hat = QTensor3::zeros((n1, n2, n3));
        for (k, s) in slices.iter().enumerate() {
            hat.set_frontal_slice(k, s);
        }
        mode3_transform(&hat, spec, Direction::Inverse)
    }

    pub fn into_tqt_svd(self, spec: &TransformSpec) -> Result<TqtSvd> {
        let (n1, n2, n3) = self.dims;
        let mut u = QTensor3::zeros((n1, n1, n3));
        let mut d = QTensor3::zeros((n1, n2, n3));
        let mut v = QTensor3::zeros((n2, n2, n3));
        for (k, s) in self.slices.iter().enumerate() {
            u.set_frontal_slice(k, &s.u);
            v.set_frontal_slice(k, &s.v);
            d.set_frontal_slice(k, &QMatrix::from_diagonal(n1, n2, &s.sigma));
        }
        Ok(TqtSvd {
            u: mode3_transform(&u, spec, Direction::Inverse)?,
            d: mode3_transform(&d, spec, Direction::Inverse)?,
            v: mode3_transform(&v, spec, Direction::Inverse)?,
        })
    }
}

impl TubalSpectrum {
    /// Builds a spectrum from per-slice columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: Vec<Vec<f64>>) -> Self {
        let slices = columns.len();
        let mut values = Vec::with_capacity(rows * slices);
        for c in columns {
            assert_eq!(c.len(), rows, "spectrum column length");
            values.extend(c);
        }
        Self { rows, slices, values }
    }

    /// `min(I1, I2)`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `I3`.
    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[k * self.rows + j]
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.values[k * self.rows..(k + 1) * self.rows]
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest per-slice count of singular values above `1e-10` times the
    /// global maximum.
    pub fn tubal_rank(&self) -> usize {
        let cut = RANK_TOLERANCE * self.max();
        if self.max() <= 0.0 {
            return 0;
        }
        (0..self.slices).map(|k| self.column(k).iter().filter(|&&s| s > cut).count()).max().unwrap_or(0)
    }

    pub fn sum_squares(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }

    pub fn qtnn(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Sum of the `r` largest singular values of each slice.
    pub fn top_sum(&self, r: usize) -> f64 {
        (0..self.slices).map(|k| self.column(k).iter().take(r).sum::<f64>()).sum()
    }
}

/// QTNN, QT-RNN and QTLN of a spectrum.
pub fn rank_surrogates(spectrum: &TubalSpectrum, r: usize, p: f64, eps: f64) -> Result<RankSurrogates> {
    if r >= spectrum.rows() {
        return Err(Error::InvalidTruncation { rank: r, limit: spectrum.rows() });
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("p", format!("{p} is outside (0, 1]")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid("eps", format!("{eps} must be positive")));
    }
    let qtnn = spectrum.qtnn();
    let qt_rnn = (0..spectrum.slices()).map(|k| spectrum.column(k).iter().skip(r).sum::<f64>()).sum();
    let qtln = spectrum.values().map(|s| (s.powf(p) + eps).ln()).sum();
    Ok(RankSurrogates { qtnn, qt_rnn, qtln })
}
