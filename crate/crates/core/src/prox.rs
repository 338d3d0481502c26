//! Proximal maps: singular value thresholding under the nuclear and
//! logarithmic norms, and entrywise quaternion shrinkage.

use crate::error::{invalid, Result};
use crate::qtensor::{transform_svd, QTensor3, TransformSpec};

/// Weight `λ` and offset `ε` of the penalty `λ·Σ log(σ + ε)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPenaltyParams {
    lambda: f64,
    eps: f64,
}

impl LogPenaltyParams {
    pub fn new(lambda: f64, eps: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", format!("{lambda} must be positive")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(invalid("eps", format!("{eps} must be positive")));
        }
        Ok(Self { lambda, eps })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `h(a) = ½(a − x)² + λ·log(a + ε)`.
    pub fn objective(&self, a: f64, x: f64) -> f64 {
        0.5 * (a - x) * (a - x) + self.lambda * (a + self.eps).ln()
    }
}

/// Minimizer of `h(a) = ½(a − x)² + λ·log(a + ε)` over `a ≥ 0`.
///
/// The stationary points solve `a² + (ε − x)a + λ − xε = 0`. When the
/// discriminant is not positive, `h` is increasing on `a ≥ 0` and the answer
/// is 0. Otherwise the larger root is the only local minimum and it competes
/// with the boundary; ties go to 0.
pub fn log_scalar_threshold(x: f64, params: &LogPenaltyParams) -> f64 {
    let (lambda, eps) = (params.lambda, params.eps);
    let delta = (x - eps) * (x - eps) - 4.0 * (lambda - x * eps);
    if delta <= 0.0 {
        return 0.0;
    }
    let a = 0.5 * (x - eps + delta.sqrt());
    if a <= 0.0 {
        return 0.0;
    }
    if params.objective(a, x) < params.objective(0.0, x) {
        a
    } else {
        0.0
    }
}

/// Nuclear-norm prox: every transform-domain singular value is shrunk by `tau`.
pub fn qtsvt(x: &QTensor3, tau: f64, spec: &TransformSpec) -> Result<QTensor3> {
    if tau.is_nan() || tau < 0.0 {
        return Err(invalid("tau", format!("{tau} must be nonnegative")));
    }
    transform_svd(x, spec)?.recompose_with(spec, |s| (s - tau).max(0.0))
}

/// Logarithmic-norm prox: [`log_scalar_threshold`] on every transform-domain
/// singular value.
pub fn qtlsvt(x: &QTensor3, params: &LogPenaltyParams, spec: &TransformSpec) -> Result<QTensor3> {
    transform_svd(x, spec)?.recompose_with(spec, |s| log_scalar_threshold(s, params))
}

/// Entrywise quaternion soft threshold.
pub fn l1_prox(x: &QTensor3, tau: f64) -> QTensor3 {
    x.map(|q| q.soft_threshold(tau))
}
