//! Estimation-floor oracle and error statistics: the Cramér–Rao lower bound
//! under the Gaussian delay-noise model, and the MSE / RMSE / LOGMSED / CDF
//! summaries used by the experiment harness.
//!
//! With delays `t = t°(u, v) + n`, `n ~ N(0, Q_n)`, the Fisher information
//! of the stacked parameter `z = [u; v]` is `J' Q_n^{-1} J` where `J` is the
//! analytic delay Jacobian; the position and velocity bounds are the traces
//! of the corresponding blocks of its inverse.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("source position coincides with sensor {0}")]
    ZeroDistance(usize),
    #[error("noise covariance is singular or not positive definite")]
    SingularNoise,
    #[error("Fisher information matrix is singular (degenerate geometry)")]
    SingularFim,
    #[error("empty input list")]
    EmptyInput,
    #[error("mean square error must be positive, got {0}")]
    NonPositiveMse(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Analytic Jacobian `J` of the true delays with respect to `z = [u; v]`,
/// an `M x 2p` matrix. Row `i` is
///
/// ```text
/// dt_i/du = (2 v + 2 c (u - s_i)/d_i) / (c² - v'v)
/// dt_i/dv = (2 (u - s_i) + 2 t_i v) / (c² - v'v)
/// ```
pub fn delay_jacobian(
    u: &DVector<f64>,
    v: &DVector<f64>,
    c: f64,
    sensors: &[DVector<f64>],
) -> Result<DMatrix<f64>, AnalysisError> {
    let p = u.len();
    let m = sensors.len();
    let den = c * c - v.dot(v);
    let mut j = DMatrix::zeros(m, 2 * p);
    for (i, s) in sensors.iter().enumerate() {
        let diff = u - s;
        let d = diff.norm();
        if d <= 0.0 {
            return Err(AnalysisError::ZeroDistance(i + 1));
        }
        let t = (2.0 * diff.dot(v) + 2.0 * c * d) / den;
        for k in 0..p {
            j[(i, k)] = (2.0 * v[k] + 2.0 * c * diff[k] / d) / den;
            j[(i, p + k)] = (2.0 * diff[k] + 2.0 * t * v[k]) / den;
        }
    }
    Ok(j)
}

/// Fisher information and the position/velocity bounds derived from it.
#[derive(Debug, Clone)]
pub struct CrlbResult {
    /// `2p x 2p` Fisher information matrix `J' Q_n^{-1} J`.
    pub fim: DMatrix<f64>,
    /// Trace of the position block of `fim^{-1}`, m².
    pub crlb_u: f64,
    /// Trace of the velocity block of `fim^{-1}`, m²/s².
    pub crlb_v: f64,
}

/// Cramér–Rao lower bound for the joint position/velocity estimate.
pub fn crlb(
    u: &DVector<f64>,
    v: &DVector<f64>,
    c: f64,
    sensors: &[DVector<f64>],
    q_n: &DMatrix<f64>,
) -> Result<CrlbResult, AnalysisError> {
    let p = u.len();
    let m = sensors.len();
    if q_n.nrows() != m || q_n.ncols() != m {
        return Err(AnalysisError::DimensionMismatch(format!(
            "covariance is {}x{} for {m} sensors",
            q_n.nrows(),
            q_n.ncols()
        )));
    }
    let j = delay_jacobian(u, v, c, sensors)?;
    let q_inv = q_n
        .clone()
        .cholesky()
        .ok_or(AnalysisError::SingularNoise)?
        .inverse();
    let fim = j.transpose() * q_inv * &j;
    let fim = (&fim + fim.transpose()) * 0.5;
    let fim_inv = fim
        .clone()
        .cholesky()
        .ok_or(AnalysisError::SingularFim)?
        .inverse();
    let crlb_u = (0..p).map(|k| fim_inv[(k, k)]).sum();
    let crlb_v = (0..p).map(|k| fim_inv[(p + k, p + k)]).sum();
    Ok(CrlbResult { fim, crlb_u, crlb_v })
}

/// Aggregate error statistics over K Monte Carlo runs.
#[derive(Debug, Clone)]
pub struct ErrorStats {
    pub k: usize,
    /// Mean squared position error, m².
    pub mse_u: f64,
    /// Mean squared velocity error, m²/s².
    pub mse_v: f64,
    pub rmse_u: f64,
    pub rmse_v: f64,
    /// Per-run position error magnitudes, sorted ascending.
    pub position_errors: Vec<f64>,
    /// Per-run velocity error magnitudes, sorted ascending.
    pub velocity_errors: Vec<f64>,
}

impl ErrorStats {
    /// Build from per-run error magnitudes.
    pub fn from_errors(
        mut position_errors: Vec<f64>,
        mut velocity_errors: Vec<f64>,
    ) -> Result<Self, AnalysisError> {
        if position_errors.is_empty() || position_errors.len() != velocity_errors.len() {
            return Err(AnalysisError::EmptyInput);
        }
        let k = position_errors.len();
        let mse_u = position_errors.iter().map(|e| e * e).sum::<f64>() / k as f64;
        let mse_v = velocity_errors.iter().map(|e| e * e).sum::<f64>() / k as f64;
        position_errors.sort_by(f64::total_cmp);
        velocity_errors.sort_by(f64::total_cmp);
        Ok(ErrorStats {
            k,
            mse_u,
            mse_v,
            rmse_u: mse_u.sqrt(),
            rmse_v: mse_v.sqrt(),
            position_errors,
            velocity_errors,
        })
    }
}

/// Mean squared error of a batch of estimates against a fixed truth.
pub fn mse(
    estimates: &[(DVector<f64>, DVector<f64>)],
    truth_u: &DVector<f64>,
    truth_v: &DVector<f64>,
) -> Result<ErrorStats, AnalysisError> {
    if estimates.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let pos: Vec<f64> = estimates.iter().map(|(u, _)| (u - truth_u).norm()).collect();
    let vel: Vec<f64> = estimates.iter().map(|(_, v)| (v - truth_v).norm()).collect();
    ErrorStats::from_errors(pos, vel)
}

/// Log-scale MSE difference `10 log10(mse_pf) - 10 log10(mse_r)` in dB;
/// negative when the penalized estimator improves on the relaxation.
pub fn logmsed(mse_pf: f64, mse_r: f64) -> Result<f64, AnalysisError> {
    if mse_pf <= 0.0 {
        return Err(AnalysisError::NonPositiveMse(mse_pf));
    }
    if mse_r <= 0.0 {
        return Err(AnalysisError::NonPositiveMse(mse_r));
    }
    Ok(10.0 * mse_pf.log10() - 10.0 * mse_r.log10())
}

/// Empirical CDF with a nearest-rank quantile accessor.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut errors: Vec<f64>) -> Result<Self, AnalysisError> {
        if errors.is_empty() {
            return Err(AnalysisError::EmptyInput);
        }
        errors.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted: errors })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// Nearest-rank quantile: the `ceil(q * K)`-th smallest value.
    pub fn quantile(&self, q: f64) -> f64 {
        let k = self.sorted.len();
        let rank = ((q * k as f64).ceil() as usize).clamp(1, k);
        self.sorted[rank - 1]
    }

    /// Fraction of samples at or below `x`.
    pub fn fraction_at_or_below(&self, x: f64) -> f64 {
        let count = self.sorted.iter().take_while(|&&e| e <= x).count();
        count as f64 / self.sorted.len() as f64
    }
}
