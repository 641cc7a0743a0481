//! Round-trip delay generation: closed-form model, an independent
//! implicit-equation oracle, and seeded noisy measurement synthesis.
//!
//! A source at `u` moving with constant velocity `v` emits a signal that is
//! reflected by sensor `s_i` and received back at the source after delay
//! `t_i`, satisfying `c·t_i = ||u - s_i|| + ||u + v·t_i - s_i||`. The closed
//! form is
//!
//! ```text
//! t_i = (2(u - s_i)'v + 2c·d_i) / (c² - v'v),   d_i = ||u - s_i||.
//! ```
//!
//! Noise is additive zero-mean Gaussian with covariance `Q_n`. The generator
//! is fixed for reproducibility: ChaCha12 keyed by the 64-bit seed, standard
//! normals via `rand_distr::StandardNormal` (ziggurat), correlated noise as a
//! lower-Cholesky factor of `Q_n` times the iid vector.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::scenario::{Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum ForwardError {
    #[error("speed precondition violated: ||v|| = {speed} must be strictly below c = {c}")]
    SpeedPrecondition { speed: f64, c: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("no sign change in bracket [0, {t_max}]: residuals {f_lo} and {f_hi}")]
    NoSignChange { t_max: f64, f_lo: f64, f_hi: f64 },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("noise covariance has no PSD square root: {0}")]
    NoiseFactor(String),
}

/// Noisy round-trip delays for one Monte Carlo draw, plus provenance.
#[derive(Debug, Clone)]
pub struct TdMeasurements {
    /// Measured delays t, seconds.
    pub delays: DVector<f64>,
    /// True delays t°, seconds.
    pub true_delays: DVector<f64>,
    /// Seed of the noise draw.
    pub seed: u64,
    /// Label of the generating scenario.
    pub scenario_label: String,
}

impl TdMeasurements {
    pub fn m(&self) -> usize {
        self.delays.len()
    }

    /// Debug dump: one `(sensor index, t_true, t)` row per sensor.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "sensor,t_true_s,t_s")?;
        for i in 0..self.m() {
            writeln!(out, "{},{},{}", i + 1, self.true_delays[i], self.delays[i])?;
        }
        Ok(())
    }
}

/// Closed-form true round-trip delay for one sensor.
pub fn true_delay(
    u: &DVector<f64>,
    v: &DVector<f64>,
    c: f64,
    sensor: &DVector<f64>,
) -> Result<f64, ForwardError> {
    let speed = v.norm();
    if speed >= c {
        return Err(ForwardError::SpeedPrecondition { speed, c });
    }
    let diff = u - sensor;
    let d = diff.norm();
    Ok((2.0 * diff.dot(v) + 2.0 * c * d) / (c * c - v.dot(v)))
}

/// Independent oracle: solve `c·t = ||u - s|| + ||u + v·t - s||` for `t` by
/// bisection on `[0, 4d/(c - ||v||)]`. Does not call [`true_delay`].
pub fn true_delay_implicit(
    u: &DVector<f64>,
    v: &DVector<f64>,
    c: f64,
    sensor: &DVector<f64>,
    tol: f64,
) -> Result<f64, ForwardError> {
    if tol <= 0.0 {
        return Err(ForwardError::BadTolerance(tol));
    }
    let speed = v.norm();
    let d = (u - sensor).norm();
    if d == 0.0 {
        // degenerate zero-distance case: c·t = ||v t|| has the root t = 0
        if speed >= c {
            return Err(ForwardError::SpeedPrecondition { speed, c });
        }
        return Ok(0.0);
    }
    let residual = |t: f64| c * t - d - (u + v * t - sensor).norm();
    let t_max = 4.0 * d / (c - speed);
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(ForwardError::NoSignChange {
            t_max,
            f_lo: residual(0.0),
            f_hi: f64::NAN,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, t_max);
    let (f_lo, f_hi) = (residual(lo), residual(hi));
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(ForwardError::NoSignChange { t_max, f_lo, f_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.max(f64::MIN_POSITIVE) {
            break;
        }
        if residual(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lower-triangular square-root factor of a PSD covariance. Cholesky when the
/// matrix is PD; symmetric-eigen square root for PSD-singular matrices.
fn noise_factor(q: &DMatrix<f64>) -> Result<DMatrix<f64>, ForwardError> {
    if q.iter().all(|&x| x == 0.0) {
        return Ok(DMatrix::zeros(q.nrows(), q.ncols()));
    }
    if let Some(chol) = q.clone().cholesky() {
        return Ok(chol.l());
    }
    let eig = q.clone().symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let mut sqrt_vals = eig.eigenvalues.clone();
    for lam in sqrt_vals.iter_mut() {
        if *lam < -1e-10 * scale {
            return Err(ForwardError::NoiseFactor(format!(
                "negative eigenvalue {lam}"
            )));
        }
        *lam = lam.max(0.0).sqrt();
    }
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals))
}

/// Simulate one noisy measurement vector. Identical `(scenario, seed)` inputs
/// produce bitwise-identical output.
pub fn simulate_measurements(
    scenario: &Scenario,
    seed: u64,
) -> Result<TdMeasurements, ForwardError> {
    scenario.validate()?;
    let m = scenario.m();
    let mut t_true = DVector::zeros(m);
    for (i, s) in scenario.sensors.iter().enumerate() {
        t_true[i] = true_delay(
            &scenario.source_position,
            &scenario.source_velocity,
            scenario.signal_speed,
            s,
        )?;
    }
    let delays = if scenario.noise.is_zero() {
        t_true.clone()
    } else {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let z = DVector::from_iterator(m, (0..m).map(|_| StandardNormal.sample(&mut rng)));
        let factor = noise_factor(&scenario.noise_cov())?;
        &t_true + factor * z
    };
    Ok(TdMeasurements {
        delays,
        true_delays: t_true,
        seed,
        scenario_label: scenario.label.clone(),
    })
}

/// SplitMix64-style finalizer mixing a base seed with a stream index. Used by
/// the harness to derive per-run seeds so that serial and parallel execution
/// see identical streams.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
