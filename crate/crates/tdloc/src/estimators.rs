//! The three estimators: the plain SDP relaxation, the penalized variant
//! that drives the solution toward rank one, and the adaptive loop that
//! chooses the penalty coefficient.
//!
//! All three share one pipeline: nondimensionalize the measurement problem
//! ([`crate::linearize::Scaling`], on by default), assemble `C = G' W G` and
//! the `M + 3` trace constraints, solve the SDP, and extract the source
//! state from the solution matrix. The penalized cost is
//!
//! ```text
//! C' = C + eta * P,   P = diag(1, ..., 1, 0),
//! ```
//!
//! so the penalty charges every diagonal entry of `X` except the
//! homogenization corner. The adaptive estimator grows `eta` geometrically
//! until the eigen-ratio test reports rank one, then accepts only if the
//! data-fit objective `Tr(C X)` stays below a threshold `epsilon` drawn from
//! the weighted chi-square law that the objective obeys at a non-excessive
//! optimum; otherwise it reverts the last penalty increase, relaxes the
//! rank-one threshold by `alpha`, and re-solves.
//!
//! Scale conventions: `u_hat`, `v_hat`, and `x_hat` are reported in SI
//! units; `tau`, `objective`, `epsilon_used`, the solution matrix, and the
//! rank-one witness live in the scaled space the solver saw.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::forward::{derive_seed, TdMeasurements};
use crate::linearize::{
    assemble, build_constraints, build_g, build_weight, ConstraintSet, LinearSystem,
    LinearizeError, Scaling,
};
use crate::scenario::ParamVector;
use crate::sdp::{
    eigen_ratio, extract_solution, solve, SdpError, SdpProblem, SdpSolution, SolveStatus,
};

/// Stream tag for the epsilon-threshold Monte Carlo draws, mixed with the
/// measurement seed.
const EPSILON_SEED_STREAM: u64 = 0x5D1A_7E57;

/// Rank-one report threshold for the non-adaptive estimators.
const DEFAULT_RANK_ONE_DELTA: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
    #[error("solver finished with status {status:?} (gap {gap:.3e})")]
    SolverFailed { status: SolveStatus, gap: f64 },
    #[error("solver failed inside the adaptive loop with status {status:?} after {steps} steps")]
    AdaptiveAborted { status: SolveStatus, steps: usize },
    #[error("invalid penalty configuration: {0}")]
    BadConfig(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("quantile {0} outside (0, 1)")]
    BadQuantile(f64),
    #[error("negative penalty coefficient {0}")]
    NegativePenalty(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Tuning knobs of the adaptive penalty loop.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct PenaltyConfig {
    /// Initial penalty coefficient.
    pub eta0: f64,
    /// Geometric step factor for the penalty (> 1).
    pub gamma: f64,
    /// Relaxation factor for the rank-one threshold on backtrack (> 1).
    pub alpha: f64,
    /// Rank-one threshold on the eigen ratio.
    pub delta: f64,
    /// Quantile of the weighted chi-square law used as the
    /// excessive-penalty threshold.
    pub quantile: f64,
    /// Monte Carlo sample count for the quantile estimate.
    pub mc_samples: usize,
    /// Cap on outer iterations (SDP solves).
    pub max_outer: usize,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            eta0: 1e-6,
            gamma: 10.0,
            alpha: 5.0,
            delta: 1e-5,
            quantile: 0.99,
            mc_samples: 100_000,
            max_outer: 50,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<(), EstimateError> {
        if self.eta0 < 0.0 {
            return Err(EstimateError::NegativePenalty(self.eta0));
        }
        if self.gamma <= 1.0 {
            return Err(EstimateError::BadConfig(format!(
                "gamma {} must exceed 1",
                self.gamma
            )));
        }
        if self.alpha <= 1.0 {
            return Err(EstimateError::BadConfig(format!(
                "alpha {} must exceed 1",
                self.alpha
            )));
        }
        if self.delta <= 0.0 {
            return Err(EstimateError::BadConfig(format!(
                "delta {} must be positive",
                self.delta
            )));
        }
        if self.quantile <= 0.0 || self.quantile >= 1.0 {
            return Err(EstimateError::BadQuantile(self.quantile));
        }
        if self.mc_samples == 0 || self.max_outer == 0 {
            return Err(EstimateError::BadConfig(
                "mc_samples and max_outer must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Solver-level knobs shared by the estimators.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorOptions {
    /// Nondimensionalize before solving (default on).
    pub scaling: bool,
    pub sdp_tolerance: f64,
    pub sdp_max_iterations: usize,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            scaling: true,
            sdp_tolerance: 1e-9,
            sdp_max_iterations: 100,
        }
    }
}

/// What happened at one step of the adaptive loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ApfAction {
    /// Plain solve (non-adaptive estimators).
    Solve,
    /// Rank test failed; the penalty was increased.
    IncreasePenalty,
    /// Rank test passed and the objective stayed below epsilon.
    Accept,
    /// Objective exceeded epsilon; penalty reverted, threshold relaxed.
    Backtrack,
}

/// One entry of the per-call trace.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ApfStep {
    pub eta: f64,
    pub tau: f64,
    /// Data-fit objective `Tr(C X)` in scaled units.
    pub objective: f64,
    pub delta: f64,
    pub epsilon: Option<f64>,
    pub action: ApfAction,
}

/// Solver diagnostics carried along with an estimate.
#[derive(Debug, Clone, Copy)]
pub struct SolveDiagnostics {
    pub status: SolveStatus,
    pub iterations: usize,
    pub gap: f64,
    pub feasibility: f64,
    /// Full objective the solver minimized (data fit plus penalty).
    pub solver_objective: f64,
}

/// Output of any of the three estimators.
#[derive(Debug, Clone)]
pub struct EstimateResult {
    /// Estimated initial position, meters.
    pub u_hat: DVector<f64>,
    /// Estimated velocity, meters/second.
    pub v_hat: DVector<f64>,
    /// Full extracted parameter vector, SI units.
    pub x_hat: ParamVector,
    /// Eigen ratio of the solution matrix.
    pub tau: f64,
    /// Data-fit objective `Tr(C X)`, scaled units.
    pub objective: f64,
    /// Penalty coefficient in force at the reported solution.
    pub eta_final: f64,
    /// `tau < delta` for the delta in force at acceptance.
    pub rank_one: bool,
    /// `max_i |X_ii - X_iN^2| / (1 + X_ii)` over `i < N`, scaled units.
    pub rank_one_witness: f64,
    /// Excessive-penalty threshold used at acceptance, when computed.
    pub epsilon_used: Option<f64>,
    /// False when the adaptive loop hit its iteration cap.
    pub converged: bool,
    pub diagnostics: SolveDiagnostics,
    /// Solution matrix in scaled units.
    pub x_matrix: DMatrix<f64>,
    pub trace: Vec<ApfStep>,
}

/// Scaled problem data shared by one estimator call.
struct Prepared {
    scaling: Scaling,
    sensors: Vec<DVector<f64>>,
    speed: f64,
    noise_cov: DMatrix<f64>,
    system: LinearSystem,
    constraints: ConstraintSet,
    p: usize,
    m: usize,
    n: usize,
}

fn prepare(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    options: &EstimatorOptions,
) -> Result<Prepared, EstimateError> {
    let m = sensors.len();
    if m == 0 {
        return Err(EstimateError::DegenerateGeometry("no sensors".into()));
    }
    let p = sensors[0].len();
    if sensors.iter().any(|s| s.len() != p) {
        return Err(EstimateError::DimensionMismatch(
            "sensors of mixed dimension".into(),
        ));
    }
    if m < 2 * p + 1 {
        return Err(EstimateError::DegenerateGeometry(format!(
            "M = {m} sensors below the 2p+1 = {} minimum",
            2 * p + 1
        )));
    }
    if measurements.m() != m {
        return Err(EstimateError::DimensionMismatch(format!(
            "{} measurements for {m} sensors",
            measurements.m()
        )));
    }
    if q_n.nrows() != m || q_n.ncols() != m {
        return Err(EstimateError::DimensionMismatch(format!(
            "noise covariance is {}x{}, expected {m}x{m}",
            q_n.nrows(),
            q_n.ncols()
        )));
    }
    let scaling = if options.scaling {
        Scaling::for_sensors(sensors, c)
    } else {
        Scaling::identity()
    };
    let sensors_s = scaling.scale_sensors(sensors);
    let speed = scaling.scale_speed(c);
    let t_s = scaling.scale_delays(&measurements.delays);
    let qn_s = scaling.scale_noise_cov(q_n);
    let g = build_g(&t_s, &sensors_s, speed)?;
    let w = build_weight(&qn_s)?;
    let system = assemble(g, w, t_s);
    let constraints = build_constraints(&sensors_s, p);
    Ok(Prepared {
        scaling,
        sensors: sensors_s,
        speed,
        noise_cov: qn_s,
        system,
        constraints,
        p,
        m,
        n: m + 2 * p + 3,
    })
}

/// Diagonal penalty matrix: ones except the homogenization corner.
fn penalty_matrix(n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::identity(n, n);
    p[(n - 1, n - 1)] = 0.0;
    p
}

/// One solved penalized problem, before un-scaling.
struct Candidate {
    solution: SdpSolution,
    tau: f64,
    /// Data-fit part of the objective, `Tr(C X)`.
    objective: f64,
    u_scaled: DVector<f64>,
    v_scaled: DVector<f64>,
    x_scaled: ParamVector,
    eta: f64,
    rank_one: bool,
    witness: f64,
}

fn lemma_one_witness(x: &DMatrix<f64>) -> f64 {
    let n = x.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n - 1 {
        let gap = (x[(i, i)] - x[(i, n - 1)].powi(2)).abs() / (1.0 + x[(i, i)]);
        worst = worst.max(gap);
    }
    worst
}

fn solve_penalized(
    prep: &Prepared,
    eta: f64,
    delta: f64,
    options: &EstimatorOptions,
) -> Result<Candidate, EstimateError> {
    let cost = if eta > 0.0 {
        &prep.system.c + penalty_matrix(prep.n) * eta
    } else {
        prep.system.c.clone()
    };
    let problem = SdpProblem::new(cost, prep.constraints.clone())
        .with_tolerance(options.sdp_tolerance)
        .with_max_iterations(options.sdp_max_iterations);
    let solution = solve(&problem);
    if solution.status != SolveStatus::Optimal {
        return Err(EstimateError::SolverFailed {
            status: solution.status,
            gap: solution.gap,
        });
    }
    let tau = eigen_ratio(&solution.x)?;
    let objective = prep.system.c.dot(&solution.x);
    let (u_scaled, v_scaled, x_scaled) = extract_solution(&solution.x, prep.p, prep.m)?;
    let witness = lemma_one_witness(&solution.x);
    Ok(Candidate {
        tau,
        objective,
        u_scaled,
        v_scaled,
        x_scaled,
        eta,
        rank_one: tau < delta,
        witness,
        solution,
    })
}

fn finalize(
    prep: &Prepared,
    cand: Candidate,
    epsilon: Option<f64>,
    converged: bool,
    trace: Vec<ApfStep>,
) -> EstimateResult {
    let u_hat = prep.scaling.unscale_position(&cand.u_scaled);
    let v_hat = prep.scaling.unscale_velocity(&cand.v_scaled);
    let scale = prep.scaling.param_scale(prep.p, prep.m);
    let x_si = cand.x_scaled.as_vector().component_mul(&scale);
    let x_hat =
        ParamVector::from_raw(x_si, prep.p).expect("scaling preserves the homogenization entry");
    EstimateResult {
        u_hat,
        v_hat,
        x_hat,
        tau: cand.tau,
        objective: cand.objective,
        eta_final: cand.eta,
        rank_one: cand.rank_one,
        rank_one_witness: cand.witness,
        epsilon_used: epsilon,
        converged,
        diagnostics: SolveDiagnostics {
            status: cand.solution.status,
            iterations: cand.solution.iterations,
            gap: cand.solution.gap,
            feasibility: cand.solution.feasibility,
            solver_objective: cand.solution.objective,
        },
        x_matrix: cand.solution.x,
        trace,
    }
}

/// Relaxed SDP estimator: solve the lifted problem with the rank-one
/// constraint dropped. The rank-one flag is reported, not enforced.
pub fn rsdp(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
) -> Result<EstimateResult, EstimateError> {
    rsdp_with(measurements, sensors, c, q_n, &EstimatorOptions::default())
}

pub fn rsdp_with(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    options: &EstimatorOptions,
) -> Result<EstimateResult, EstimateError> {
    pf_sdp_with(measurements, sensors, c, q_n, 0.0, options)
}

/// Penalty-function SDP estimator at a fixed penalty coefficient `eta`.
pub fn pf_sdp(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    eta: f64,
) -> Result<EstimateResult, EstimateError> {
    pf_sdp_with(
        measurements,
        sensors,
        c,
        q_n,
        eta,
        &EstimatorOptions::default(),
    )
}

pub fn pf_sdp_with(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    eta: f64,
    options: &EstimatorOptions,
) -> Result<EstimateResult, EstimateError> {
    if eta < 0.0 {
        return Err(EstimateError::NegativePenalty(eta));
    }
    let prep = prepare(measurements, sensors, c, q_n, options)?;
    let cand = solve_penalized(&prep, eta, DEFAULT_RANK_ONE_DELTA, options)?;
    let step = ApfStep {
        eta,
        tau: cand.tau,
        objective: cand.objective,
        delta: DEFAULT_RANK_ONE_DELTA,
        epsilon: None,
        action: ApfAction::Solve,
    };
    Ok(finalize(&prep, cand, None, true, vec![step]))
}

/// State Jacobian `H = dx/dz` of the lifted vector with respect to the free
/// variables `z = [u; v]`, evaluated at `(u, v)`. Rows follow the lifted
/// layout; the distance rows carry `(u - s_i)'/d_i`.
pub fn state_jacobian(
    u: &DVector<f64>,
    v: &DVector<f64>,
    sensors: &[DVector<f64>],
) -> Result<DMatrix<f64>, EstimateError> {
    let p = u.len();
    let m = sensors.len();
    let n = m + 2 * p + 3;
    let mut h = DMatrix::zeros(n, 2 * p);
    for k in 0..p {
        h[(k, k)] = 1.0;
        h[(p + k, p + k)] = 1.0;
        h[(2 * p, k)] = v[k];
        h[(2 * p, p + k)] = u[k];
        h[(2 * p + 1, p + k)] = 2.0 * v[k];
    }
    for (i, s) in sensors.iter().enumerate() {
        let diff = u - s;
        let d = diff.norm();
        if d <= 0.0 {
            return Err(EstimateError::DegenerateGeometry(format!(
                "reference position coincides with sensor {}",
                i + 1
            )));
        }
        for k in 0..p {
            h[(2 * p + 2 + i, k)] = diff[k] / d;
        }
    }
    Ok(h)
}

/// Error-propagation matrix `L = F' W (F - G E)` of the data-fit objective
/// at a reference solution, where `E` maps measurement noise to the
/// first-order prediction error of the lifted vector and `F = B-hat =
/// (v'v - c²) I`. All inputs must share one unit system.
pub fn build_error_propagation(
    x_ref: &ParamVector,
    sensors: &[DVector<f64>],
    c: f64,
    w: &DMatrix<f64>,
    t: &DVector<f64>,
) -> Result<DMatrix<f64>, EstimateError> {
    let m = sensors.len();
    if x_ref.m() != m {
        return Err(EstimateError::DimensionMismatch(format!(
            "reference vector built for {} sensors, got {m}",
            x_ref.m()
        )));
    }
    if t.len() != m || w.nrows() != m || w.ncols() != m {
        return Err(EstimateError::DimensionMismatch(
            "measurement vector / weight size".into(),
        ));
    }
    let u = x_ref.u();
    let v = x_ref.v();
    let h = state_jacobian(&u, &v, sensors)?;
    let g = build_g(t, sensors, c)?;
    let p_mat = &g * &h; // M x 2p
    let normal = p_mat.transpose() * w * &p_mat;
    let normal_inv = normal
        .cholesky()
        .ok_or_else(|| {
            EstimateError::DegenerateGeometry("P' W P singular (degenerate geometry)".into())
        })?
        .inverse();
    let b_hat = x_ref.v_sq() - c * c;
    let e = &h * normal_inv * p_mat.transpose() * w * b_hat; // N x M
    // F = diag(T x_ref) = b_hat * I by the delay-row structure
    let f_scalar = b_hat;
    let l = (w * (DMatrix::identity(m, m) * f_scalar - &g * e)) * f_scalar;
    Ok(l)
}

/// Quantile of the weighted chi-square law `sum_i lambda_i chi²(1)` with
/// `lambda_i` the eigenvalues of `sym(L) Q_n`, estimated from seeded Monte
/// Carlo draws (nearest-rank). The quadratic form only sees the symmetric
/// part of `L`, which also keeps the spectrum real; eigenvalues at exact
/// zero are dropped so they cost no draws.
pub fn excessive_penalty_threshold(
    l: &DMatrix<f64>,
    q_n: &DMatrix<f64>,
    quantile: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<f64, EstimateError> {
    if quantile <= 0.0 || quantile >= 1.0 {
        return Err(EstimateError::BadQuantile(quantile));
    }
    if mc_samples == 0 {
        return Err(EstimateError::BadConfig(
            "mc_samples must be positive".into(),
        ));
    }
    let m = l.nrows();
    if l.ncols() != m || q_n.nrows() != m || q_n.ncols() != m {
        return Err(EstimateError::DimensionMismatch(
            "L and Q_n must be square of matching size".into(),
        ));
    }
    let l_sym = (l + l.transpose()) * 0.5;
    // Q_n^{1/2} via symmetric eigendecomposition (Q_n may be singular)
    let eig = q_n.clone().symmetric_eigen();
    let top = eig.eigenvalues.amax();
    if top == 0.0 {
        return Ok(0.0);
    }
    let sqrt_vals =
        DVector::from_iterator(m, eig.eigenvalues.iter().map(|&lam| lam.max(0.0).sqrt()));
    let q_sqrt =
        &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let weighted = &q_sqrt * l_sym * &q_sqrt;
    let weighted = (&weighted + weighted.transpose()) * 0.5;
    let eigs = weighted.symmetric_eigenvalues();
    let scale = eigs.amax();
    let lambdas: Vec<f64> = eigs
        .iter()
        .copied()
        .filter(|lam| lam.abs() > 1e-14 * scale.max(1e-300))
        .collect();
    if lambdas.is_empty() {
        return Ok(0.0);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut samples: Vec<f64> = (0..mc_samples)
        .map(|_| {
            lambdas
                .iter()
                .map(|lam| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    lam * z * z
                })
                .sum()
        })
        .collect();
    let rank = ((quantile * mc_samples as f64).ceil() as usize).clamp(1, mc_samples);
    let idx = rank - 1;
    let (_, nth, _) = samples.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*nth)
}

/// Adaptive penalty-function SDP estimator.
///
/// Grows `eta` by `gamma` until the eigen ratio drops below `delta`; then
/// accepts only if `Tr(C X) < epsilon`, where `epsilon` is the configured
/// quantile of the weighted chi-square law built at the current estimate.
/// On an excessive penalty the last increase is reverted and `delta` is
/// relaxed by `alpha`. If the iteration cap is reached the best candidate
/// seen (smallest objective among rank-one candidates, otherwise smallest
/// eigen ratio) is returned with `converged = false`.
pub fn apf_sdp(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    config: &PenaltyConfig,
) -> Result<EstimateResult, EstimateError> {
    apf_sdp_with(
        measurements,
        sensors,
        c,
        q_n,
        config,
        &EstimatorOptions::default(),
    )
}

pub fn apf_sdp_with(
    measurements: &TdMeasurements,
    sensors: &[DVector<f64>],
    c: f64,
    q_n: &DMatrix<f64>,
    config: &PenaltyConfig,
    options: &EstimatorOptions,
) -> Result<EstimateResult, EstimateError> {
    config.validate()?;
    let prep = prepare(measurements, sensors, c, q_n, options)?;
    let eps_seed = derive_seed(measurements.seed, EPSILON_SEED_STREAM);

    let mut eta = config.eta0;
    let mut delta = config.delta;
    let mut eta_before_increase: Option<f64> = None;
    let mut trace: Vec<ApfStep> = Vec::new();
    let mut best: Option<Candidate> = None;
    let mut best_epsilon: Option<f64> = None;

    for _ in 0..config.max_outer {
        let cand = match solve_penalized(&prep, eta, delta, options) {
            Ok(c) => c,
            Err(EstimateError::SolverFailed { status, .. }) => {
                return Err(EstimateError::AdaptiveAborted {
                    status,
                    steps: trace.len(),
                })
            }
            Err(e) => return Err(e),
        };
        if cand.tau < delta {
            let epsilon = {
                let l = build_error_propagation(
                    &cand.x_scaled,
                    &prep.sensors,
                    prep.speed,
                    &prep.system.w,
                    &prep.system.t,
                )?;
                excessive_penalty_threshold(
                    &l,
                    &prep.noise_cov,
                    config.quantile,
                    config.mc_samples,
                    eps_seed,
                )?
            };
            let accept = cand.objective < epsilon;
            trace.push(ApfStep {
                eta,
                tau: cand.tau,
                objective: cand.objective,
                delta,
                epsilon: Some(epsilon),
                action: if accept {
                    ApfAction::Accept
                } else {
                    ApfAction::Backtrack
                },
            });
            if accept {
                return Ok(finalize(&prep, cand, Some(epsilon), true, trace));
            }
            replace_if_better(&mut best, &mut best_epsilon, cand, Some(epsilon));
            // excessive penalty: revert the last increase, relax the test
            if let Some(previous) = eta_before_increase.take() {
                eta = previous;
            }
            delta *= config.alpha;
        } else {
            trace.push(ApfStep {
                eta,
                tau: cand.tau,
                objective: cand.objective,
                delta,
                epsilon: None,
                action: ApfAction::IncreasePenalty,
            });
            replace_if_better(&mut best, &mut best_epsilon, cand, None);
            eta_before_increase = Some(eta);
            eta *= config.gamma;
        }
    }

    let cand = best.expect("at least one candidate exists when max_outer >= 1");
    Ok(finalize(&prep, cand, best_epsilon, false, trace))
}

/// Keep the better of two candidates: rank-one with smaller objective wins,
/// otherwise smaller eigen ratio.
fn replace_if_better(
    best: &mut Option<Candidate>,
    best_epsilon: &mut Option<f64>,
    cand: Candidate,
    epsilon: Option<f64>,
) {
    let better = match best {
        None => true,
        Some(current) => match (cand.rank_one, current.rank_one) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => cand.objective < current.objective,
            (false, false) => cand.tau < current.tau,
        },
    };
    if better {
        *best = Some(cand);
        *best_epsilon = epsilon;
    }
}
