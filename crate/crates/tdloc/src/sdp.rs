//! Dense primal-dual interior-point solver for small semidefinite programs
//!
//! ```text
//! min <C, X>   s.t.  <A_i, X> = b_i  (i = 1..m),   X >= 0,
//! ```
//!
//! together with the eigen-ratio rank test and rank-one solution extraction.
//!
//! The solver is a path-following method with Nesterov–Todd scaling and
//! Mehrotra-style adaptive centering. Fixed algorithmic choices:
//!
//! * infeasible start `X = Z = sqrt(N)·I`, `y = 0`, after normalizing the
//!   cost by `max(1, ||C||_F / N)` (objective and duals are rescaled back);
//! * NT scaling matrix `W` with `W Z W = X`, computed from two symmetric
//!   eigendecompositions;
//! * Schur complement `S_ij = <A_i, W A_j W>`, Cholesky-factored with static
//!   regularization starting at 1e-12 of its diagonal scale;
//! * predictor pass with `sigma = 0`, centering `sigma = (mu_aff/mu)^3`
//!   (no second-order corrector term);
//! * fraction-to-boundary step rule with factor 0.98 and a step-shrink
//!   safeguard that keeps the complementarity measure `mu` non-increasing.
//!
//! Every operation is deterministic: identical inputs produce the identical
//! iterate sequence on any platform.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linearize::ConstraintSet;
use crate::scenario::ParamVector;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("matrix is degenerate: {0}")]
    Degenerate(String),
    #[error("homogenization entry X_NN = {0} is not within 1e-6 of 1")]
    HomogenizationOff(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Solver exit condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SolveStatus {
    /// Duality gap and feasibility residuals reached the tolerance.
    Optimal,
    /// Iteration cap reached before convergence.
    MaxIter,
    /// A Newton system stayed singular beyond regularization, or iterates
    /// became non-finite.
    NumericalFailure,
    /// A dual improving ray was detected (primal infeasible).
    Infeasible,
}

/// A semidefinite program `min <C,X> : <A_i,X> = b_i, X >= 0`.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub cost: DMatrix<f64>,
    pub constraints: ConstraintSet,
    /// Relative duality-gap and feasibility target.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Result of the vectorized-rank independence check on the constraints.
    pub constraints_independent: bool,
}

impl SdpProblem {
    pub fn new(cost: DMatrix<f64>, constraints: ConstraintSet) -> Self {
        let constraints_independent = check_independence(&constraints);
        SdpProblem {
            cost,
            constraints,
            tolerance: 1e-9,
            max_iterations: 100,
            constraints_independent,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_max_iterations(mut self, max: usize) -> Self {
        self.max_iterations = max;
        self
    }

    fn n(&self) -> usize {
        self.cost.nrows()
    }
}

/// One row of the iteration trace.
#[derive(Debug, Clone, Copy)]
pub struct IterRecord {
    pub iteration: usize,
    pub mu: f64,
    pub gap: f64,
    pub primal: f64,
    pub dual: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// Solver output: the PSD matrix, duals, and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    /// `<C, X>` in the caller's (unnormalized) cost.
    pub objective: f64,
    /// Final relative duality gap.
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Maximum absolute constraint residual `|<A_i,X> - b_i|`.
    pub feasibility: f64,
    pub trace: Vec<IterRecord>,
}

impl SdpSolution {
    /// Iteration trace as CSV (`iteration,mu,gap,primal,dual,rp,rd`).
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iteration,mu,gap,primal,dual,rp,rd")?;
        for r in &self.trace {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.iteration, r.mu, r.gap, r.primal, r.dual, r.primal_residual, r.dual_residual
            )?;
        }
        Ok(())
    }
}

/// Frobenius inner product.
fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// ascending and columns permuted to match.
fn sym_eigen_sorted(mat: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = mat.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Square root and inverse square root of a PD matrix, with eigenvalues
/// clamped at a relative floor for safety near the boundary.
fn psd_sqrt_pair(mat: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (vals, vecs) = sym_eigen_sorted(mat);
    let floor = vals[vals.len() - 1].abs().max(1e-300) * 1e-16;
    let n = vals.len();
    let mut sq = DVector::zeros(n);
    let mut isq = DVector::zeros(n);
    for i in 0..n {
        let lam = vals[i].max(floor);
        sq[i] = lam.sqrt();
        isq[i] = 1.0 / lam.sqrt();
    }
    let sqrt = &vecs * DMatrix::from_diagonal(&sq) * vecs.transpose();
    let inv_sqrt = &vecs * DMatrix::from_diagonal(&isq) * vecs.transpose();
    (sqrt, inv_sqrt)
}

/// Nesterov–Todd scaling matrix `W` with `W Z W = X`.
fn nt_scaling(x: &DMatrix<f64>, z: &DMatrix<f64>) -> DMatrix<f64> {
    let (z_sqrt, z_isqrt) = psd_sqrt_pair(z);
    let mut mid = &z_sqrt * x * &z_sqrt;
    symmetrize(&mut mid);
    let (mid_sqrt, _) = psd_sqrt_pair(&mid);
    let mut w = &z_isqrt * mid_sqrt * &z_isqrt;
    symmetrize(&mut w);
    w
}

/// Largest step `alpha` with `S + alpha * dS >= 0` (may be infinite).
fn max_step(s: &DMatrix<f64>, ds: &DMatrix<f64>) -> f64 {
    let (vals, vecs) = sym_eigen_sorted(s);
    let floor = vals[vals.len() - 1].abs().max(1e-300) * 1e-16;
    let n = vals.len();
    let isq = DVector::from_iterator(n, vals.iter().map(|&l| 1.0 / l.max(floor).sqrt()));
    let scaled = DMatrix::from_diagonal(&isq) * vecs.transpose() * ds * &vecs
        * DMatrix::from_diagonal(&isq);
    let mut sym = scaled;
    symmetrize(&mut sym);
    let min_eig = sym.symmetric_eigenvalues().min();
    if min_eig >= -1e-14 {
        f64::INFINITY
    } else {
        -1.0 / min_eig
    }
}

/// Shrink `alpha` until `S + alpha * dS` passes a Cholesky test, so rounding
/// in the eigenvalue-based bound can never push an iterate outside the cone.
fn verified_step(s: &DMatrix<f64>, ds: &DMatrix<f64>, mut alpha: f64) -> f64 {
    for _ in 0..30 {
        if alpha <= 0.0 {
            return 0.0;
        }
        let candidate = s + ds * alpha;
        if candidate.cholesky().is_some() {
            return alpha;
        }
        alpha *= 0.8;
    }
    0.0
}

/// Rank check on the stacked vectorized constraints.
fn check_independence(constraints: &ConstraintSet) -> bool {
    let m = constraints.len();
    if m == 0 {
        return true;
    }
    let n = constraints.n;
    let cols = n * (n + 1) / 2;
    let mut stack = DMatrix::zeros(m, cols);
    for (row, con) in constraints.items.iter().enumerate() {
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let scale = if i == j { 1.0 } else { std::f64::consts::SQRT_2 };
                stack[(row, k)] = con.matrix[(i, j)] * scale;
                k += 1;
            }
        }
    }
    let svd = stack.svd(false, false);
    let max = svd.singular_values.max();
    if max <= 0.0 {
        return false;
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * max)
        .count();
    rank == m
}

struct SchurSystem {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl SchurSystem {
    /// Factor `S_ij = <A_i, W A_j W>` with escalating static regularization.
    fn factor(constraints: &ConstraintSet, w: &DMatrix<f64>) -> Option<(Self, Vec<DMatrix<f64>>)> {
        let m = constraints.len();
        let waw: Vec<DMatrix<f64>> = constraints
            .items
            .iter()
            .map(|con| {
                let mut t = w * &con.matrix * w;
                symmetrize(&mut t);
                t
            })
            .collect();
        let mut s = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                s[(i, j)] = inner(&constraints.items[i].matrix, &waw[j]);
            }
        }
        symmetrize(&mut s);
        let diag_scale = (0..m).map(|i| s[(i, i)].abs()).fold(1.0_f64, f64::max);
        for reg in [1e-12, 1e-10, 1e-8] {
            let regularized = &s + DMatrix::identity(m, m) * (reg * diag_scale);
            if let Some(chol) = regularized.cholesky() {
                return Some((SchurSystem { chol }, waw));
            }
        }
        None
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(rhs)
    }
}

/// Solve the SDP. Never panics on numerical trouble; inspect
/// [`SdpSolution::status`].
pub fn solve(problem: &SdpProblem) -> SdpSolution {
    let n = problem.n();
    let m = problem.constraints.len();
    let tol = problem.tolerance;

    // scale-free internal cost
    let c_scale = (problem.cost.norm() / n as f64).max(1.0);
    let c_hat = &problem.cost / c_scale;

    let b = DVector::from_iterator(m, problem.constraints.items.iter().map(|c| c.rhs));
    let b_norm = b.norm();
    let c_norm = c_hat.norm();

    let start = (n as f64).sqrt();
    let mut x = DMatrix::identity(n, n) * start;
    let mut z = DMatrix::identity(n, n) * start;
    let mut y = DVector::zeros(m);

    let mut status = SolveStatus::MaxIter;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut final_gap = f64::NAN;

    for iter in 0..problem.max_iterations {
        iterations = iter;
        let mu = inner(&x, &z) / n as f64;

        let ax = DVector::from_iterator(
            m,
            problem.constraints.items.iter().map(|c| inner(&c.matrix, &x)),
        );
        let rp = &b - &ax;
        let mut rd = c_hat.clone() - &z;
        for (i, con) in problem.constraints.items.iter().enumerate() {
            rd -= &con.matrix * y[i];
        }

        let primal = inner(&c_hat, &x);
        let dual = b.dot(&y);
        let gap = inner(&x, &z) / (1.0 + primal.abs() + dual.abs());
        let rp_rel = rp.norm() / (1.0 + b_norm);
        let rd_rel = rd.norm() / (1.0 + c_norm);
        trace.push(IterRecord {
            iteration: iter,
            mu,
            gap,
            primal: primal * c_scale,
            dual: dual * c_scale,
            primal_residual: rp_rel,
            dual_residual: rd_rel,
        });
        final_gap = gap;

        if !mu.is_finite() || !rp_rel.is_finite() || !rd_rel.is_finite() {
            status = SolveStatus::NumericalFailure;
            break;
        }
        if gap <= tol && rp_rel <= tol && rd_rel <= tol {
            status = SolveStatus::Optimal;
            break;
        }
        // dual improving ray => primal infeasible
        let y_norm = y.norm();
        if y_norm > 1e8 {
            let mut ray = DMatrix::zeros(n, n);
            for (i, con) in problem.constraints.items.iter().enumerate() {
                ray += &con.matrix * (y[i] / y_norm);
            }
            let ray_max = ray.symmetric_eigenvalues().max();
            if b.dot(&y) / y_norm > 1e-6 && ray_max < 1e-6 {
                status = SolveStatus::Infeasible;
                break;
            }
        }

        let w = nt_scaling(&x, &z);
        let Some((schur, _waw)) = SchurSystem::factor(&problem.constraints, &w) else {
            status = SolveStatus::NumericalFailure;
            break;
        };

        let (_, z_inv_sqrt_sq) = {
            // Z^{-1} via its eigendecomposition
            let (vals, vecs) = sym_eigen_sorted(&z);
            let floor = vals[vals.len() - 1].abs().max(1e-300) * 1e-16;
            let inv =
                DVector::from_iterator(n, vals.iter().map(|&l| 1.0 / l.max(floor)));
            (0.0, &vecs * DMatrix::from_diagonal(&inv) * vecs.transpose())
        };
        let z_inv = z_inv_sqrt_sq;

        let w_rd_w = {
            let mut t = &w * &rd * &w;
            symmetrize(&mut t);
            t
        };
        let a_of = |mat: &DMatrix<f64>| {
            DVector::from_iterator(
                m,
                problem
                    .constraints
                    .items
                    .iter()
                    .map(|c| inner(&c.matrix, mat)),
            )
        };

        let newton = |rc: &DMatrix<f64>| {
            let rhs = &rp - a_of(rc) + a_of(&w_rd_w);
            let dy = schur.solve(&rhs);
            let mut dz = rd.clone();
            for (i, con) in problem.constraints.items.iter().enumerate() {
                dz -= &con.matrix * dy[i];
            }
            let mut dx = rc - &w * &dz * &w;
            symmetrize(&mut dx);
            (dx, dy, dz)
        };

        // predictor
        let rc_aff = -&x;
        let (dx_aff, _dy_aff, dz_aff) = newton(&rc_aff);
        let ap_aff = (0.98 * max_step(&x, &dx_aff)).min(1.0);
        let ad_aff = (0.98 * max_step(&z, &dz_aff)).min(1.0);
        let mu_aff = (inner(&x, &z)
            + ap_aff * inner(&dx_aff, &z)
            + ad_aff * inner(&x, &dz_aff)
            + ap_aff * ad_aff * inner(&dx_aff, &dz_aff))
            / n as f64;
        let mut sigma = ((mu_aff / mu).max(0.0).powi(3)).clamp(1e-8, 0.9999);
        // keep centering strong while feasibility lags optimality, so the
        // complementarity measure cannot race ahead of the residuals
        if rp_rel.max(rd_rel) > 10.0 * gap.max(tol) {
            sigma = sigma.max(0.5);
        }

        // corrector
        let rc = &z_inv * (sigma * mu) - &x;
        let (dx, dy, dz) = newton(&rc);

        let mut ap = verified_step(&x, &dx, (0.98 * max_step(&x, &dx)).min(1.0));
        let mut ad = verified_step(&z, &dz, (0.98 * max_step(&z, &dz)).min(1.0));

        // safeguard: near the central path (residuals already small) keep mu
        // non-increasing; while still infeasible, feasibility progress wins
        if rp_rel <= 1e-6 && rd_rel <= 1e-6 {
            let xz = inner(&x, &z);
            let dxz = inner(&dx, &z);
            let xdz = inner(&x, &dz);
            let dxdz = inner(&dx, &dz);
            let mu_at = |ap: f64, ad: f64| (xz + ap * dxz + ad * xdz + ap * ad * dxdz) / n as f64;
            let mut best = (ap, ad, mu_at(ap, ad));
            for _ in 0..8 {
                if best.2 <= mu {
                    break;
                }
                ap *= 0.7;
                ad *= 0.7;
                let candidate = mu_at(ap, ad);
                if candidate < best.2 {
                    best = (ap, ad, candidate);
                }
            }
            (ap, ad, _) = best;
        }

        x += &dx * ap;
        symmetrize(&mut x);
        z += &dz * ad;
        symmetrize(&mut z);
        y += &dy * ad;

        if x.iter().any(|v| !v.is_finite()) || z.iter().any(|v| !v.is_finite()) {
            status = SolveStatus::NumericalFailure;
            break;
        }
    }

    let feasibility = problem.constraints.max_residual(&x);
    SdpSolution {
        objective: inner(&problem.cost, &x),
        y: y * c_scale,
        x,
        gap: final_gap,
        iterations: iterations + 1,
        status,
        feasibility,
        trace,
    }
}

/// Eigen-ratio rank test: second-largest over largest eigenvalue of a
/// symmetric PSD matrix. Near zero indicates effective rank one.
pub fn eigen_ratio(x: &DMatrix<f64>) -> Result<f64, SdpError> {
    let n = x.nrows();
    if n < 2 {
        return Err(SdpError::DimensionMismatch(
            "eigen ratio needs at least a 2x2 matrix".into(),
        ));
    }
    let (vals, _) = sym_eigen_sorted(x);
    let largest = vals[n - 1];
    if largest <= 0.0 {
        return Err(SdpError::Degenerate(format!(
            "largest eigenvalue {largest} is not positive"
        )));
    }
    Ok((vals[n - 2] / largest).max(0.0))
}

/// Extract the estimate from a solution matrix.
///
/// For an effectively rank-one matrix (eigen ratio at most 0.01) the
/// dominant eigenpair `(lambda, q)` is taken and `q * sqrt(lambda)` is
/// rescaled so the homogenization entry is exactly 1, which also corrects
/// the eigenvector sign. Otherwise — and whenever the dominant eigenvector
/// has a vanishing homogenization coordinate — the last column of X is used:
/// the lifted feasible set has recession directions whose last coordinate is
/// zero (the coefficient matrix has no direct position columns), so a
/// higher-rank optimum can drift along them, and the last column is the one
/// slice of X those directions cannot pollute (`X_{.,N} = x * x_N` for any
/// rank-one component).
pub fn extract_solution(
    x: &DMatrix<f64>,
    p: usize,
    m: usize,
) -> Result<(DVector<f64>, DVector<f64>, ParamVector), SdpError> {
    let n = m + 2 * p + 3;
    if x.nrows() != n || x.ncols() != n {
        return Err(SdpError::DimensionMismatch(format!(
            "X is {}x{}, expected {n}x{n} for p={p}, M={m}",
            x.nrows(),
            x.ncols()
        )));
    }
    let corner = x[(n - 1, n - 1)];
    if (corner - 1.0).abs() > 1e-6 {
        return Err(SdpError::HomogenizationOff(corner));
    }
    let (vals, vecs) = sym_eigen_sorted(x);
    let lambda = vals[n - 1];
    if lambda <= 0.0 {
        return Err(SdpError::Degenerate(
            "solution matrix has no positive eigenvalue".into(),
        ));
    }
    let ratio = (vals[n - 2] / lambda).max(0.0);
    let dominant = vecs.column(n - 1).into_owned() * lambda.sqrt();
    let mut xv = if ratio <= 1e-2 && dominant[n - 1].abs() >= 1e-6 {
        dominant
    } else {
        x.column(n - 1).into_owned()
    };
    let last = xv[n - 1];
    if last.abs() < 1e-12 {
        return Err(SdpError::Degenerate(
            "homogenization coordinate vanished in both the dominant \
             eigenvector and the last column"
                .into(),
        ));
    }
    xv /= last;
    xv[n - 1] = 1.0;
    let u = xv.rows(0, p).into_owned();
    let v = xv.rows(p, p).into_owned();
    let param = ParamVector::from_raw(xv, p)
        .map_err(|e| SdpError::Degenerate(format!("extracted vector invalid: {e}")))?;
    Ok((u, v, param))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::Constraint;

    fn e_mat(n: usize, entries: &[(usize, usize, f64)]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in entries {
            m[(i, j)] = v;
        }
        m
    }

    fn simple_problem(
        n: usize,
        cost: DMatrix<f64>,
        cons: Vec<(DMatrix<f64>, f64)>,
    ) -> SdpProblem {
        let items = cons
            .into_iter()
            .map(|(matrix, rhs)| Constraint { matrix, rhs })
            .collect();
        SdpProblem::new(cost, ConstraintSet { items, n })
    }

    #[test]
    fn identity_cost_with_pinned_corner() {
        // min Tr(X) s.t. X_33 = 1 -> X = e3 e3', objective 1
        let n = 3;
        let problem = simple_problem(
            n,
            DMatrix::identity(n, n),
            vec![(e_mat(n, &[(2, 2, 1.0)]), 1.0)],
        );
        let sol = solve(&problem);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-7, "objective {}", sol.objective);
        assert!((sol.x[(2, 2)] - 1.0).abs() < 1e-7);
        assert!(sol.x[(0, 0)].abs() < 1e-7);
        assert!(sol.x[(1, 1)].abs() < 1e-7);
    }

    #[test]
    fn psd_boundary_fixture() {
        // min X11 s.t. X22 = 1, X12 + X21 = 1 -> X11 = 0.25
        let n = 2;
        let problem = simple_problem(
            n,
            e_mat(n, &[(0, 0, 1.0)]),
            vec![
                (e_mat(n, &[(1, 1, 1.0)]), 1.0),
                (e_mat(n, &[(0, 1, 1.0), (1, 0, 1.0)]), 1.0),
            ],
        );
        let sol = solve(&problem);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 0.25).abs() < 1e-8, "objective {}", sol.objective);
        assert!(sol.gap <= 1e-9);
        assert!(sol.feasibility <= 1e-9);
    }

    #[test]
    fn infeasible_problem_is_flagged() {
        // X11 = -1 is impossible for X >= 0
        let n = 2;
        let problem = simple_problem(
            n,
            DMatrix::identity(n, n),
            vec![(e_mat(n, &[(0, 0, 1.0)]), -1.0)],
        );
        let sol = solve(&problem);
        assert!(
            sol.status == SolveStatus::Infeasible || sol.status == SolveStatus::MaxIter,
            "status {:?}",
            sol.status
        );
        assert_ne!(sol.status, SolveStatus::Optimal);
    }

    #[test]
    fn dependent_constraints_are_detected() {
        let n = 2;
        let a = e_mat(n, &[(0, 0, 1.0)]);
        let problem = simple_problem(
            n,
            DMatrix::identity(n, n),
            vec![(a.clone(), 1.0), (a * 2.0, 2.0)],
        );
        assert!(!problem.constraints_independent);
    }

    #[test]
    fn monotone_mu_and_weak_duality_near_feasibility() {
        let n = 4;
        let mut cost = DMatrix::identity(n, n) * 2.0;
        cost[(0, 1)] = 0.3;
        cost[(1, 0)] = 0.3;
        let problem = simple_problem(
            n,
            cost,
            vec![
                (e_mat(n, &[(3, 3, 1.0)]), 1.0),
                (e_mat(n, &[(0, 0, 1.0), (1, 1, 1.0)]), 0.5),
            ],
        );
        let sol = solve(&problem);
        assert_eq!(sol.status, SolveStatus::Optimal);
        for pair in sol.trace.windows(2) {
            assert!(
                pair[1].mu <= pair[0].mu * (1.0 + 1e-9),
                "mu increased: {} -> {}",
                pair[0].mu,
                pair[1].mu
            );
        }
        for r in &sol.trace {
            if r.primal_residual <= 1e-6 && r.dual_residual <= 1e-6 {
                assert!(r.primal >= r.dual - 1e-8 * (1.0 + r.primal.abs()));
            }
        }
    }

    #[test]
    fn eigen_ratio_cases() {
        let x = DVector::from_column_slice(&[1.0, 2.0, 3.0]);
        let rank_one = &x * x.transpose();
        assert!(eigen_ratio(&rank_one).unwrap() < 1e-12);

        assert!((eigen_ratio(&DMatrix::identity(4, 4)).unwrap() - 1.0).abs() < 1e-14);

        let diag = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 1.0, 2.0]));
        assert!((eigen_ratio(&diag).unwrap() - 0.5).abs() < 1e-14);

        assert!(eigen_ratio(&DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn extraction_recovers_rank_one_vector() {
        // p = 2, M = 2 -> N = 9
        let p = 2;
        let m = 2;
        let n = m + 2 * p + 3;
        let mut xv = DVector::from_fn(n, |i, _| (i as f64) - 3.5);
        xv[n - 1] = 1.0;
        let xx = &xv * xv.transpose();
        let (u, v, param) = extract_solution(&xx, p, m).unwrap();
        assert!((param.as_vector() - &xv).norm() < 1e-10);
        assert!((u - xv.rows(0, p)).norm() < 1e-10);
        assert!((v - xv.rows(p, p)).norm() < 1e-10);

        // flipped eigenvector sign gives the same answer
        let flipped = (&xv * -1.0) * (xv.transpose() * -1.0);
        let (u2, _, _) = extract_solution(&flipped, p, m).unwrap();
        assert!((u2 - xv.rows(0, p)).norm() < 1e-10);
    }

    #[test]
    fn extraction_rejects_bad_corner() {
        let p = 2;
        let m = 2;
        let n = m + 2 * p + 3;
        let x = DMatrix::identity(n, n) * 2.0;
        assert!(matches!(
            extract_solution(&x, p, m),
            Err(SdpError::HomogenizationOff(_))
        ));
    }
}
