//! Linear system and SDP constraint assembly from delay measurements and
//! sensor geometry.
//!
//! With the lifted vector `x = [u; v; u'v; v'v; d_1..d_M; 1]` of length
//! `N = M + 2p + 3`, each measurement row reads
//!
//! ```text
//! g_i = [0_p, -2 s_i', 2, t_i, 0_{i-1}, 2c, 0_{M-i}, -t_i c²],   G x = ε,
//! ```
//!
//! and the weighted cost is `C = G' W G` with `W = Q_n^{-1}` (the scalar
//! factor relating the delay-noise covariance to the residual covariance is
//! a multiple of the identity, so it cannot change the minimizer and is
//! dropped). The quadratic couplings among the entries of `x` become `M + 3`
//! linear trace constraints on `X = x x'`.
//!
//! Raw SI magnitudes span many decades inside `x`, which hurts the
//! interior-point iteration matrix. [`Scaling`] nondimensionalizes the
//! problem: lengths are divided by the largest sensor range, times by
//! `L0 / c` so the scaled signal speed is exactly 1. The estimators apply it
//! by default and undo it at extraction.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearizeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("noise covariance is singular; pass the zero matrix for the noiseless regime")]
    SingularNoise,
}

/// Diagonal nondimensionalization of the localization problem.
///
/// `length` is the length unit L0 (meters), `time` the time unit T0
/// (seconds). [`Scaling::for_sensors`] picks L0 = max sensor range and
/// T0 = L0/c, which maps the signal speed to exactly 1 and keeps every
/// entry of the lifted vector within a few orders of magnitude of unity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub length: f64,
    pub time: f64,
}

impl Scaling {
    /// No-op scaling (raw SI units).
    pub fn identity() -> Self {
        Scaling {
            length: 1.0,
            time: 1.0,
        }
    }

    /// Scaling derived from the sensor geometry and signal speed.
    pub fn for_sensors(sensors: &[DVector<f64>], c: f64) -> Self {
        let length = sensors
            .iter()
            .map(|s| s.norm())
            .fold(1.0_f64, f64::max);
        Scaling {
            length,
            time: length / c,
        }
    }

    /// Velocity unit L0/T0.
    pub fn velocity(&self) -> f64 {
        self.length / self.time
    }

    pub fn scale_sensors(&self, sensors: &[DVector<f64>]) -> Vec<DVector<f64>> {
        sensors.iter().map(|s| s / self.length).collect()
    }

    pub fn scale_speed(&self, c: f64) -> f64 {
        c * self.time / self.length
    }

    pub fn scale_delays(&self, t: &DVector<f64>) -> DVector<f64> {
        t / self.time
    }

    pub fn scale_noise_cov(&self, q: &DMatrix<f64>) -> DMatrix<f64> {
        q / (self.time * self.time)
    }

    /// Diagonal of the lifted-vector scaling S with `x = S x_scaled`.
    pub fn param_scale(&self, p: usize, m: usize) -> DVector<f64> {
        let n = m + 2 * p + 3;
        let mut s = DVector::from_element(n, 1.0);
        for i in 0..p {
            s[i] = self.length;
            s[p + i] = self.velocity();
        }
        s[2 * p] = self.length * self.velocity();
        s[2 * p + 1] = self.velocity() * self.velocity();
        for i in 0..m {
            s[2 * p + 2 + i] = self.length;
        }
        s[n - 1] = 1.0;
        s
    }

    pub fn unscale_position(&self, u: &DVector<f64>) -> DVector<f64> {
        u * self.length
    }

    pub fn unscale_velocity(&self, v: &DVector<f64>) -> DVector<f64> {
        v * self.velocity()
    }
}

/// Assembled weighted linear system for one measurement vector.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    /// M×N coefficient matrix.
    pub g: DMatrix<f64>,
    /// M×M symmetric positive-definite weight.
    pub w: DMatrix<f64>,
    /// N×N symmetric PSD cost, `C = G' W G`.
    pub c: DMatrix<f64>,
    /// Measurement vector used to build G.
    pub t: DVector<f64>,
}

/// Build the M×N coefficient matrix G from measured delays, sensor
/// positions, and signal speed (all in mutually consistent units).
pub fn build_g(
    t: &DVector<f64>,
    sensors: &[DVector<f64>],
    c: f64,
) -> Result<DMatrix<f64>, LinearizeError> {
    let m = sensors.len();
    if t.len() != m {
        return Err(LinearizeError::DimensionMismatch(format!(
            "{} delays for {} sensors",
            t.len(),
            m
        )));
    }
    if m == 0 {
        return Err(LinearizeError::DimensionMismatch("no sensors".into()));
    }
    let p = sensors[0].len();
    if sensors.iter().any(|s| s.len() != p) {
        return Err(LinearizeError::DimensionMismatch(
            "sensors of mixed dimension".into(),
        ));
    }
    let n = m + 2 * p + 3;
    let mut g = DMatrix::zeros(m, n);
    for (i, s) in sensors.iter().enumerate() {
        for k in 0..p {
            g[(i, p + k)] = -2.0 * s[k];
        }
        g[(i, 2 * p)] = 2.0;
        g[(i, 2 * p + 1)] = t[i];
        g[(i, 2 * p + 2 + i)] = 2.0 * c;
        g[(i, n - 1)] = -t[i] * c * c;
    }
    Ok(g)
}

/// Weight matrix `W = Q_n^{-1}`. The exact-zero covariance (noiseless test
/// regime) maps to the identity weight.
pub fn build_weight(q_n: &DMatrix<f64>) -> Result<DMatrix<f64>, LinearizeError> {
    let m = q_n.nrows();
    if q_n.ncols() != m {
        return Err(LinearizeError::DimensionMismatch(format!(
            "covariance is {}x{}",
            m,
            q_n.ncols()
        )));
    }
    if q_n.iter().all(|&x| x == 0.0) {
        return Ok(DMatrix::identity(m, m));
    }
    let chol = q_n.clone().cholesky().ok_or(LinearizeError::SingularNoise)?;
    Ok(chol.inverse())
}

/// Combine G, W, and the measurement vector into a [`LinearSystem`],
/// computing the symmetrized cost `C = G' W G`.
pub fn assemble(g: DMatrix<f64>, w: DMatrix<f64>, t: DVector<f64>) -> LinearSystem {
    let mut c = g.transpose() * &w * &g;
    let ct = c.transpose();
    c = (c + ct) * 0.5;
    LinearSystem { g, w, c, t }
}

/// One linear trace constraint `Tr(A X) = b` with symmetric A.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub matrix: DMatrix<f64>,
    pub rhs: f64,
}

/// The M+3 constraints tying the lifted matrix `X = x x'` to the structure
/// of `x`: the velocity-norm coupling, M squared-distance couplings, the
/// inner-product coupling, and the homogenization `X_{N,N} = 1`.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub items: Vec<Constraint>,
    pub n: usize,
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Maximum absolute residual `|Tr(A_i X) - b_i|` over all constraints.
    pub fn max_residual(&self, x: &DMatrix<f64>) -> f64 {
        self.items
            .iter()
            .map(|con| ((&con.matrix * x).trace() - con.rhs).abs())
            .fold(0.0, f64::max)
    }
}

/// Symmetric elementary matrix with `Tr(E X) = X_{ij}` for symmetric X.
fn e_sym(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(n, n);
    if i == j {
        e[(i, i)] = 1.0;
    } else {
        e[(i, j)] = 0.5;
        e[(j, i)] = 0.5;
    }
    e
}

/// Build the constraint set for `sensors` (in the same units as the G they
/// accompany). Emits, in order: velocity norm, M distances, inner product,
/// homogenization.
pub fn build_constraints(sensors: &[DVector<f64>], p: usize) -> ConstraintSet {
    let m = sensors.len();
    let n = m + 2 * p + 3;
    let mut items = Vec::with_capacity(m + 3);

    // (a) ||v||² = v'v  <=>  Tr(D0' D0 X) - X_{2p+2,N} = 0
    let mut a0 = DMatrix::zeros(n, n);
    for k in 0..p {
        a0[(p + k, p + k)] = 1.0;
    }
    a0 -= e_sym(n, 2 * p + 1, n - 1);
    items.push(Constraint {
        matrix: a0,
        rhs: 0.0,
    });

    // (b) ||u - s_i||² = d_i²  <=>  Tr(D_i' D_i X) - X_{d_i,d_i} = 0,
    //     D_i = [I_p, 0, -s_i]
    for (i, s) in sensors.iter().enumerate() {
        let mut a = DMatrix::zeros(n, n);
        for k in 0..p {
            a[(k, k)] = 1.0;
            a[(k, n - 1)] = -s[k];
            a[(n - 1, k)] = -s[k];
        }
        a[(n - 1, n - 1)] = s.dot(s);
        let di = 2 * p + 2 + i;
        a[(di, di)] -= 1.0;
        items.push(Constraint {
            matrix: a,
            rhs: 0.0,
        });
    }

    // (c) u'v coupling: sum_k X_{k,p+k} - X_{2p+1,N} = 0
    let mut ac = DMatrix::zeros(n, n);
    for k in 0..p {
        ac += e_sym(n, k, p + k);
    }
    ac -= e_sym(n, 2 * p, n - 1);
    items.push(Constraint {
        matrix: ac,
        rhs: 0.0,
    });

    // (d) homogenization X_{N,N} = 1
    items.push(Constraint {
        matrix: e_sym(n, n - 1, n - 1),
        rhs: 1.0,
    });

    ConstraintSet { items, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::true_delay;
    use crate::scenario::{builtin, ParamVector};
    use proptest::prelude::*;

    fn vec2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_column_slice(&[x, y])
    }

    #[test]
    fn g_row_layout_matches_definition() {
        let sensors = vec![vec2(1.0, 2.0)];
        let t = DVector::from_column_slice(&[0.5]);
        let g = build_g(&t, &sensors, 10.0).unwrap();
        let expected = [0.0, 0.0, -2.0, -4.0, 2.0, 0.5, 20.0, -50.0];
        assert_eq!(g.nrows(), 1);
        assert_eq!(g.ncols(), 8);
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(g[(0, k)], *e, "column {k}");
        }
    }

    #[test]
    fn zero_delays_zero_the_delay_columns() {
        let sensors = vec![vec2(1.0, 2.0), vec2(-3.0, 4.0)];
        let t = DVector::zeros(2);
        let g = build_g(&t, &sensors, 10.0).unwrap();
        let p = 2;
        let n = g.ncols();
        for i in 0..2 {
            assert_eq!(g[(i, 2 * p + 1)], 0.0);
            assert_eq!(g[(i, n - 1)], 0.0);
        }
    }

    #[test]
    fn exact_measurements_annihilate_true_param_vector() {
        let template = builtin("sim10").unwrap();
        let sensors = &template.sensors[..8];
        let u = vec2(200.0, -400.0);
        let v = vec2(-1.0, 1.0);
        let c = 350.0;
        let t = DVector::from_iterator(
            8,
            sensors.iter().map(|s| true_delay(&u, &v, c, s).unwrap()),
        );
        let g = build_g(&t, sensors, c).unwrap();
        let x = ParamVector::from_state(&u, &v, sensors);
        let residual = (&g * x.as_vector()).norm();
        assert!(residual <= 1e-9, "residual {residual}");
    }

    #[test]
    fn weight_inverts_diagonal_covariance() {
        let q = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 4.0]));
        let w = build_weight(&q).unwrap();
        assert!((w[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((w[(1, 1)] - 0.25).abs() < 1e-15);
        assert!(w[(0, 1)].abs() < 1e-15);

        let scaled = build_weight(&(DMatrix::identity(3, 3) * 4.0)).unwrap();
        assert!((scaled[(0, 0)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_covariance_maps_to_identity_weight() {
        let w = build_weight(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(w, DMatrix::identity(3, 3));
    }

    #[test]
    fn singular_covariance_is_rejected() {
        let mut q = DMatrix::zeros(2, 2);
        q[(0, 0)] = 1.0;
        assert!(matches!(
            build_weight(&q),
            Err(LinearizeError::SingularNoise)
        ));
    }

    #[test]
    fn constraint_count_and_rhs_pattern() {
        let template = builtin("sim10").unwrap();
        let cons = build_constraints(&template.sensors, 2);
        assert_eq!(cons.len(), 10 + 3);
        for con in &cons.items[..cons.len() - 1] {
            assert_eq!(con.rhs, 0.0);
        }
        assert_eq!(cons.items.last().unwrap().rhs, 1.0);
    }

    #[test]
    fn inner_product_constraint_indices_for_p2() {
        // p = 2: sum reads X_{1,3} + X_{2,4} = X_{5,N} (one-based)
        let sensors = vec![
            vec2(1.0, 0.0),
            vec2(0.0, 1.0),
            vec2(-1.0, 0.0),
            vec2(0.0, -1.0),
            vec2(1.0, 1.0),
        ];
        let cons = build_constraints(&sensors, 2);
        let a = &cons.items[sensors.len() + 1].matrix;
        let n = cons.n;
        assert_eq!(a[(0, 2)], 0.5);
        assert_eq!(a[(1, 3)], 0.5);
        assert_eq!(a[(4, n - 1)], -0.5);
        assert_eq!(a[(n - 1, 4)], -0.5);
    }

    #[test]
    fn cost_is_symmetric_psd() {
        let template = builtin("sim10").unwrap();
        let sensors = &template.sensors[..8];
        let u = vec2(200.0, -400.0);
        let v = vec2(-1.0, 1.0);
        let c = 350.0;
        let scaling = Scaling::for_sensors(sensors, c);
        let s_scaled = scaling.scale_sensors(sensors);
        let t = DVector::from_iterator(
            8,
            sensors.iter().map(|s| true_delay(&u, &v, c, s).unwrap()),
        );
        let t_scaled = scaling.scale_delays(&t);
        let g = build_g(&t_scaled, &s_scaled, scaling.scale_speed(c)).unwrap();
        let w = DMatrix::identity(8, 8);
        let sys = assemble(g, w, t_scaled);
        let eigs = sys.c.clone().symmetric_eigenvalues();
        let max = eigs.max();
        assert!(eigs.min() >= -1e-10 * max);
        // rank(C) <= M, so at least N - M = 2p + 3 near-null directions
        let near_null = eigs.iter().filter(|&&l| l.abs() <= 1e-10 * max).count();
        assert!(near_null >= 2 * 2 + 3, "near-null count {near_null}");
    }

    #[test]
    fn scaling_maps_speed_to_one() {
        let template = builtin("sim10").unwrap();
        let scaling = Scaling::for_sensors(&template.sensors, 350.0);
        assert!((scaling.scale_speed(350.0) - 1.0).abs() < 1e-15);
        assert!(scaling.length >= 844.0 && scaling.length <= 845.0);
        let s = scaling.param_scale(2, 8);
        assert_eq!(s.len(), 15);
        assert_eq!(s[14], 1.0);
        assert_eq!(s[0], scaling.length);
        assert_eq!(s[2], scaling.velocity());
        assert_eq!(s[5], scaling.velocity() * scaling.velocity());
    }

    proptest! {
        // rank-one lifts of valid parameter vectors are feasible
        #[test]
        fn rank_one_lift_is_feasible(
            ux in -300.0..300.0f64, uy in -300.0..300.0f64,
            vx in -5.0..5.0f64, vy in -5.0..5.0f64,
            s_seed in 0u64..1000,
        ) {
            let u = vec2(ux, uy);
            let v = vec2(vx, vy);
            let mut sensors = Vec::new();
            for i in 0..6u64 {
                let a = ((s_seed + i * 131) % 977) as f64;
                let b = ((s_seed.wrapping_mul(31) + i * 53) % 911) as f64;
                sensors.push(vec2(a - 488.0, b - 455.0));
            }
            prop_assume!(sensors.iter().all(|s| (s - u.clone()).norm() > 1.0));
            let x = ParamVector::from_state(&u, &v, &sensors);
            let xx = x.as_vector() * x.as_vector().transpose();
            let cons = build_constraints(&sensors, 2);
            prop_assert!(cons.max_residual(&xx) <= 1e-9);
        }

        // trace identity x'Cx = Tr(C xx')
        #[test]
        fn quadratic_form_equals_trace(
            ux in -300.0..300.0f64, uy in -300.0..300.0f64,
            vx in -5.0..5.0f64, vy in -5.0..5.0f64,
            t_seed in 1u64..500,
        ) {
            let u = vec2(ux, uy);
            let v = vec2(vx, vy);
            let sensors: Vec<_> = (0..5u64)
                .map(|i| {
                    let a = ((t_seed + i * 211) % 677) as f64;
                    let b = ((t_seed.wrapping_mul(17) + i * 97) % 613) as f64;
                    vec2(a - 338.0, b - 306.0)
                })
                .collect();
            prop_assume!(sensors.iter().all(|s| (s - u.clone()).norm() > 1.0));
            let t = DVector::from_iterator(
                5,
                sensors.iter().map(|s| true_delay(&u, &v, 400.0, s).unwrap()),
            );
            let g = build_g(&t, &sensors, 400.0).unwrap();
            let sys = assemble(g, DMatrix::identity(5, 5), t);
            let x = ParamVector::from_state(&u, &v, &sensors);
            let xx = x.as_vector() * x.as_vector().transpose();
            let quad = (x.as_vector().transpose() * &sys.c * x.as_vector())[(0, 0)];
            let tr = (&sys.c * xx).trace();
            // both routes cancel near-zero at exact data; compare against the
            // natural magnitude of the products instead of the tiny result
            let scale = sys.c.norm() * x.as_vector().norm_squared();
            prop_assert!((quad - tr).abs() <= 1e-12 * scale);
        }
    }
}
