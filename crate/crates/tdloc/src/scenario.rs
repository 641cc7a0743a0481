//! Experiment data model: sensor geometry, source state, noise spec, and the
//! lifted parameter vector.
//!
//! Everything is stored in SI units (m, s, m/s). Scenario files carry explicit
//! unit tags (`m`/`km`, `m/s`/`km/s`) and are converted on load; built-in
//! sensor tables are embedded as constants. A [`Scenario`] is immutable after
//! construction and safe to share across Monte Carlo workers.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while loading or validating a scenario.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to parse scenario document: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("failed to serialize scenario document: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("unknown built-in scenario `{0}` (available: sim10, real9)")]
    UnknownBuiltin(String),
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("{context} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("too few sensors: M = {m} violates M >= 2p+1 = {min} for p = {p}")]
    TooFewSensors { m: usize, p: usize, min: usize },
    #[error("speed invariant violated: ||v|| = {speed} must be strictly below c = {c}")]
    SpeedInvariant { speed: f64, c: f64 },
    #[error("signal speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("sensors {0} and {1} coincide; all sensors must be distinct")]
    DuplicateSensor(usize, usize),
    #[error("source position coincides with sensor {0} (d_i must be positive)")]
    SourceOnSensor(usize),
    #[error("noise covariance is not symmetric positive semidefinite: {0}")]
    NoiseNotPsd(String),
    #[error("noise spec must provide exactly one of variance_s2 or covariance_s2")]
    AmbiguousNoise,
    #[error("parameter vector has length {got}, expected M + 2p + 3 = {expected}")]
    BadParamLength { got: usize, expected: usize },
    #[error("parameter vector homogenization entry is {0}, expected exactly 1")]
    BadHomogenization(f64),
    #[error("requested {requested} sensors but only {available} are available")]
    SensorCount { requested: usize, available: usize },
}

/// Measurement-noise specification: scalar sigma²·I or a full covariance, in s².
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// Diagonal-scalar covariance sigma²·I. Zero is allowed for noiseless tests.
    Scalar(f64),
    /// Full M×M symmetric PSD covariance.
    Matrix(DMatrix<f64>),
}

impl NoiseSpec {
    /// Materialize the M×M covariance matrix.
    pub fn covariance(&self, m: usize) -> DMatrix<f64> {
        match self {
            NoiseSpec::Scalar(var) => DMatrix::identity(m, m) * *var,
            NoiseSpec::Matrix(q) => q.clone(),
        }
    }

    /// True when the covariance is exactly zero (noiseless test regime).
    pub fn is_zero(&self) -> bool {
        match self {
            NoiseSpec::Scalar(var) => *var == 0.0,
            NoiseSpec::Matrix(q) => q.iter().all(|&x| x == 0.0),
        }
    }
}

/// A complete experiment description in SI units: sensor positions, true
/// source state, signal speed, and measurement-noise covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    /// M sensor positions, meters, each of dimension p.
    pub sensors: Vec<DVector<f64>>,
    /// Initial source position u, meters.
    pub source_position: DVector<f64>,
    /// Constant source velocity v, meters/second.
    pub source_velocity: DVector<f64>,
    /// Signal propagation speed c, meters/second.
    pub signal_speed: f64,
    /// Delay-noise covariance, seconds².
    pub noise: NoiseSpec,
}

impl Scenario {
    /// Build and validate a scenario.
    pub fn new(
        label: impl Into<String>,
        sensors: Vec<DVector<f64>>,
        source_position: DVector<f64>,
        source_velocity: DVector<f64>,
        signal_speed: f64,
        noise: NoiseSpec,
    ) -> Result<Self, ScenarioError> {
        let scenario = Self {
            label: label.into(),
            sensors,
            source_position,
            source_velocity,
            signal_speed,
            noise,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Spatial dimension p.
    pub fn p(&self) -> usize {
        self.source_position.len()
    }

    /// Sensor count M.
    pub fn m(&self) -> usize {
        self.sensors.len()
    }

    /// Noise covariance as a dense M×M matrix, seconds².
    pub fn noise_cov(&self) -> DMatrix<f64> {
        self.noise.covariance(self.m())
    }

    /// Check every scenario invariant, naming the first violated one.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let p = self.p();
        if p != 2 && p != 3 {
            return Err(ScenarioError::BadDimension(p));
        }
        if self.source_velocity.len() != p {
            return Err(ScenarioError::DimensionMismatch {
                context: "source velocity",
                got: self.source_velocity.len(),
                expected: p,
            });
        }
        for (i, s) in self.sensors.iter().enumerate() {
            if s.len() != p {
                return Err(ScenarioError::DimensionMismatch {
                    context: "sensor position",
                    got: s.len(),
                    expected: p,
                });
            }
            if *s == self.source_position {
                return Err(ScenarioError::SourceOnSensor(i + 1));
            }
            for (j, other) in self.sensors.iter().enumerate().skip(i + 1) {
                if s == other {
                    return Err(ScenarioError::DuplicateSensor(i + 1, j + 1));
                }
            }
        }
        let m = self.m();
        let min = 2 * p + 1;
        if m < min {
            return Err(ScenarioError::TooFewSensors { m, p, min });
        }
        if self.signal_speed <= 0.0 {
            return Err(ScenarioError::NonPositiveSpeed(self.signal_speed));
        }
        let speed = self.source_velocity.norm();
        if speed >= self.signal_speed {
            return Err(ScenarioError::SpeedInvariant {
                speed,
                c: self.signal_speed,
            });
        }
        self.validate_noise()?;
        Ok(())
    }

    fn validate_noise(&self) -> Result<(), ScenarioError> {
        match &self.noise {
            NoiseSpec::Scalar(var) => {
                if !var.is_finite() || *var < 0.0 {
                    return Err(ScenarioError::NoiseNotPsd(format!(
                        "scalar variance {var} is negative or non-finite"
                    )));
                }
            }
            NoiseSpec::Matrix(q) => {
                let m = self.m();
                if q.nrows() != m || q.ncols() != m {
                    return Err(ScenarioError::NoiseNotPsd(format!(
                        "covariance is {}x{}, expected {m}x{m}",
                        q.nrows(),
                        q.ncols()
                    )));
                }
                let scale = q.amax().max(1e-300);
                for i in 0..m {
                    for j in 0..m {
                        if (q[(i, j)] - q[(j, i)]).abs() > 1e-12 * scale {
                            return Err(ScenarioError::NoiseNotPsd(format!(
                                "entry ({i},{j}) breaks symmetry"
                            )));
                        }
                    }
                }
                let eigs = q.clone().symmetric_eigenvalues();
                let min = eigs.min();
                if min < -1e-10 * scale {
                    return Err(ScenarioError::NoiseNotPsd(format!(
                        "minimum eigenvalue {min} is negative"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Scenario restricted to the first `count` sensors, in table order.
    pub fn with_sensor_prefix(&self, count: usize) -> Result<Self, ScenarioError> {
        if count > self.m() {
            return Err(ScenarioError::SensorCount {
                requested: count,
                available: self.m(),
            });
        }
        let noise = match &self.noise {
            NoiseSpec::Scalar(v) => NoiseSpec::Scalar(*v),
            NoiseSpec::Matrix(q) => NoiseSpec::Matrix(q.view((0, 0), (count, count)).into_owned()),
        };
        Scenario::new(
            self.label.clone(),
            self.sensors[..count].to_vec(),
            self.source_position.clone(),
            self.source_velocity.clone(),
            self.signal_speed,
            noise,
        )
    }

    /// Parse a scenario from structured text with explicit unit tags.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        file.try_into()
    }

    /// Serialize to the same structured-text format (SI tags), such that
    /// reloading reproduces identical values bit for bit.
    pub fn to_toml_string(&self) -> Result<String, ScenarioError> {
        let file = ScenarioFile::from(self);
        Ok(toml::to_string_pretty(&file)?)
    }
}

/// Parse a scenario document. Alias for [`Scenario::from_toml_str`].
pub fn load_scenario(config_text: &str) -> Result<Scenario, ScenarioError> {
    Scenario::from_toml_str(config_text)
}

// ---------------------------------------------------------------------------
// Structured-text representation (explicit unit tags)
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LengthUnit {
    M,
    Km,
}

impl LengthUnit {
    fn to_meters(&self, value: f64) -> f64 {
        match self {
            LengthUnit::M => value,
            LengthUnit::Km => value * 1000.0,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
enum VelocityUnit {
    #[serde(rename = "m/s")]
    MPerS,
    #[serde(rename = "km/s")]
    KmPerS,
}

impl VelocityUnit {
    fn to_mps(&self, value: f64) -> f64 {
        match self {
            VelocityUnit::MPerS => value,
            VelocityUnit::KmPerS => value * 1000.0,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SensorsSection {
    unit: LengthUnit,
    positions: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SourceSection {
    position: Vec<f64>,
    position_unit: LengthUnit,
    velocity: Vec<f64>,
    velocity_unit: VelocityUnit,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalSection {
    speed: f64,
    speed_unit: VelocityUnit,
}

#[derive(Debug, Serialize, Deserialize)]
struct NoiseSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    variance_s2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    covariance_s2: Option<Vec<Vec<f64>>>,
}

/// On-disk scenario document. All units are explicit; parsing fails if a tag
/// is missing.
#[derive(Debug, Serialize, Deserialize)]
pub struct ScenarioFile {
    label: String,
    dimension: usize,
    sensors: SensorsSection,
    source: SourceSection,
    signal: SignalSection,
    noise: NoiseSection,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = ScenarioError;

    fn try_from(file: ScenarioFile) -> Result<Self, ScenarioError> {
        let p = file.dimension;
        if p != 2 && p != 3 {
            return Err(ScenarioError::BadDimension(p));
        }
        let check_dim = |v: &[f64], context: &'static str| {
            if v.len() != p {
                Err(ScenarioError::DimensionMismatch {
                    context,
                    got: v.len(),
                    expected: p,
                })
            } else {
                Ok(())
            }
        };
        let mut sensors = Vec::with_capacity(file.sensors.positions.len());
        for pos in &file.sensors.positions {
            check_dim(pos, "sensor position")?;
            sensors.push(DVector::from_iterator(
                p,
                pos.iter().map(|&x| file.sensors.unit.to_meters(x)),
            ));
        }
        check_dim(&file.source.position, "source position")?;
        check_dim(&file.source.velocity, "source velocity")?;
        let u = DVector::from_iterator(
            p,
            file.source
                .position
                .iter()
                .map(|&x| file.source.position_unit.to_meters(x)),
        );
        let v = DVector::from_iterator(
            p,
            file.source
                .velocity
                .iter()
                .map(|&x| file.source.velocity_unit.to_mps(x)),
        );
        let c = file.signal.speed_unit.to_mps(file.signal.speed);
        let noise = match (file.noise.variance_s2, file.noise.covariance_s2) {
            (Some(var), None) => NoiseSpec::Scalar(var),
            (None, Some(rows)) => {
                let m = rows.len();
                if rows.iter().any(|r| r.len() != m) {
                    return Err(ScenarioError::NoiseNotPsd(
                        "covariance rows have inconsistent lengths".into(),
                    ));
                }
                NoiseSpec::Matrix(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
            }
            _ => return Err(ScenarioError::AmbiguousNoise),
        };
        Scenario::new(file.label, sensors, u, v, c, noise)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            label: s.label.clone(),
            dimension: s.p(),
            sensors: SensorsSection {
                unit: LengthUnit::M,
                positions: s.sensors.iter().map(|v| v.iter().copied().collect()).collect(),
            },
            source: SourceSection {
                position: s.source_position.iter().copied().collect(),
                position_unit: LengthUnit::M,
                velocity: s.source_velocity.iter().copied().collect(),
                velocity_unit: VelocityUnit::MPerS,
            },
            signal: SignalSection {
                speed: s.signal_speed,
                speed_unit: VelocityUnit::MPerS,
            },
            noise: match &s.noise {
                NoiseSpec::Scalar(v) => NoiseSection {
                    variance_s2: Some(*v),
                    covariance_s2: None,
                },
                NoiseSpec::Matrix(q) => NoiseSection {
                    variance_s2: None,
                    covariance_s2: Some(
                        (0..q.nrows())
                            .map(|i| (0..q.ncols()).map(|j| q[(i, j)]).collect())
                            .collect(),
                    ),
                },
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in sensor tables
// ---------------------------------------------------------------------------

/// Ten simulation sensors, kilometers (converted to meters on access).
const SIM10_KM: [[f64; 2]; 10] = [
    [0.145, -0.385],
    [-0.020, 0.199],
    [-0.207, -0.163],
    [0.400, -0.464],
    [-0.358, 0.765],
    [0.187, -0.167],
    [-0.604, -0.473],
    [0.621, 0.409],
    [-0.099, 0.736],
    [0.205, -0.456],
];

/// Nine bench-experiment sensors, meters.
const REAL9_M: [[f64; 2]; 9] = [
    [5.0, 5.0],
    [5.0, -5.0],
    [-5.0, 5.0],
    [-5.0, -5.0],
    [5.0, 0.0],
    [-5.0, 0.0],
    [0.0, 5.0],
    [0.0, -5.0],
    [0.0, 0.0],
];

/// A named sensor layout: positions only, already in meters. The caller
/// supplies the source state and noise to obtain a full [`Scenario`].
#[derive(Debug, Clone)]
pub struct SensorTemplate {
    pub name: &'static str,
    pub sensors: Vec<DVector<f64>>,
}

impl SensorTemplate {
    /// Complete the template into a validated scenario.
    pub fn into_scenario(
        self,
        source_position: DVector<f64>,
        source_velocity: DVector<f64>,
        signal_speed: f64,
        noise: NoiseSpec,
    ) -> Result<Scenario, ScenarioError> {
        Scenario::new(
            self.name,
            self.sensors,
            source_position,
            source_velocity,
            signal_speed,
            noise,
        )
    }
}

/// Look up a built-in sensor layout by name (`sim10` or `real9`).
pub fn builtin(name: &str) -> Result<SensorTemplate, ScenarioError> {
    let sensors: Vec<DVector<f64>> = match name {
        "sim10" => SIM10_KM
            .iter()
            .map(|xy| DVector::from_column_slice(&[xy[0] * 1000.0, xy[1] * 1000.0]))
            .collect(),
        "real9" => REAL9_M
            .iter()
            .map(|xy| DVector::from_column_slice(xy))
            .collect(),
        _ => return Err(ScenarioError::UnknownBuiltin(name.to_string())),
    };
    Ok(SensorTemplate {
        name: match name {
            "sim10" => "sim10",
            _ => "real9",
        },
        sensors,
    })
}

/// Names of the available built-in layouts.
pub fn builtin_names() -> &'static [&'static str] {
    &["sim10", "real9"]
}

// ---------------------------------------------------------------------------
// Lifted parameter vector
// ---------------------------------------------------------------------------

/// The lifted unknown vector with layout
/// `[u; v; u'v; v'v; d_1..d_M; 1]`, length `N = M + 2p + 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    values: DVector<f64>,
    p: usize,
}

impl ParamVector {
    /// Assemble the exact parameter vector for a known source state.
    pub fn from_state(u: &DVector<f64>, v: &DVector<f64>, sensors: &[DVector<f64>]) -> Self {
        let p = u.len();
        let m = sensors.len();
        let n = m + 2 * p + 3;
        let mut x = DVector::zeros(n);
        x.rows_mut(0, p).copy_from(u);
        x.rows_mut(p, p).copy_from(v);
        x[2 * p] = u.dot(v);
        x[2 * p + 1] = v.dot(v);
        for (i, s) in sensors.iter().enumerate() {
            x[2 * p + 2 + i] = (u - s).norm();
        }
        x[n - 1] = 1.0;
        ParamVector { values: x, p }
    }

    /// Wrap a raw vector, checking only the structural invariants (length and
    /// exact homogenization entry). Extracted estimates may carry small
    /// negative `v'v` or `d_i` values at high noise; use [`Self::validate`]
    /// for the strict sign checks.
    pub fn from_raw(values: DVector<f64>, p: usize) -> Result<Self, ScenarioError> {
        if values.len() < 2 * p + 4 {
            return Err(ScenarioError::BadParamLength {
                got: values.len(),
                expected: 2 * p + 4,
            });
        }
        let last = values[values.len() - 1];
        if last != 1.0 {
            return Err(ScenarioError::BadHomogenization(last));
        }
        Ok(ParamVector { values, p })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.values.len() - 2 * self.p - 3
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn u(&self) -> DVector<f64> {
        self.values.rows(0, self.p).into_owned()
    }

    pub fn v(&self) -> DVector<f64> {
        self.values.rows(self.p, self.p).into_owned()
    }

    /// The `u'v` entry (index 2p, zero-based).
    pub fn uv(&self) -> f64 {
        self.values[2 * self.p]
    }

    /// The `v'v` entry (index 2p+1, zero-based).
    pub fn v_sq(&self) -> f64 {
        self.values[2 * self.p + 1]
    }

    pub fn distances(&self) -> DVector<f64> {
        self.values.rows(2 * self.p + 2, self.m()).into_owned()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.values
    }

    /// Strict sign invariants: `v'v >= 0` and every `d_i >= 0`.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.v_sq() < 0.0 {
            return Err(ScenarioError::BadHomogenization(self.v_sq()));
        }
        for d in self.distances().iter() {
            if *d < 0.0 {
                return Err(ScenarioError::BadHomogenization(*d));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim_scenario() -> Scenario {
        builtin("sim10")
            .unwrap()
            .into_scenario(
                DVector::from_column_slice(&[200.0, -400.0]),
                DVector::from_column_slice(&[-1.0, 1.0]),
                350.0,
                NoiseSpec::Scalar(1e-4),
            )
            .unwrap()
    }

    #[test]
    fn builtin_sim10_matches_table() {
        let t = builtin("sim10").unwrap();
        assert_eq!(t.sensors.len(), 10);
        // first sensor (0.145, -0.385) km -> meters
        assert_eq!(t.sensors[0][0], 145.0);
        assert_eq!(t.sensors[0][1], -385.0);
        // sensor 5 (one-based)
        assert_eq!(t.sensors[4][0], -358.0);
        assert_eq!(t.sensors[4][1], 765.0);
    }

    #[test]
    fn builtin_real9_matches_table() {
        let t = builtin("real9").unwrap();
        assert_eq!(t.sensors.len(), 9);
        assert_eq!(t.sensors[8][0], 0.0);
        assert_eq!(t.sensors[8][1], 0.0);
    }

    #[test]
    fn builtin_unknown_name_errors() {
        assert!(matches!(
            builtin("foo"),
            Err(ScenarioError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn zero_velocity_accepted() {
        let s = builtin("real9").unwrap().into_scenario(
            DVector::from_column_slice(&[1.0, 2.0]),
            DVector::from_column_slice(&[0.0, 0.0]),
            300.0,
            NoiseSpec::Scalar(1e-6),
        );
        assert!(s.is_ok());
    }

    #[test]
    fn speed_boundary_rejected() {
        let s = builtin("real9").unwrap().into_scenario(
            DVector::from_column_slice(&[1.0, 2.0]),
            DVector::from_column_slice(&[300.0, 0.0]),
            300.0,
            NoiseSpec::Scalar(1e-6),
        );
        assert!(matches!(s, Err(ScenarioError::SpeedInvariant { .. })));
    }

    #[test]
    fn too_few_sensors_rejected() {
        let t = builtin("sim10").unwrap();
        let s = Scenario::new(
            "short",
            t.sensors[..4].to_vec(),
            DVector::from_column_slice(&[200.0, -400.0]),
            DVector::from_column_slice(&[-1.0, 1.0]),
            350.0,
            NoiseSpec::Scalar(1e-6),
        );
        assert!(matches!(s, Err(ScenarioError::TooFewSensors { .. })));
    }

    #[test]
    fn load_km_scenario_converts_units() {
        let text = r#"
            label = "demo"
            dimension = 2

            [sensors]
            unit = "km"
            positions = [
                [0.145, -0.385], [-0.020, 0.199], [-0.207, -0.163],
                [0.400, -0.464], [-0.358, 0.765],
            ]

            [source]
            position = [0.2, -0.4]
            position_unit = "km"
            velocity = [-1.0, 1.0]
            velocity_unit = "m/s"

            [signal]
            speed = 0.35
            speed_unit = "km/s"

            [noise]
            variance_s2 = 1e-4
        "#;
        let s = load_scenario(text).unwrap();
        assert_eq!(s.sensors[0][0], 145.0);
        assert_eq!(s.sensors[0][1], -385.0);
        assert_eq!(s.source_position[0], 200.0);
        assert_eq!(s.signal_speed, 350.0);
    }

    #[test]
    fn missing_unit_tag_is_a_parse_error() {
        let text = r#"
            label = "demo"
            dimension = 2

            [sensors]
            positions = [[145.0, -385.0], [-20.0, 199.0], [-207.0, -163.0], [400.0, -464.0], [-358.0, 765.0]]

            [source]
            position = [200.0, -400.0]
            position_unit = "m"
            velocity = [-1.0, 1.0]
            velocity_unit = "m/s"

            [signal]
            speed = 350.0
            speed_unit = "m/s"

            [noise]
            variance_s2 = 1e-4
        "#;
        assert!(matches!(load_scenario(text), Err(ScenarioError::Parse(_))));
    }

    #[test]
    fn toml_round_trip_is_bit_exact() {
        let s = sim_scenario();
        let text = s.to_toml_string().unwrap();
        let reloaded = load_scenario(&text).unwrap();
        assert_eq!(s, reloaded);
    }

    #[test]
    fn param_vector_layout() {
        let u = DVector::from_column_slice(&[3.0, 4.0]);
        let v = DVector::from_column_slice(&[1.0, -2.0]);
        let sensors = vec![
            DVector::from_column_slice(&[0.0, 0.0]),
            DVector::from_column_slice(&[3.0, 0.0]),
        ];
        let x = ParamVector::from_state(&u, &v, &sensors);
        assert_eq!(x.len(), 2 + 2 * 2 + 3);
        assert_eq!(x.uv(), 3.0 - 8.0);
        assert_eq!(x.v_sq(), 5.0);
        assert_eq!(x.distances()[0], 5.0);
        assert_eq!(x.distances()[1], 4.0);
        assert_eq!(x.as_vector()[x.len() - 1], 1.0);
    }

    #[test]
    fn sensor_prefix_restricts_geometry() {
        let s = sim_scenario();
        let s8 = s.with_sensor_prefix(8).unwrap();
        assert_eq!(s8.m(), 8);
        assert!(s.with_sensor_prefix(11).is_err());
    }
}
