use serde::{Deserialize, Serialize};
use trilat::geometry::canonical_frame;
use trilat::oracle::OracleResult;
use trilat::thresholds::ThresholdDistance;
use trilat::{Derivation, SensorConfig, Shape, SolutionSet};

use crate::SCHEMA;

/// Position tolerance for oracle agreement, relative to the instance scale.
pub const POSITION_TOL: f64 = 1e-3;
/// Relative objective tolerance for oracle agreement.
pub const VALUE_TOL: f64 = 1e-6;
/// Absolute objective floor for oracle agreement, in units of `scale^2`.
pub const VALUE_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub x: f64,
    pub y: f64,
    pub role: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleAgreement {
    pub clusters: usize,
    /// Largest distance from a solution to its nearest cluster, or back.
    pub max_position_error: f64,
    /// `|oracle - objective|`, relative to the objective when it is above the floor.
    pub value_error: f64,
    pub agrees: bool,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    pub shape: Shape,
    pub solutions: Vec<ReportPoint>,
    pub multiplicity: usize,
    pub objective: f64,
    pub derivation: Derivation,
    pub near_threshold: Vec<ThresholdDistance<f64>>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<OracleAgreement>,
}

/// Most symmetric shape over the three choices of apex.
pub fn detect_shape(config: &SensorConfig<f64>, tol: f64) -> trilat::Result<Shape> {
    let mut best = Shape::General;
    for perm in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
        match canonical_frame(&config.permuted(perm).sensors, tol)?.shape {
            Shape::Equilateral => return Ok(Shape::Equilateral),
            Shape::General => {}
            s if best == Shape::General => best = s,
            _ => {}
        }
    }
    Ok(best)
}

impl SolveReport {
    pub fn new(shape: Shape, set: &SolutionSet<f64>) -> Self {
        SolveReport {
            schema: SCHEMA.to_string(),
            shape,
            solutions: set
                .points
                .iter()
                .map(|p| ReportPoint { x: p.location.x, y: p.location.y, role: p.role.name().to_string() })
                .collect(),
            multiplicity: set.multiplicity,
            objective: set.objective_value,
            derivation: set.derivation,
            near_threshold: set.near_threshold.clone(),
            notes: set.notes.clone(),
            oracle_agreement: None,
        }
    }
}

/// Compares a classifier answer with oracle clusters.
pub fn compare_with_oracle(config: &SensorConfig<f64>, set: &SolutionSet<f64>, oracle: &OracleResult<f64>) -> OracleAgreement {
    let scale = config.scale();
    let sol = set.locations();
    let found: Vec<_> = oracle.minima.iter().map(|m| m.location).collect();
    let nearest = |p: &trilat::Point2<f64>, qs: &[trilat::Point2<f64>]| qs.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min);
    let max_position_error = sol
        .iter()
        .map(|p| nearest(p, &found))
        .chain(found.iter().map(|q| nearest(q, &sol)))
        .fold(0.0, f64::max);
    let diff = (oracle.global_value - set.objective_value).abs();
    let floor = VALUE_FLOOR * scale * scale;
    let value_error = if set.objective_value.abs() > floor { diff / set.objective_value.abs() } else { diff };
    let agrees = found.len() == set.multiplicity
        && max_position_error <= POSITION_TOL * scale
        && diff <= VALUE_TOL * set.objective_value.abs() + floor;
    OracleAgreement { clusters: found.len(), max_position_error, value_error, agrees, truncated: oracle.truncated }
}
