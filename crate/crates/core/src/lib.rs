//! Exact global minimizers of the three-sensor absolute-residual trilateration objective
//! `O(W) = sum_j | |W - Z_j|^2 - d_j^2 |`.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`).

pub mod classifier;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod objective;
pub mod oracle;
pub mod regions;
pub mod scalar;
pub mod thresholds;
mod union_find;

pub use classifier::{
    candidate_points, closed_form_objectives_lower_pair, isosceles_view, lower_pair_branch, multiplicity_conditions, solve,
    solve_equilateral, solve_general, solve_isosceles, Derivation, GeneralBranch, IsoscelesView, SolutionSet, SolveOptions,
};
pub use error::{Error, Result};
pub use geometry::{CandidatePoint, Point2, Role, Shape};
pub use objective::{objective, SensorConfig};
pub use regions::{RegionLabel, RegionTopology};
pub use scalar::Scalar;
pub use thresholds::ThresholdBundle;

pub type Point2F64 = Point2<f64>;
pub type Point2F32 = Point2<f32>;
pub type SensorConfigF64 = SensorConfig<f64>;
pub type SensorConfigF32 = SensorConfig<f32>;
pub type SolutionSetF64 = SolutionSet<f64>;
pub type SolutionSetF32 = SolutionSet<f32>;
pub type SolveOptionsF64 = SolveOptions<f64>;
pub type SolveOptionsF32 = SolveOptions<f32>;
