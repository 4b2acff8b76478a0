//! Exact global minimizer sets.
//!
//! [`solve_general`] scans a candidate set that provably contains every minimizer:
//! the stationary points of each quadratic piece, the stationary points of the
//! objective restricted to each circle, and all circle intersections.
//! [`solve_isosceles`] and [`solve_equilateral`] read the answer from the case tables
//! for symmetric layouts with `d1 = d2`.

mod conditions;
mod tables;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use conditions::{
    closed_form_objectives_lower_pair, lower_pair_branch, lower_pair_inputs_from_objectives, multiplicity_conditions,
    multiplicity_conditions_tol, LowerPairObjectives,
};
pub use tables::{lookup_row, solve_equilateral, solve_isosceles, solve_table, TableKind, TableRow};

use crate::error::{Error, Result};
use crate::geometry::{
    canonical_frame, centroid_points, intersection_candidates, CanonicalFrame, CandidatePoint, Point2, Role, Shape,
};
use crate::objective::SensorConfig;
use crate::regions::{k_nonempty, region_topology};
use crate::scalar::{lit, Scalar};
use crate::thresholds::ThresholdDistance;

/// Tolerances used by the solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions<T> {
    /// Relative tolerance for objective ties and threshold equalities.
    pub tie_tol: T,
    /// Relative tolerance for shape detection.
    pub shape_tol: T,
    /// Points closer than `location_tol * scale` are one solution.
    pub location_tol: T,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            tie_tol: T::rel_tol(),
            shape_tol: T::rel_tol(),
            location_tol: T::rel_tol().sqrt() * lit(0.03),
        }
    }
}

impl<T: Scalar> SolveOptions<T> {
    pub fn with_tie_tol(mut self, tol: T) -> Self {
        self.tie_tol = tol;
        self.shape_tol = self.shape_tol.max(tol);
        self
    }
}

/// Regime that fixed the branch of the general candidate scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneralBranch {
    /// Some point of the sensor triangle lies outside all disks.
    InteriorPoint,
    /// Triple overlap nonempty and each single-disk region nonempty and connected.
    AllRegionsConnected,
    /// Neither characterised regime applies.
    Fallback,
    /// Three circles share a point; topology was not decided.
    DegenerateArrangement,
}

/// Which rule produced a [`SolutionSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id")]
pub enum Derivation {
    GeneralCandidateScan(GeneralBranch),
    EquilateralTableRow(u8),
    IsoscelesFlatRow(u8),
    IsoscelesSharpRow(u8),
    LowerPairFamily(u8),
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::GeneralCandidateScan(b) => write!(f, "GeneralCandidateScan({b:?})"),
            Derivation::EquilateralTableRow(id) => write!(f, "EquilateralTableRow({id})"),
            Derivation::IsoscelesFlatRow(id) => write!(f, "IsoscelesFlatRow({id})"),
            Derivation::IsoscelesSharpRow(id) => write!(f, "IsoscelesSharpRow({id})"),
            Derivation::LowerPairFamily(id) => write!(f, "LowerPairFamily({id})"),
        }
    }
}

/// Global minimizers of one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet<T> {
    pub points: Vec<CandidatePoint<T>>,
    pub objective_value: T,
    pub multiplicity: usize,
    pub derivation: Derivation,
    pub near_threshold: Vec<ThresholdDistance<T>>,
    pub notes: Vec<String>,
}

impl<T: Scalar> SolutionSet<T> {
    pub fn roles(&self) -> Vec<Role> {
        self.points.iter().map(|p| p.role).collect()
    }

    pub fn locations(&self) -> Vec<Point2<T>> {
        self.points.iter().map(|p| p.location).collect()
    }

    pub fn has_role(&self, role: Role) -> bool {
        self.points.iter().any(|p| p.role == role)
    }
}

/// Absolute slack added to relative objective ties.
fn tie_floor<T: Scalar>(config: &SensorConfig<T>) -> T {
    let scale = config.scale();
    T::epsilon() * lit(256.0) * scale * scale
}

/// Keeps the candidates whose objective is within the tie tolerance of the minimum,
/// merging coincident locations (earlier candidates win).
pub(crate) fn select_minimizers<T: Scalar>(
    config: &SensorConfig<T>,
    candidates: &[CandidatePoint<T>],
    opts: &SolveOptions<T>,
) -> Result<(Vec<CandidatePoint<T>>, T)> {
    let values: Vec<T> = candidates.iter().map(|c| config.value(c.location)).collect();
    let best = values
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(T::infinity(), T::min);
    if !best.is_finite() {
        return Err(Error::Internal("no finite candidate".into()));
    }
    let cut = best + opts.tie_tol * best + tie_floor(config);
    let merge = opts.location_tol * config.scale();
    let mut kept: Vec<CandidatePoint<T>> = Vec::new();
    for (c, v) in candidates.iter().zip(&values) {
        if *v <= cut && kept.iter().all(|k| k.location.dist(c.location) > merge) {
            kept.push(*c);
        }
    }
    Ok((kept, best))
}

/// Candidate set containing every global minimizer, ordered by role priority.
pub fn candidate_points<T: Scalar>(config: &SensorConfig<T>) -> Result<Vec<CandidatePoint<T>>> {
    let z = config.sensors;
    let mut out = intersection_candidates(config)?;
    let (y0, yj) = centroid_points(&z);
    out.push(CandidatePoint { location: y0, role: Role::Y0 });
    for (j, role) in [Role::Y1, Role::Y2, Role::Y3].into_iter().enumerate() {
        out.push(CandidatePoint { location: yj[j], role });
    }
    // stationary points of the objective restricted to each circle
    for a in [2usize, 0, 1] {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        for (sb, sc) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let (sb, sc): (T, T) = (lit(sb), lit(sc));
            let v = z[b] * sb + z[c] * sc - z[a] * (sb + sc);
            let n = v.norm();
            if n <= T::epsilon() * config.scale() {
                continue;
            }
            let role = if a == 2 && sb > T::zero() && sc > T::zero() { Role::N3 } else { Role::RegionProjection };
            out.push(CandidatePoint { location: z[a] + v * (config.ranges[a] / n), role });
        }
    }
    Ok(out)
}

/// Minimizer set of an arbitrary non-collinear instance by exhaustive candidate scan.
pub fn solve_general<T: Scalar>(config: &SensorConfig<T>, opts: &SolveOptions<T>) -> Result<SolutionSet<T>> {
    canonical_frame(&config.sensors, opts.shape_tol)?;
    let candidates = candidate_points(config)?;
    let (points, value) = select_minimizers(config, &candidates, opts)?;
    let mut notes = Vec::new();
    let branch = if k_nonempty(config, opts.tie_tol) {
        GeneralBranch::InteriorPoint
    } else {
        match region_topology(config, opts.tie_tol) {
            Ok(t) if t.all_regions_connected() => {
                if !points.iter().all(|p| p.role.is_intersection()) {
                    notes.push("minimizer outside the circle intersections despite connected regions".into());
                }
                GeneralBranch::AllRegionsConnected
            }
            Ok(_) => GeneralBranch::Fallback,
            Err(Error::DegenerateArrangement) => GeneralBranch::DegenerateArrangement,
            Err(e) => return Err(e),
        }
    };
    Ok(SolutionSet {
        multiplicity: points.len(),
        points,
        objective_value: value,
        derivation: Derivation::GeneralCandidateScan(branch),
        near_threshold: Vec::new(),
        notes,
    })
}

/// Permutations placing each sensor at the apex slot.
const APEX_PERMUTATIONS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

fn role_in_original(role: Role, perm: [usize; 3]) -> Role {
    if perm == [0, 1, 2] {
        return role;
    }
    let pair_role = |i: usize, j: usize, plus: bool| {
        let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
        match ((a, b), plus) {
            ((0, 1), true) => Role::S12Plus,
            ((0, 1), false) => Role::S12Minus,
            ((1, 2), true) => Role::S23Plus,
            ((1, 2), false) => Role::S23Minus,
            (_, true) => Role::S31Plus,
            (_, false) => Role::S31Minus,
        }
    };
    let y = [Role::Y1, Role::Y2, Role::Y3];
    match role {
        Role::S12Plus => pair_role(0, 1, true),
        Role::S12Minus => pair_role(0, 1, false),
        Role::S23Plus => pair_role(1, 2, true),
        Role::S23Minus => pair_role(1, 2, false),
        Role::S31Plus => pair_role(2, 0, true),
        Role::S31Minus => pair_role(2, 0, false),
        Role::Y1 => y[perm[0]],
        Role::Y2 => y[perm[1]],
        Role::Y3 => y[perm[2]],
        Role::N3 => Role::RegionProjection,
        other => other,
    }
}

/// An instance seen from its apex: `config.permuted(perm)` has equal base ranges `d1`,
/// apex range `d3`, and `frame` is its canonical frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsoscelesView<T> {
    pub perm: [usize; 3],
    pub frame: CanonicalFrame<T>,
    pub d1: T,
    pub d3: T,
}

/// First apex permutation under which the layout is isosceles with `d1 = d2` and positive ranges.
pub fn isosceles_view<T: Scalar>(config: &SensorConfig<T>, opts: &SolveOptions<T>) -> Result<Option<IsoscelesView<T>>> {
    canonical_frame(&config.sensors, opts.shape_tol)?;
    for perm in APEX_PERMUTATIONS {
        let permuted = config.permuted(perm);
        let frame = canonical_frame(&permuted.sensors, opts.shape_tol)?;
        if !frame.shape.is_isosceles() || !permuted.ranges[0].approx_eq(permuted.ranges[1], opts.tie_tol) {
            continue;
        }
        let d1 = (permuted.ranges[0] + permuted.ranges[1]) * lit(0.5);
        let d3 = permuted.ranges[2];
        if d1 > T::zero() && d3 > T::zero() {
            return Ok(Some(IsoscelesView { perm, frame, d1, d3 }));
        }
    }
    Ok(None)
}

/// Routes symmetric instances through the case tables and everything else through
/// [`solve_general`]. Points are returned in the input coordinates.
pub fn solve<T: Scalar>(config: &SensorConfig<T>, opts: &SolveOptions<T>) -> Result<SolutionSet<T>> {
    let Some(view) = isosceles_view(config, opts)? else {
        return solve_general(config, opts);
    };
    let frame = view.frame;
    let mut set = match frame.shape {
        Shape::Equilateral => solve_equilateral(frame.r, view.d1, view.d3, opts)?,
        _ => solve_isosceles(frame.r, frame.s, view.d1, view.d3, opts)?,
    };
    let back = frame.motion.inverse();
    for p in &mut set.points {
        p.location = back.apply(p.location);
        p.role = role_in_original(p.role, view.perm);
    }
    set.objective_value = set.points.iter().map(|p| config.value(p.location)).fold(T::infinity(), T::min);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::RegionLabel;
    use proptest::prelude::*;

    type P = Point2<f64>;

    fn opts() -> SolveOptions<f64> {
        SolveOptions::default()
    }

    #[test]
    fn five_way_instance() {
        let cfg = SensorConfig::canonical(2.0, 3.0, [50f64.sqrt(), 50f64.sqrt(), 40f64.sqrt()]).unwrap();
        let set = solve_general(&cfg, &opts()).unwrap();
        assert_eq!(set.multiplicity, 5);
        assert!((set.objective_value - 24.0).abs() < 1e-3);
        let mut roles = set.roles();
        roles.sort();
        assert_eq!(
            roles,
            vec![Role::S12Plus, Role::S23Plus, Role::S23Minus, Role::S31Plus, Role::S31Minus]
        );
    }

    #[test]
    fn noiseless_source() {
        let z = [P::new(0.0, 0.0), P::new(4.0, 0.0), P::new(1.0, 3.0)];
        let x = P::new(3.5, 2.5);
        let cfg = SensorConfig::new(z, z.map(|p| p.dist(x))).unwrap();
        let set = solve_general(&cfg, &opts()).unwrap();
        assert_eq!(set.multiplicity, 1);
        assert!(set.points[0].location.dist(x) < 1e-9);
        assert!(set.objective_value < 1e-12);
    }

    #[test]
    fn unique_far_minus_point() {
        let cfg = SensorConfig::canonical(2.0, 3f64.sqrt(), [4.0, 4.0, 5.252]).unwrap();
        let set = solve_general(&cfg, &opts()).unwrap();
        assert_eq!(set.roles(), vec![Role::S12Minus]);
        assert!((set.objective_value - 3.8328).abs() < 1e-3);
    }

    #[test]
    fn collinear_is_rejected() {
        let z = [P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(2.0, 0.0)];
        let cfg = SensorConfig::new(z, [1.0, 1.0, 1.0]).unwrap();
        assert_eq!(solve_general(&cfg, &opts()), Err(Error::DegenerateTriangle));
    }

    #[test]
    fn small_ranges_give_centroid() {
        let cfg = SensorConfig::canonical(2.0, 3f64.sqrt(), [0.3, 0.3, 0.3]).unwrap();
        let set = solve_general(&cfg, &opts()).unwrap();
        assert_eq!(set.roles(), vec![Role::Y0]);
        assert_eq!(set.derivation, Derivation::GeneralCandidateScan(GeneralBranch::InteriorPoint));
    }

    #[test]
    fn routed_solve_maps_back() {
        // isosceles with apex at index 0, rotated and translated
        let m = crate::geometry::RigidMotion::rotation(0.7, P::new(3.0, -2.0));
        let canon = SensorConfig::canonical(2.0, 3.0, [50f64.sqrt(), 50f64.sqrt(), 40f64.sqrt()]).unwrap();
        let moved = canon.transformed(&m).permuted([2, 0, 1]);
        let set = solve(&moved, &opts()).unwrap();
        assert_eq!(set.multiplicity, 5);
        assert!(matches!(set.derivation, Derivation::IsoscelesSharpRow(_)));
        let general = solve_general(&moved, &opts()).unwrap();
        for p in &set.points {
            assert!((moved.value(p.location) - 24.0).abs() < 1e-9);
            let twin = general.points.iter().find(|g| g.location.dist(p.location) < 1e-9).unwrap();
            assert_eq!(twin.role, p.role);
        }
    }

    #[test]
    fn candidate_objective_agrees_with_direct_scan() {
        let cfg = SensorConfig::new(
            [P::new(-1.3, 0.2), P::new(2.0, -0.4), P::new(0.5, 2.7)],
            [1.7, 2.9, 1.1],
        )
        .unwrap();
        let set = solve_general(&cfg, &opts()).unwrap();
        let mut best = f64::INFINITY;
        let n = 1200;
        for i in 0..=n {
            for j in 0..=n {
                let w = P::new(-6.0 + 12.0 * i as f64 / n as f64, -6.0 + 12.0 * j as f64 / n as f64);
                best = best.min(cfg.value(w));
            }
        }
        assert!(set.objective_value <= best + 1e-12);
        assert!(best - set.objective_value < 0.2);
    }

    fn general_config() -> impl Strategy<Value = SensorConfig<f64>> {
        (prop::array::uniform3((-5.0..5.0f64, -5.0..5.0f64)), prop::array::uniform3(0.05..8.0f64))
            .prop_map(|(z, d)| SensorConfig::new(z.map(|(x, y)| P::new(x, y)), d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn multiplicity_at_most_five(cfg in general_config()) {
            if let Ok(set) = solve_general(&cfg, &opts()) {
                prop_assert!(set.multiplicity >= 1 && set.multiplicity <= 5);
                let v0 = set.objective_value;
                for p in &set.points {
                    let v = cfg.value(p.location);
                    prop_assert!((v - v0).abs() <= 1e-9 * v0.max(1e-12) + 1e-12);
                }
            }
        }

        #[test]
        fn scan_beats_random_probes(cfg in general_config(), probes in prop::collection::vec((-12.0..12.0f64, -12.0..12.0f64), 64)) {
            if let Ok(set) = solve_general(&cfg, &opts()) {
                for (x, y) in probes {
                    prop_assert!(cfg.value(P::new(x, y)) >= set.objective_value - 1e-9);
                }
            }
        }

        #[test]
        fn s_roles_lie_on_circles(cfg in general_config()) {
            if let Ok(set) = solve_general(&cfg, &opts()) {
                for p in &set.points {
                    if let Some((i, j)) = p.role.circles() {
                        for k in [i, j] {
                            let gap = (p.location.dist(cfg.sensors[k]) - cfg.ranges[k]).abs();
                            prop_assert!(gap <= 1e-9 * (1.0 + cfg.ranges[k]));
                        }
                    }
                    let _ = RegionLabel::NONE;
                }
            }
        }
    }
}
