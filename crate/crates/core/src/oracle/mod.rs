//! Brute-force verification path, independent of the classifier.
//!
//! [`brute_force_minimize`] grids the plane, keeps the cells whose rigorous lower bound
//! is within a shrinking band of the best value seen, refines them, then deepens every
//! survivor by branch and bound until each retained cell pins the objective to a tight
//! relative gap. Retained cells are clustered into minimizer representatives.

mod bound;
mod instances;
mod tables;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use instances::{generate_instance, NoiseSpec, MAX_NOISE_ATTEMPTS};
pub use tables::{contour_grid, objective_table, sampled_topology, ContourGrid, LabelledValue};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};
use crate::union_find::UnionFind;
use bound::{lower_bound, Cell};

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds<T> {
    pub min: Point2<T>,
    pub max: Point2<T>,
}

impl<T: Scalar> Bounds<T> {
    /// Bounding box of the three disks, padded by `margin`.
    pub fn around_disks(config: &SensorConfig<T>, margin: T) -> Self {
        let mut min = Point2::new(T::infinity(), T::infinity());
        let mut max = Point2::new(T::neg_infinity(), T::neg_infinity());
        for j in 0..3 {
            let (z, d) = (config.sensors[j], config.ranges[j]);
            min = Point2::new(min.x.min(z.x - d - margin), min.y.min(z.y - d - margin));
            max = Point2::new(max.x.max(z.x + d + margin), max.y.max(z.y + d + margin));
        }
        Bounds { min, max }
    }

    pub fn contains(&self, other: &Bounds<T>) -> bool {
        self.min.x <= other.min.x && self.min.y <= other.min.y && self.max.x >= other.max.x && self.max.y >= other.max.y
    }
}

/// Margin the oracle box must leave around every disk.
pub fn required_margin<T: Scalar>(config: &SensorConfig<T>) -> T {
    let m = config.ranges.iter().copied().fold(T::zero(), T::max);
    if m > T::zero() {
        m
    } else {
        config.scale()
    }
}

/// Search box and refinement schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub bounds: Bounds<T>,
    /// Cells per axis on the initial grid.
    pub resolution: usize,
    pub refine_rounds: usize,
    /// Each surviving cell is split into `ceil(refine_factor)^2` children per round.
    pub refine_factor: T,
}

impl<T: Scalar> GridSpec<T> {
    /// Disk bounding box plus the required margin.
    pub fn auto(config: &SensorConfig<T>, resolution: usize, refine_rounds: usize, refine_factor: T) -> Self {
        GridSpec {
            bounds: Bounds::around_disks(config, required_margin(config)),
            resolution,
            refine_rounds,
            refine_factor,
        }
    }

    pub fn validate(&self, config: &SensorConfig<T>) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::PreconditionViolation("resolution must be at least 2".into()));
        }
        if !(self.refine_factor > T::one()) || !self.refine_factor.is_finite() {
            return Err(Error::PreconditionViolation("refine_factor must exceed 1".into()));
        }
        let b = self.bounds;
        if !(b.min.is_finite() && b.max.is_finite() && b.min.x < b.max.x && b.min.y < b.max.y) {
            return Err(Error::BoundsTooSmall("empty or non-finite box".into()));
        }
        let margin = required_margin(config) * (T::one() - T::rel_tol());
        if !b.contains(&Bounds::around_disks(config, margin)) {
            return Err(Error::BoundsTooSmall(format!(
                "box must contain every disk with margin {}",
                required_margin(config)
            )));
        }
        Ok(())
    }

    fn split_count(&self) -> usize {
        self.refine_factor.ceil().to_usize().unwrap_or(2).max(2)
    }
}

/// One reported global minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleMinimum<T> {
    pub location: Point2<T>,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult<T> {
    pub minima: Vec<OracleMinimum<T>>,
    pub cluster_radius: T,
    pub global_value: T,
    /// Best value after the initial grid and after each refinement round.
    pub round_values: Vec<T>,
    /// Refinement rounds actually run; fewer than requested when the survivor cap is hit.
    pub rounds_completed: usize,
    /// Set when a cell budget cut refinement or deepening short.
    pub truncated: bool,
}

/// Survivor budget per refinement round.
pub const MAX_ROUND_CELLS: usize = 1 << 21;
/// Active-cell budget per deepening level.
pub const MAX_DEEPEN_CELLS: usize = 1 << 20;
/// Relative gap between a retained cell's center value and its lower bound.
pub const DEEPEN_GAP: f64 = 1e-9;
/// Relative band for cells that may hold a co-minimum.
pub const TIE_BAND: f64 = 1e-9;
/// Relative band for reporting a cluster as a global minimizer.
pub const REPORT_BAND: f64 = 1e-6;
/// Golden-section steps per axis during the final polish.
pub const POLISH_STEPS: usize = 50;

/// Survivor band for round `k` of `rounds`: `1e-3` shrinking geometrically to `1e-6`.
fn band<T: Scalar>(k: usize, rounds: usize) -> T {
    if rounds == 0 {
        return lit(1e-6);
    }
    lit(1e-3 * 1e-3f64.powf(k as f64 / rounds as f64))
}

fn abs_floor<T: Scalar>(config: &SensorConfig<T>) -> T {
    let s = config.scale();
    lit::<T>(1e-12).max(T::epsilon() * lit(64.0)) * s * s
}

struct Scored<T> {
    cell: Cell<T>,
    center_value: T,
    lower: T,
}

fn score<T: Scalar>(config: &SensorConfig<T>, cell: Cell<T>) -> Scored<T> {
    Scored { center_value: config.value(cell.center()), lower: lower_bound(config, &cell), cell }
}

fn min_value<T: Scalar>(cells: &[Scored<T>]) -> T {
    cells.iter().map(|c| c.center_value).fold(T::infinity(), T::min)
}

/// Global minimizers of the objective by grid search and rigorous refinement.
pub fn brute_force_minimize<T: Scalar>(config: &SensorConfig<T>, spec: &GridSpec<T>) -> Result<OracleResult<T>> {
    spec.validate(config)?;
    let floor = abs_floor(config);
    let n = spec.resolution;
    let b = spec.bounds;
    let nt = T::from_usize(n).unwrap();
    let (w, h) = ((b.max.x - b.min.x) / nt, (b.max.y - b.min.y) / nt);
    let root = |i: usize, j: usize| {
        let lo = Point2::new(b.min.x + w * T::from_usize(i).unwrap(), b.min.y + h * T::from_usize(j).unwrap());
        let hi = Point2::new(
            if i + 1 == n { b.max.x } else { b.min.x + w * T::from_usize(i + 1).unwrap() },
            if j + 1 == n { b.max.y } else { b.min.y + h * T::from_usize(j + 1).unwrap() },
        );
        Cell { lo, hi }
    };
    let mut cells: Vec<Scored<T>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| (0..n).map(move |i| (i, j)).map(|(i, j)| score(config, root(i, j))).collect::<Vec<_>>())
        .collect();
    let mut best = min_value(&cells);
    let mut round_values = vec![best];
    let rounds = spec.refine_rounds;
    let keep = |cells: Vec<Scored<T>>, best: T, delta: T| -> Vec<Scored<T>> {
        let cut = best + delta * best.abs() + floor;
        cells.into_iter().filter(|c| c.lower <= cut).collect()
    };
    cells = keep(cells, best, band(0, rounds));
    let k = spec.split_count();
    let mut truncated = false;
    let mut rounds_completed = 0;
    for round in 1..=rounds {
        if cells.len().saturating_mul(k * k) > MAX_ROUND_CELLS {
            truncated = true;
            break;
        }
        let children: Vec<Scored<T>> = cells
            .par_iter()
            .flat_map_iter(|c| c.cell.split(k).map(|ch| score(config, ch)).collect::<Vec<_>>())
            .collect();
        best = best.min(min_value(&children));
        round_values.push(best);
        cells = keep(children, best, band(round, rounds));
        rounds_completed = round;
    }
    let cluster_radius = cells.iter().map(|c| c.cell.diagonal()).fold(T::zero(), T::max) * lit(2.0);

    let (leaves, best, cut_short) = deepen(config, cells, best, floor);
    truncated |= cut_short;
    let minima = cluster_leaves(config, &leaves, best, cluster_radius, floor);
    let global_value = minima.iter().map(|m| m.value).fold(best, T::min);
    Ok(OracleResult { minima, cluster_radius, global_value, round_values, rounds_completed, truncated })
}

/// Branch and bound on the survivors until every retained cell's center value is within
/// `DEEPEN_GAP` of its lower bound.
fn deepen<T: Scalar>(config: &SensorConfig<T>, start: Vec<Scored<T>>, mut best: T, floor: T) -> (Vec<Scored<T>>, T, bool) {
    let min_width = T::epsilon() * lit(64.0) * config.scale();
    let mut active = start;
    let mut leaves: Vec<Scored<T>> = Vec::new();
    let mut truncated = false;
    while !active.is_empty() {
        best = best.min(min_value(&active));
        let tie = best + lit::<T>(TIE_BAND) * best.abs() + floor;
        let gap = lit::<T>(DEEPEN_GAP) * best.abs() + floor;
        let mut split = Vec::new();
        for c in active {
            if c.lower > tie {
                continue;
            }
            if c.center_value - c.lower <= gap || c.cell.width() <= min_width {
                leaves.push(c);
            } else {
                split.push(c.cell);
            }
        }
        if split.len() * 4 > MAX_DEEPEN_CELLS {
            truncated = true;
            leaves.extend(split.into_iter().map(|c| score(config, c)));
            break;
        }
        active = split
            .par_iter()
            .flat_map_iter(|c| c.split(2).map(|ch| score(config, ch)).collect::<Vec<_>>())
            .collect();
    }
    best = best.min(min_value(&leaves));
    let tie = best + lit::<T>(TIE_BAND) * best.abs() + floor;
    leaves.retain(|c| c.lower <= tie);
    leaves.sort_by(|a, b| a.cell.lo.cmp_xy(&b.cell.lo));
    (leaves, best, truncated)
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden<T: Scalar>(mut a: T, mut b: T, steps: usize, f: impl Fn(T) -> T) -> (T, T) {
    let inv_phi: T = lit(0.618_033_988_749_894_9);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..steps {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Coordinate-wise golden-section polish within `radius`; only improvements are accepted.
fn polish<T: Scalar>(config: &SensorConfig<T>, start: Point2<T>, radius: T) -> (Point2<T>, T) {
    let mut p = start;
    let mut v = config.value(p);
    for axis in 0..2 {
        let along = |t: T| {
            let q = if axis == 0 { Point2::new(p.x + t, p.y) } else { Point2::new(p.x, p.y + t) };
            config.value(q)
        };
        let (t, ft) = golden(-radius, radius, POLISH_STEPS, along);
        if ft < v {
            p = if axis == 0 { Point2::new(p.x + t, p.y) } else { Point2::new(p.x, p.y + t) };
            v = ft;
        }
    }
    (p, v)
}

fn cluster_leaves<T: Scalar>(
    config: &SensorConfig<T>,
    leaves: &[Scored<T>],
    best: T,
    radius: T,
    floor: T,
) -> Vec<OracleMinimum<T>> {
    let cell_side = radius * lit(0.5);
    let key = |c: &Scored<T>| {
        let p = c.cell.center();
        ((p.x / cell_side).floor().to_i64().unwrap_or(0), (p.y / cell_side).floor().to_i64().unwrap_or(0))
    };
    let mut buckets: HashMap<(i64, i64), usize> = HashMap::new();
    let mut best_in: Vec<usize> = Vec::new();
    for (i, c) in leaves.iter().enumerate() {
        let k = key(c);
        let b = *buckets.entry(k).or_insert_with(|| {
            best_in.push(i);
            best_in.len() - 1
        });
        if c.center_value < leaves[best_in[b]].center_value {
            best_in[b] = i;
        }
    }
    let mut uf = UnionFind::new(best_in.len());
    for (&(x, y), &b) in &buckets {
        for (dx, dy) in [(1, -1), (1, 0), (1, 1), (0, 1)] {
            if let Some(&o) = buckets.get(&(x + dx, y + dy)) {
                uf.union(b, o);
            }
        }
    }
    let mut groups: HashMap<usize, usize> = HashMap::new();
    for (b, &i) in best_in.iter().enumerate() {
        let g = groups.entry(uf.find(b)).or_insert(i);
        if leaves[i].center_value < leaves[*g].center_value {
            *g = i;
        }
    }
    let mut firsts: Vec<usize> = groups.into_values().collect();
    firsts.sort_unstable();
    let mut reps: Vec<OracleMinimum<T>> = firsts
        .iter()
        .map(|&i| {
            let c = &leaves[i];
            let (location, value) = polish(config, c.cell.center(), c.cell.width());
            OracleMinimum { location, value }
        })
        .collect();
    let global = reps.iter().map(|m| m.value).fold(best, T::min);
    let cut = global + lit::<T>(REPORT_BAND) * global.abs() + floor;
    reps.retain(|m| m.value <= cut);
    reps.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<OracleMinimum<T>> = Vec::new();
    for m in reps {
        if out.iter().all(|o| o.location.dist(m.location) > radius) {
            out.push(m);
        }
    }
    out.sort_by(|a, b| a.location.cmp_xy(&b.location));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = Point2<f64>;

    fn run(cfg: &SensorConfig<f64>, n: usize, rounds: usize, factor: f64) -> OracleResult<f64> {
        brute_force_minimize(cfg, &GridSpec::auto(cfg, n, rounds, factor)).unwrap()
    }

    #[test]
    fn five_clusters() {
        let cfg = SensorConfig::canonical(2.0, 3.0, [50f64.sqrt(), 50f64.sqrt(), 40f64.sqrt()]).unwrap();
        let res = run(&cfg, 256, 4, 4.0);
        assert_eq!(res.minima.len(), 5);
        assert!((res.global_value - 24.0).abs() < 1e-6);
    }

    #[test]
    fn noiseless_single_cluster() {
        let z = [P::new(0.0, 0.0), P::new(4.0, 0.0), P::new(1.0, 3.0)];
        let x = P::new(1.3, 1.1);
        let cfg = SensorConfig::new(z, z.map(|p| p.dist(x))).unwrap();
        let res = run(&cfg, 128, 3, 4.0);
        assert_eq!(res.minima.len(), 1);
        assert!(res.global_value <= 1e-8);
        assert!(res.minima[0].location.dist(x) < 1e-6);
    }

    #[test]
    fn equilateral_triple() {
        let cfg = SensorConfig::canonical(2.0, 3f64.sqrt(), [2.6, 2.6, 2.6]).unwrap();
        let res = run(&cfg, 128, 3, 4.0);
        assert_eq!(res.minima.len(), 3);
        assert!((res.global_value - 6.3138).abs() < 1e-2);
    }

    #[test]
    fn smooth_interior_minimum() {
        let cfg = SensorConfig::canonical(2.0, 3f64.sqrt(), [0.3, 0.3, 0.3]).unwrap();
        let res = run(&cfg, 128, 6, 10.0);
        assert_eq!(res.minima.len(), 1);
        assert!(res.minima[0].location.dist(P::new(0.0, 3f64.sqrt() / 3.0)) < 1e-3);
    }

    #[test]
    fn bounds_checked() {
        let cfg = SensorConfig::canonical(2.0, 3.0, [2.0, 2.0, 2.0]).unwrap();
        let mut spec = GridSpec::auto(&cfg, 64, 1, 2.0);
        spec.bounds.max.x -= 1.0;
        assert!(matches!(brute_force_minimize(&cfg, &spec), Err(Error::BoundsTooSmall(_))));
        let spec = GridSpec { refine_factor: 1.0, ..GridSpec::auto(&cfg, 64, 1, 2.0) };
        assert!(matches!(brute_force_minimize(&cfg, &spec), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn resolution_stability() {
        let cfg = SensorConfig::canonical(2.0, 1.0, [1.8251, 1.8251, 1.9204]).unwrap();
        let a = run(&cfg, 64, 3, 2.0).global_value;
        let b = run(&cfg, 128, 3, 2.0).global_value;
        assert!((a - b).abs() < 1e-3 * a);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (t, v) = golden(-1.0, 2.0, 60, |t: f64| (t - 0.3) * (t - 0.3) + 1.0);
        assert!((t - 0.3).abs() < 1e-6 && (v - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rounds_monotone_and_capped(
            z in prop::array::uniform3((-4.0..4.0f64, -4.0..4.0f64)),
            d in prop::array::uniform3(0.1..6.0f64),
        ) {
            let cfg = SensorConfig::new(z.map(|(x, y)| P::new(x, y)), d).unwrap();
            let res = run(&cfg, 64, 3, 2.0);
            prop_assert!(res.round_values.windows(2).all(|w| w[1] <= w[0]));
            prop_assert!(!res.minima.is_empty() && res.minima.len() <= 5);
            for m in &res.minima {
                prop_assert!(m.value <= res.global_value * (1.0 + REPORT_BAND) + 1e-9);
            }
            for (i, a) in res.minima.iter().enumerate() {
                for b in &res.minima[i + 1..] {
                    prop_assert!(a.location.dist(b.location) > res.cluster_radius);
                }
            }
        }
    }
}
