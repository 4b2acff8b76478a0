//! Objective tables at the circle intersections, contour dumps and sampled region topology.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Bounds;
use crate::error::{Error, Result};
use crate::geometry::{pairwise_intersections, Point2, Role};
use crate::objective::SensorConfig;
use crate::regions::{classify_point, LabelTopology, RegionLabel, RegionTopology};
use crate::scalar::{lit, Scalar};
use crate::union_find::UnionFind;

/// Objective value at one named intersection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledValue<T> {
    pub role: Role,
    pub location: Point2<T>,
    pub value: T,
    /// Ties the smallest entry to relative `1e-9`.
    pub is_min: bool,
}

/// Objective at `S12+-`, `S23+-`, `S31+-` in that order, with the minima flagged.
pub fn objective_table<T: Scalar>(config: &SensorConfig<T>) -> Result<[LabelledValue<T>; 6]> {
    let pairs = pairwise_intersections(config)?;
    const NAMES: [&str; 3] = ["12", "23", "31"];
    let mut out = [LabelledValue { role: Role::S12Plus, location: Point2::origin(), value: T::zero(), is_min: false }; 6];
    for (k, pair) in pairs.iter().enumerate() {
        let (Some(p), Some(m)) = (pair.plus(), pair.minus()) else {
            return Err(Error::MissingIntersection(NAMES[k]));
        };
        for (slot, loc) in [(2 * k, p), (2 * k + 1, m)] {
            out[slot] = LabelledValue { role: Role::INTERSECTIONS[slot], location: loc, value: config.value(loc), is_min: false };
        }
    }
    let best = out.iter().map(|v| v.value).fold(T::infinity(), T::min);
    let scale = config.scale();
    let cut = best + T::rel_tol() * best + T::epsilon() * lit(256.0) * scale * scale;
    for v in &mut out {
        v.is_min = v.value <= cut;
    }
    Ok(out)
}

/// Objective sampled on a regular grid, row-major with `x` varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid<T> {
    pub bounds: Bounds<T>,
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> ContourGrid<T> {
    pub fn points(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        let nx = self.xs.len();
        self.values.iter().enumerate().map(move |(k, v)| (self.xs[k % nx], self.ys[k / nx], *v))
    }
}

fn padded_disk_box<T: Scalar>(config: &SensorConfig<T>, fraction: T) -> Bounds<T> {
    let b = Bounds::around_disks(config, T::zero());
    let pad = (b.max.x - b.min.x).max(b.max.y - b.min.y).max(config.scale()) * fraction;
    Bounds { min: Point2::new(b.min.x - pad, b.min.y - pad), max: Point2::new(b.max.x + pad, b.max.y + pad) }
}

fn axis<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    let steps = T::from_usize(n.max(2) - 1).unwrap();
    (0..n.max(2)).map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / steps).collect()
}

/// Objective on `resolution^2` nodes; the default box is the disks' bounding box plus 20%.
pub fn contour_grid<T: Scalar>(config: &SensorConfig<T>, resolution: usize, bounds: Option<Bounds<T>>) -> ContourGrid<T> {
    let bounds = bounds.unwrap_or_else(|| padded_disk_box(config, lit(0.2)));
    let xs = axis(bounds.min.x, bounds.max.x, resolution);
    let ys = axis(bounds.min.y, bounds.max.y, resolution);
    let values = ys
        .par_iter()
        .flat_map_iter(|y| xs.iter().map(|x| config.value(Point2::new(*x, *y))).collect::<Vec<_>>())
        .collect();
    ContourGrid { bounds, xs, ys, values }
}

/// Region topology estimated from an `n x n` pixel labelling with 4-connectivity.
pub fn sampled_topology<T: Scalar>(config: &SensorConfig<T>, n: usize) -> RegionTopology {
    let n = n.max(2);
    let b = padded_disk_box(config, lit(0.1));
    let xs = axis(b.min.x, b.max.x, n);
    let ys = axis(b.min.y, b.max.y, n);
    let labels: Vec<RegionLabel> = ys
        .iter()
        .flat_map(|y| xs.iter().map(move |x| Point2::new(*x, *y)))
        .map(|p| classify_point(config, p, T::zero()))
        .collect();
    let mut uf = UnionFind::new(labels.len());
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            if i + 1 < n && labels[k] == labels[k + 1] {
                uf.union(k, k + 1);
            }
            if j + 1 < n && labels[k] == labels[k + n] {
                uf.union(k, k + n);
            }
        }
    }
    let mut out = [LabelTopology { nonempty: false, connected: true, components: 0 }; 8];
    for l in RegionLabel::all() {
        let members = labels.iter().enumerate().filter(|(_, x)| **x == l).map(|(k, _)| k);
        let components = uf.count_among(members);
        out[l.0 as usize] = LabelTopology { nonempty: components > 0, connected: components <= 1, components };
    }
    RegionTopology { labels: out, r3_nonempty: out[7].nonempty }
}
