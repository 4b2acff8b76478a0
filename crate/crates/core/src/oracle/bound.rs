//! Rigorous lower bounds of the objective over axis-aligned cells.

use crate::geometry::Point2;
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Cell<T> {
    pub lo: Point2<T>,
    pub hi: Point2<T>,
}

impl<T: Scalar> Cell<T> {
    pub fn center(&self) -> Point2<T> {
        self.lo.midpoint(self.hi)
    }

    pub fn width(&self) -> T {
        (self.hi.x - self.lo.x).max(self.hi.y - self.lo.y)
    }

    pub fn diagonal(&self) -> T {
        self.lo.dist(self.hi)
    }

    /// Splits into `k x k` equal children, row-major from the low corner.
    pub fn split(&self, k: usize) -> impl Iterator<Item = Cell<T>> + '_ {
        let kt = T::from_usize(k).expect("split count");
        let (w, h) = ((self.hi.x - self.lo.x) / kt, (self.hi.y - self.lo.y) / kt);
        (0..k * k).map(move |n| {
            let (i, j) = (n % k, n / k);
            let (fi, fj) = (T::from_usize(i).unwrap(), T::from_usize(j).unwrap());
            let lo = Point2::new(self.lo.x + w * fi, self.lo.y + h * fj);
            let hi = Point2::new(
                if i + 1 == k { self.hi.x } else { lo.x + w },
                if j + 1 == k { self.hi.y } else { lo.y + h },
            );
            Cell { lo, hi }
        })
    }

    fn nearest(&self, p: Point2<T>) -> Point2<T> {
        Point2::new(p.x.max(self.lo.x).min(self.hi.x), p.y.max(self.lo.y).min(self.hi.y))
    }

    fn farthest(&self, p: Point2<T>) -> Point2<T> {
        let x = if (p.x - self.lo.x).abs() > (self.hi.x - p.x).abs() { self.lo.x } else { self.hi.x };
        let y = if (p.y - self.lo.y).abs() > (self.hi.y - p.y).abs() { self.lo.y } else { self.hi.y };
        Point2::new(x, y)
    }
}

/// Lower bound of the objective on `cell`.
///
/// Combines the termwise interval bound with `min_cell sum_j s_j q_j` for every sign
/// vector that agrees with the cell's fixed signs; each is valid since `|q| >= s q`.
pub(crate) fn lower_bound<T: Scalar>(config: &SensorConfig<T>, cell: &Cell<T>) -> T {
    let mut signs = [T::zero(); 3];
    let mut crossed = [0usize; 3];
    let mut n_crossed = 0;
    let mut interval = T::zero();
    for j in 0..3 {
        let z = config.sensors[j];
        let d2 = config.ranges[j] * config.ranges[j];
        let qlo = cell.nearest(z).dist_sq(z) - d2;
        let qhi = cell.farthest(z).dist_sq(z) - d2;
        if qlo >= T::zero() {
            signs[j] = T::one();
            interval = interval + qlo;
        } else if qhi <= T::zero() {
            signs[j] = -T::one();
            interval = interval - qhi;
        } else {
            crossed[n_crossed] = j;
            n_crossed += 1;
        }
    }
    let mut best = interval;
    let mut mag = T::zero();
    for mask in 0..(1usize << n_crossed) {
        let mut s = signs;
        for (b, &j) in crossed[..n_crossed].iter().enumerate() {
            s[j] = if mask >> b & 1 == 1 { T::one() } else { -T::one() };
        }
        let k = s[0] + s[1] + s[2];
        let weighted = config.sensors[0] * s[0] + config.sensors[1] * s[1] + config.sensors[2] * s[2];
        let c = weighted * k.recip();
        let p = if k > T::zero() { cell.nearest(c) } else { cell.farthest(c) };
        let mut v = T::zero();
        for j in 0..3 {
            let d2 = config.ranges[j] * config.ranges[j];
            let e = p.dist_sq(config.sensors[j]);
            v = v + s[j] * (e - d2);
            mag = mag.max(e + d2);
        }
        best = best.max(v);
    }
    best - mag * T::epsilon() * lit(32.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = Point2<f64>;

    proptest! {
        #[test]
        fn bound_is_valid(
            z in prop::array::uniform3((-5.0..5.0f64, -5.0..5.0f64)),
            d in prop::array::uniform3(0.0..6.0f64),
            c in (-8.0..8.0f64, -8.0..8.0f64),
            w in 1e-6..3.0f64,
            probes in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 40),
        ) {
            let cfg = SensorConfig::new(z.map(|(x, y)| P::new(x, y)), d).unwrap();
            let cell = Cell { lo: P::new(c.0, c.1), hi: P::new(c.0 + w, c.1 + w * 0.7) };
            let lb = lower_bound(&cfg, &cell);
            for (a, b) in probes {
                let p = P::new(c.0 + a * w, c.1 + b * w * 0.7);
                prop_assert!(cfg.value(p) >= lb);
            }
            prop_assert!(cfg.value(cell.lo) >= lb && cfg.value(cell.hi) >= lb);
        }
    }

    #[test]
    fn exact_when_no_circle_crosses() {
        let cfg = SensorConfig::canonical(2.0, 3f64.sqrt(), [0.2, 0.2, 0.2]).unwrap();
        let cell = Cell { lo: P::new(-0.3, 0.3), hi: P::new(0.3, 0.9) };
        let y0 = P::new(0.0, 3f64.sqrt() / 3.0);
        assert!((lower_bound(&cfg, &cell) - cfg.value(y0)).abs() < 1e-12);
    }

    #[test]
    fn split_tiles_parent() {
        let cell = Cell { lo: P::new(0.0, 0.0), hi: P::new(1.0, 2.0) };
        let kids: Vec<_> = cell.split(3).collect();
        assert_eq!(kids.len(), 9);
        assert_eq!(kids[8].hi, cell.hi);
        let area: f64 = kids.iter().map(|k| (k.hi.x - k.lo.x) * (k.hi.y - k.lo.y)).sum();
        assert!((area - 2.0).abs() < 1e-12);
    }
}
