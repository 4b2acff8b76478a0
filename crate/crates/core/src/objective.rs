//! The absolute-residual objective and its quadratic pieces.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::{canonical_sensors, centroid_points, Circle, Point2, RigidMotion};
use crate::regions::{classify_point, RegionLabel};
use crate::scalar::Scalar;

/// Three sensors and their measured ranges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig<T> {
    pub sensors: [Point2<T>; 3],
    pub ranges: [T; 3],
}

impl<T: Scalar> SensorConfig<T> {
    pub fn new(sensors: [Point2<T>; 3], ranges: [T; 3]) -> Result<Self> {
        if !sensors.iter().all(|p| p.is_finite()) {
            return Err(precondition("sensor coordinates must be finite"));
        }
        if !ranges.iter().all(|d| d.is_finite() && *d >= T::zero()) {
            return Err(precondition("ranges must be finite and nonnegative"));
        }
        Ok(SensorConfig { sensors, ranges })
    }

    /// Sensors at `(-r/2, 0)`, `(r/2, 0)`, `(0, s)`.
    pub fn canonical(r: T, s: T, ranges: [T; 3]) -> Result<Self> {
        if !(r > T::zero() && s.is_finite() && r.is_finite()) {
            return Err(precondition("canonical frame needs finite r > 0"));
        }
        Self::new(canonical_sensors(r, s), ranges)
    }

    pub fn circles(&self) -> [Circle<T>; 3] {
        [0, 1, 2].map(|j| Circle::new(self.sensors[j], self.ranges[j]))
    }

    /// Characteristic length: the largest sensor separation or range.
    pub fn scale(&self) -> T {
        let z = &self.sensors;
        let m = z[0]
            .dist(z[1])
            .max(z[1].dist(z[2]))
            .max(z[2].dist(z[0]))
            .max(self.ranges[0])
            .max(self.ranges[1])
            .max(self.ranges[2]);
        if m > T::zero() {
            m
        } else {
            T::one()
        }
    }

    /// Objective value without the per-term breakdown.
    #[inline]
    pub fn value(&self, w: Point2<T>) -> T {
        let mut acc = T::zero();
        for j in 0..3 {
            let d = self.ranges[j];
            acc = acc + (w.dist_sq(self.sensors[j]) - d * d).abs();
        }
        acc
    }

    pub fn transformed(&self, motion: &RigidMotion<T>) -> Self {
        SensorConfig { sensors: self.sensors.map(|p| motion.apply(p)), ranges: self.ranges }
    }

    /// Reorders sensors and ranges so that new index `k` holds old index `perm[k]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        SensorConfig {
            sensors: perm.map(|k| self.sensors[k]),
            ranges: perm.map(|k| self.ranges[k]),
        }
    }

    pub fn cast<U: Scalar>(&self) -> SensorConfig<U> {
        SensorConfig {
            sensors: self.sensors.map(|p| p.cast()),
            ranges: self.ranges.map(|d| U::lit(d.as_f64())),
        }
    }
}

/// Objective value with its three summands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue<T> {
    pub value: T,
    pub per_term: [T; 3],
}

/// `O(W) = sum_j | |W - Z_j|^2 - d_j^2 |`.
pub fn objective<T: Scalar>(config: &SensorConfig<T>, w: Point2<T>) -> ObjectiveValue<T> {
    let per_term = [0, 1, 2].map(|j| {
        let d = config.ranges[j];
        (w.dist_sq(config.sensors[j]) - d * d).abs()
    });
    ObjectiveValue { value: per_term[0] + per_term[1] + per_term[2], per_term }
}

/// `C0 = -3|Y0|^2 - sum d_j^2 + sum |Z_j|^2`.
pub fn quadratic_form_constant<T: Scalar>(config: &SensorConfig<T>) -> T {
    let (y0, _) = centroid_points(&config.sensors);
    let three = T::lit(3.0);
    let sum_d: T = config.ranges.iter().map(|d| *d * *d).sum();
    let sum_z: T = config.sensors.iter().map(|z| z.norm_sq()).sum();
    -three * y0.norm_sq() - sum_d + sum_z
}

/// Evaluates `3|W - Y0|^2 + C0`, the objective restricted to the region outside all disks.
pub fn quadratic_form_check<T: Scalar>(config: &SensorConfig<T>, w: Point2<T>) -> Result<T> {
    let outside = (0..3).all(|j| w.dist(config.sensors[j]) >= config.ranges[j]);
    if !outside {
        return Err(precondition("point is inside a measurement disk"));
    }
    let (y0, _) = centroid_points(&config.sensors);
    Ok(T::lit(3.0) * w.dist_sq(y0) + quadratic_form_constant(config))
}

/// Evaluates `-3|W - Y0|^2 - C0`, the objective restricted to the triple overlap.
pub fn quadratic_form_inner<T: Scalar>(config: &SensorConfig<T>, w: Point2<T>) -> Result<T> {
    if classify_point(config, w, T::zero()) != RegionLabel::ALL {
        return Err(precondition("point is outside a measurement disk"));
    }
    let (y0, _) = centroid_points(&config.sensors);
    Ok(-T::lit(3.0) * w.dist_sq(y0) - quadratic_form_constant(config))
}
