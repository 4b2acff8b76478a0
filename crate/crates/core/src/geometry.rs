//! Points, circles, circle intersections and the canonical isosceles frame.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Point2::new(lit(x), lit(y))
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    pub fn dist_sq(self, o: Self) -> T {
        (self - o).norm_sq()
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Self {
        Point2::new(-self.y, self.x)
    }

    pub fn midpoint(self, o: Self) -> Self {
        (self + o) * lit(0.5)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic order on `(y, x)`.
    pub fn cmp_yx(&self, o: &Self) -> Ordering {
        self.y
            .partial_cmp(&o.y)
            .unwrap_or(Ordering::Equal)
            .then(self.x.partial_cmp(&o.x).unwrap_or(Ordering::Equal))
    }

    /// Lexicographic order on `(x, y)`.
    pub fn cmp_xy(&self, o: &Self) -> Ordering {
        self.x
            .partial_cmp(&o.x)
            .unwrap_or(Ordering::Equal)
            .then(self.y.partial_cmp(&o.y).unwrap_or(Ordering::Equal))
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(lit(self.x.as_f64()), lit(self.y.as_f64()))
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Point2::new(self.x * k, self.y * k)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Point2::new(-self.x, -self.y)
    }
}

impl<T: Scalar> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle<T> {
    pub center: Point2<T>,
    pub radius: T,
}

impl<T: Scalar> Circle<T> {
    pub fn new(center: Point2<T>, radius: T) -> Self {
        Circle { center, radius }
    }

    /// Signed distance from the circle line, negative inside.
    pub fn signed_gap(&self, p: Point2<T>) -> T {
        p.dist(self.center) - self.radius
    }
}

/// Intersection of two circles.
///
/// `plus` is the point nearer the third sensor and `minus` the farther one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntersectionPair<T> {
    Empty,
    Tangent(Point2<T>),
    Two { plus: Point2<T>, minus: Point2<T> },
}

impl<T: Scalar> IntersectionPair<T> {
    pub fn count(&self) -> usize {
        match self {
            IntersectionPair::Empty => 0,
            IntersectionPair::Tangent(_) => 1,
            IntersectionPair::Two { .. } => 2,
        }
    }

    pub fn plus(&self) -> Option<Point2<T>> {
        match *self {
            IntersectionPair::Empty => None,
            IntersectionPair::Tangent(p) => Some(p),
            IntersectionPair::Two { plus, .. } => Some(plus),
        }
    }

    pub fn minus(&self) -> Option<Point2<T>> {
        match *self {
            IntersectionPair::Empty => None,
            IntersectionPair::Tangent(p) => Some(p),
            IntersectionPair::Two { minus, .. } => Some(minus),
        }
    }
}

/// Default tangency snapping tolerance for a pair of circles.
pub fn default_snap_tol<T: Scalar>(a: &Circle<T>, b: &Circle<T>) -> T {
    T::rel_tol() * (a.radius + b.radius + a.center.dist(b.center))
}

/// Intersects two circles and orders the points by distance to `third`.
///
/// Centre distances within `tol` of `ra + rb` or `|ra - rb|` snap to a single
/// tangency point. `None` selects [`default_snap_tol`].
pub fn circle_circle_intersect<T: Scalar>(
    a: &Circle<T>,
    b: &Circle<T>,
    third: Point2<T>,
    tol: Option<T>,
) -> Result<IntersectionPair<T>> {
    let tol = tol.unwrap_or_else(|| default_snap_tol(a, b));
    let delta = b.center - a.center;
    let dist = delta.norm();
    let (ra, rb) = (a.radius, b.radius);
    if dist <= tol {
        if (ra - rb).abs() <= tol {
            return Err(Error::ConcentricIdentical);
        }
        return Ok(IntersectionPair::Empty);
    }
    let dir = delta * dist.recip();
    if (dist - (ra + rb)).abs() <= tol {
        let t = if ra + rb > T::zero() { ra / (ra + rb) } else { lit(0.5) };
        return Ok(IntersectionPair::Tangent(a.center + delta * t));
    }
    if (dist - (ra - rb).abs()).abs() <= tol {
        let p = if ra >= rb { a.center + dir * ra } else { a.center - dir * ra };
        return Ok(IntersectionPair::Tangent(p));
    }
    if dist > ra + rb || dist < (ra - rb).abs() {
        return Ok(IntersectionPair::Empty);
    }
    let along = (dist * dist + ra * ra - rb * rb) / (dist + dist);
    let h_sq = ra * ra - along * along;
    let base = a.center + dir * along;
    if h_sq <= T::zero() {
        return Ok(IntersectionPair::Tangent(base));
    }
    let off = dir.perp() * h_sq.sqrt();
    let (p, q) = (base + off, base - off);
    let (dp, dq) = (p.dist(third), q.dist(third));
    let tie = (dp - dq).abs() <= T::epsilon() * lit(16.0) * (dp + dq);
    let p_first = if tie { p.cmp_yx(&q) == Ordering::Greater } else { dp < dq };
    Ok(if p_first {
        IntersectionPair::Two { plus: p, minus: q }
    } else {
        IntersectionPair::Two { plus: q, minus: p }
    })
}

/// Centroid `Y0` and the reflected points `Y_j = 3 Y0 - 2 Z_j`.
pub fn centroid_points<T: Scalar>(z: &[Point2<T>; 3]) -> (Point2<T>, [Point2<T>; 3]) {
    let third: T = lit(1.0 / 3.0);
    let y0 = Point2::new(
        (z[0].x + z[1].x + z[2].x) * third,
        (z[0].y + z[1].y + z[2].y) * third,
    );
    let three: T = lit(3.0);
    let two: T = lit(2.0);
    let yj = z.map(|zj| y0 * three - zj * two);
    (y0, yj)
}

/// Side midpoints `L = (Z1+Z2)/2`, `M = (Z2+Z3)/2`, `N = (Z3+Z1)/2`.
pub fn side_midpoints<T: Scalar>(z: &[Point2<T>; 3]) -> [Point2<T>; 3] {
    [z[0].midpoint(z[1]), z[1].midpoint(z[2]), z[2].midpoint(z[0])]
}

/// Point of circle 3 nearest to `Y3`.
pub fn n3_point<T: Scalar>(config: &SensorConfig<T>) -> Result<Point2<T>> {
    let z3 = config.sensors[2];
    let (_, yj) = centroid_points(&config.sensors);
    let dir = yj[2] - z3;
    let len = dir.norm();
    if len <= T::epsilon() * config.scale() {
        return Err(Error::DegenerateDirection("Y3 coincides with Z3"));
    }
    Ok(z3 + dir * (config.ranges[2] / len))
}

/// Orthogonal map `p -> m p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotion<T> {
    pub m: [[T; 2]; 2],
    pub t: Point2<T>,
}

impl<T: Scalar> RigidMotion<T> {
    pub fn identity() -> Self {
        RigidMotion {
            m: [[T::one(), T::zero()], [T::zero(), T::one()]],
            t: Point2::origin(),
        }
    }

    /// Rotation by `angle` followed by translation `t`.
    pub fn rotation(angle: T, t: Point2<T>) -> Self {
        let (s, c) = angle.sin_cos();
        RigidMotion { m: [[c, -s], [s, c]], t }
    }

    /// Reflection `y -> -y`.
    pub fn reflect_y() -> Self {
        RigidMotion {
            m: [[T::one(), T::zero()], [T::zero(), -T::one()]],
            t: Point2::origin(),
        }
    }

    pub fn apply(&self, p: Point2<T>) -> Point2<T> {
        Point2::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// Applies the linear part only.
    pub fn apply_vec(&self, v: Point2<T>) -> Point2<T> {
        Point2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    pub fn inverse(&self) -> Self {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let inv = RigidMotion { m: mt, t: Point2::origin() };
        let t = -inv.apply_vec(self.t);
        RigidMotion { m: mt, t }
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Self {
        let a = &self.m;
        let b = &first.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        RigidMotion { m, t: self.apply(first.t) }
    }

    pub fn is_reflection(&self) -> bool {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0] < T::zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Equilateral,
    IsoscelesFlat,
    IsoscelesSharp,
    General,
}

impl Shape {
    pub fn is_isosceles(self) -> bool {
        !matches!(self, Shape::General)
    }
}

/// Frame carrying `Z1 -> (-r/2, 0)`, `Z2 -> (r/2, 0)` and `Z3` into the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalFrame<T> {
    pub motion: RigidMotion<T>,
    pub r: T,
    /// Distance from `Z3` to the midpoint of `Z1 Z2`.
    pub s: T,
    /// Image of `Z3`; `(0, s)` up to tolerance for isosceles shapes.
    pub apex: Point2<T>,
    pub shape: Shape,
}

/// Builds the canonical frame, classifying the shape with relative tolerance `tol`.
pub fn canonical_frame<T: Scalar>(z: &[Point2<T>; 3], tol: T) -> Result<CanonicalFrame<T>> {
    if !z.iter().all(|p| p.is_finite()) {
        return Err(Error::PreconditionViolation("non-finite sensor".into()));
    }
    let base = z[1] - z[0];
    let r = base.norm();
    let spread = z[0].dist(z[2]).max(z[1].dist(z[2])).max(r);
    if r <= T::epsilon() * lit(16.0) * spread || spread == T::zero() {
        return Err(Error::DegenerateTriangle);
    }
    let e1 = base * r.recip();
    let mid = z[0].midpoint(z[1]);
    let v = z[2] - mid;
    let mut e2 = e1.perp();
    if e2.dot(v) < T::zero() {
        e2 = -e2;
    }
    let m = [[e1.x, e1.y], [e2.x, e2.y]];
    let lin = RigidMotion { m, t: Point2::origin() };
    let motion = RigidMotion { m, t: -lin.apply_vec(mid) };
    let apex = motion.apply(z[2]);
    let s = v.norm();
    if apex.y <= tol * r.max(s) {
        return Err(Error::DegenerateTriangle);
    }
    let shape = if apex.x.abs() > tol * r.max(s) {
        Shape::General
    } else {
        let eq_height = r * lit::<T>(3.0).sqrt() * lit(0.5);
        if (s - eq_height).abs() <= tol * r {
            Shape::Equilateral
        } else if s < eq_height {
            Shape::IsoscelesFlat
        } else {
            Shape::IsoscelesSharp
        }
    };
    Ok(CanonicalFrame { motion, r, s, apex, shape })
}

/// Sensor positions `(-r/2, 0)`, `(r/2, 0)`, `(0, s)`.
pub fn canonical_sensors<T: Scalar>(r: T, s: T) -> [Point2<T>; 3] {
    let half = r * lit(0.5);
    [
        Point2::new(-half, T::zero()),
        Point2::new(half, T::zero()),
        Point2::new(T::zero(), s),
    ]
}

/// Named candidate constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    S12Plus,
    S12Minus,
    S23Plus,
    S23Minus,
    S31Plus,
    S31Minus,
    Y0,
    Y1,
    Y2,
    Y3,
    N3,
    RegionProjection,
}

impl Role {
    pub const INTERSECTIONS: [Role; 6] = [
        Role::S12Plus,
        Role::S12Minus,
        Role::S23Plus,
        Role::S23Minus,
        Role::S31Plus,
        Role::S31Minus,
    ];

    pub fn is_intersection(self) -> bool {
        Role::INTERSECTIONS.contains(&self)
    }

    /// Circles (0-based) an intersection role lies on.
    pub fn circles(self) -> Option<(usize, usize)> {
        match self {
            Role::S12Plus | Role::S12Minus => Some((0, 1)),
            Role::S23Plus | Role::S23Minus => Some((1, 2)),
            Role::S31Plus | Role::S31Minus => Some((2, 0)),
            _ => None,
        }
    }

    /// Role after swapping sensors 1 and 2.
    pub fn mirrored(self) -> Role {
        match self {
            Role::S23Plus => Role::S31Plus,
            Role::S23Minus => Role::S31Minus,
            Role::S31Plus => Role::S23Plus,
            Role::S31Minus => Role::S23Minus,
            Role::Y1 => Role::Y2,
            Role::Y2 => Role::Y1,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::S12Plus => "S12+",
            Role::S12Minus => "S12-",
            Role::S23Plus => "S23+",
            Role::S23Minus => "S23-",
            Role::S31Plus => "S31+",
            Role::S31Minus => "S31-",
            Role::Y0 => "Y0",
            Role::Y1 => "Y1",
            Role::Y2 => "Y2",
            Role::Y3 => "Y3",
            Role::N3 => "N3",
            Role::RegionProjection => "projection",
        }
    }

    pub fn from_name(name: &str) -> Option<Role> {
        [
            Role::S12Plus,
            Role::S12Minus,
            Role::S23Plus,
            Role::S23Minus,
            Role::S31Plus,
            Role::S31Minus,
            Role::Y0,
            Role::Y1,
            Role::Y2,
            Role::Y3,
            Role::N3,
            Role::RegionProjection,
        ]
        .into_iter()
        .find(|r| r.name() == name)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidatePoint<T> {
    pub location: Point2<T>,
    pub role: Role,
}

/// Pairwise intersections `S12`, `S23`, `S31`, each ordered against the remaining sensor.
pub fn pairwise_intersections<T: Scalar>(
    config: &SensorConfig<T>,
) -> Result<[IntersectionPair<T>; 3]> {
    let c = config.circles();
    let z = config.sensors;
    Ok([
        circle_circle_intersect(&c[0], &c[1], z[2], None)?,
        circle_circle_intersect(&c[1], &c[2], z[0], None)?,
        circle_circle_intersect(&c[2], &c[0], z[1], None)?,
    ])
}

/// Every existing `S_ij±` point with its role.
pub fn intersection_candidates<T: Scalar>(
    config: &SensorConfig<T>,
) -> Result<Vec<CandidatePoint<T>>> {
    let pairs = pairwise_intersections(config)?;
    let mut out = Vec::with_capacity(6);
    for (k, pair) in pairs.iter().enumerate() {
        let (rp, rm) = (Role::INTERSECTIONS[2 * k], Role::INTERSECTIONS[2 * k + 1]);
        if let Some(p) = pair.plus() {
            out.push(CandidatePoint { location: p, role: rp });
        }
        if let Some(p) = pair.minus() {
            out.push(CandidatePoint { location: p, role: rm });
        }
    }
    Ok(out)
}

/// Location of one intersection role, if the circles meet.
pub fn intersection_point<T: Scalar>(config: &SensorConfig<T>, role: Role) -> Result<Option<Point2<T>>> {
    let pairs = pairwise_intersections(config)?;
    let idx = Role::INTERSECTIONS
        .iter()
        .position(|r| *r == role)
        .ok_or_else(|| Error::Internal(format!("{role} is not an intersection role")))?;
    let pair = &pairs[idx / 2];
    Ok(if idx % 2 == 0 { pair.plus() } else { pair.minus() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    type P = Point2<f64>;

    fn circ(x: f64, y: f64, r: f64) -> Circle<f64> {
        Circle::new(P::new(x, y), r)
    }

    fn on_circle(p: P, c: &Circle<f64>) -> bool {
        (p.dist(c.center) - c.radius).abs() <= 1e-9 * (c.radius + 1.0)
    }

    #[test]
    fn symmetric_pair_against_apex() {
        let a = circ(-1.0, 0.0, 2.6);
        let b = circ(1.0, 0.0, 2.6);
        let got = circle_circle_intersect(&a, &b, P::new(0.0, 3f64.sqrt()), None).unwrap();
        let (plus, minus) = match got {
            IntersectionPair::Two { plus, minus } => (plus, minus),
            other => panic!("{other:?}"),
        };
        assert_relative_eq!(plus.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(plus.y, 2.4, epsilon = 1e-12);
        assert_relative_eq!(minus.y, -2.4, epsilon = 1e-12);
        for p in [plus, minus] {
            for c in [&a, &b] {
                assert!((p.dist_sq(c.center) - c.radius * c.radius).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn disjoint_and_tangent() {
        let o = P::origin();
        let got = circle_circle_intersect(&circ(0., 0., 1.), &circ(10., 0., 1.), o, None).unwrap();
        assert_eq!(got.count(), 0);
        let got = circle_circle_intersect(&circ(0., 0., 1.), &circ(2., 0., 1.), o, None).unwrap();
        assert_eq!(got, IntersectionPair::Tangent(P::new(1.0, 0.0)));
        let got = circle_circle_intersect(&circ(0., 0., 3.), &circ(1., 0., 2.), o, None).unwrap();
        assert_eq!(got, IntersectionPair::Tangent(P::new(3.0, 0.0)));
        let got = circle_circle_intersect(&circ(0., 0., 1.), &circ(0., 0., 1.), o, None);
        assert_eq!(got, Err(Error::ConcentricIdentical));
        let got = circle_circle_intersect(&circ(0., 0., 1.), &circ(0., 0., 2.), o, None).unwrap();
        assert_eq!(got.count(), 0);
    }

    #[test]
    fn centroid_examples() {
        let s3 = 3f64.sqrt();
        let (y0, yj) = centroid_points(&[P::new(-1., 0.), P::new(1., 0.), P::new(0., s3)]);
        assert_relative_eq!(y0.y, s3 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(yj[2].y, -s3, epsilon = 1e-15);
        let (y0, yj) = centroid_points(&[P::new(0., 0.), P::new(2., 0.), P::new(1., 3.)]);
        assert_relative_eq!(y0.x, 1.0);
        assert_relative_eq!(y0.y, 1.0);
        assert_relative_eq!(yj[0].x, 3.0);
        assert_relative_eq!(yj[0].y, 3.0);
        let p = P::new(2.5, -1.0);
        let (y0, yj) = centroid_points(&[p, p, p]);
        assert_relative_eq!(y0.x, p.x, epsilon = 1e-15);
        assert!(yj.iter().all(|y| y.dist(p) < 1e-14));
    }

    #[test]
    fn midpoint_examples() {
        let m = side_midpoints(&[P::new(-1., 0.), P::new(1., 0.), P::new(0., 2.)]);
        assert_eq!(m, [P::new(0., 0.), P::new(0.5, 1.), P::new(-0.5, 1.)]);
        let m = side_midpoints(&[P::new(0., 0.), P::new(4., 0.), P::new(0., 4.)]);
        assert_eq!(m[0], P::new(2., 0.));
    }

    #[test]
    fn n3_examples() {
        let s3 = 3f64.sqrt();
        let cfg = SensorConfig::canonical(2.0, s3, [2.0, 2.0, 1.0]).unwrap();
        let n3 = n3_point(&cfg).unwrap();
        assert_relative_eq!(n3.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(n3.y, s3 - 1.0, epsilon = 1e-14);
        // brute-force angular scan for the nearest point of circle 3 to Y3
        let y3 = P::new(0.0, -s3);
        let z3 = P::new(0.0, s3);
        let best = (0..1_000_000)
            .map(|k| {
                let a = k as f64 * std::f64::consts::TAU / 1e6;
                z3 + P::new(a.cos(), a.sin())
            })
            .min_by(|p, q| p.dist(y3).partial_cmp(&q.dist(y3)).unwrap())
            .unwrap();
        assert!(best.dist(n3) < 1e-5);

        let cfg = SensorConfig::canonical(2.0, 3.0, [2.0, 2.0, 2.0]).unwrap();
        assert_relative_eq!(n3_point(&cfg).unwrap().y, 1.0, epsilon = 1e-14);
        let cfg = SensorConfig::canonical(2.0, 3.0, [2.0, 2.0, 6.0]).unwrap();
        assert_relative_eq!(n3_point(&cfg).unwrap().y, -3.0, epsilon = 1e-14);
    }

    #[test]
    fn frame_examples() {
        let s3 = 3f64.sqrt();
        let f = canonical_frame(&[P::new(-1., 0.), P::new(1., 0.), P::new(0., s3)], 1e-9).unwrap();
        assert_eq!(f.shape, Shape::Equilateral);
        assert_relative_eq!(f.r, 2.0);
        assert_relative_eq!(f.s, s3);
        let f = canonical_frame(&[P::new(0., 0.), P::new(2., 0.), P::new(1., 1.)], 1e-9).unwrap();
        assert_eq!(f.shape, Shape::IsoscelesFlat);
        assert_relative_eq!(f.s, 1.0);
        let z = [P::new(5., 5.), P::new(5., 9.), P::new(11., 7.)];
        let f = canonical_frame(&z, 1e-9).unwrap();
        assert_eq!(f.shape, Shape::IsoscelesSharp);
        assert_relative_eq!(f.r, 4.0);
        assert_relative_eq!(f.s, 6.0);
        let want = [P::new(-2., 0.), P::new(2., 0.), P::new(0., 6.)];
        for (p, w) in z.iter().zip(want) {
            assert!(f.motion.apply(*p).dist(w) < 1e-12);
        }
        let e = canonical_frame(&[P::new(0., 0.), P::new(1., 1.), P::new(3., 3.)], 1e-9);
        assert_eq!(e, Err(Error::DegenerateTriangle));
        let p = P::new(1., 1.);
        assert_eq!(canonical_frame(&[p, p, p], 1e-9), Err(Error::DegenerateTriangle));
    }

    fn coord() -> impl Strategy<Value = f64> {
        -10.0..10.0f64
    }

    fn motion() -> impl Strategy<Value = RigidMotion<f64>> {
        (0.0..std::f64::consts::TAU, coord(), coord(), any::<bool>()).prop_map(|(a, x, y, refl)| {
            let m = RigidMotion::rotation(a, P::new(x, y));
            if refl {
                m.compose(&RigidMotion::reflect_y())
            } else {
                m
            }
        })
    }

    proptest! {
        #[test]
        fn frame_round_trip(pts in prop::array::uniform3((coord(), coord()))) {
            let z = pts.map(|(x, y)| P::new(x, y));
            if let Ok(f) = canonical_frame(&z, 1e-9) {
                let inv = f.motion.inverse();
                let scale = 1.0 + z.iter().map(|p| p.norm()).fold(0.0, f64::max);
                for p in z {
                    prop_assert!(inv.apply(f.motion.apply(p)).dist(p) <= 1e-12 * scale);
                }
                let img = z.map(|p| f.motion.apply(p));
                prop_assert!(img[0].dist(P::new(-f.r / 2.0, 0.0)) <= 1e-12 * scale);
                prop_assert!(img[1].dist(P::new(f.r / 2.0, 0.0)) <= 1e-12 * scale);
                prop_assert!(img[2].y > 0.0);
            }
        }

        #[test]
        fn intersections_lie_on_both_circles(
            a in (coord(), coord(), 0.0..8.0f64),
            b in (coord(), coord(), 0.0..8.0f64),
            third in (coord(), coord()),
        ) {
            let ca = circ(a.0, a.1, a.2);
            let cb = circ(b.0, b.1, b.2);
            let z = P::new(third.0, third.1);
            if let Ok(pair) = circle_circle_intersect(&ca, &cb, z, None) {
                let swapped = circle_circle_intersect(&cb, &ca, z, None).unwrap();
                prop_assert_eq!(pair.count(), swapped.count());
                if let IntersectionPair::Two { plus, minus } = pair {
                    prop_assert!(on_circle(plus, &ca) && on_circle(plus, &cb));
                    prop_assert!(on_circle(minus, &ca) && on_circle(minus, &cb));
                    prop_assert!(plus.dist(z) <= minus.dist(z));
                    prop_assert!(swapped.plus().unwrap().dist(plus) < 1e-9 * (1.0 + ca.radius));
                }
            }
        }

        #[test]
        fn intersection_equivariance(
            a in (coord(), coord(), 0.1..8.0f64),
            b in (coord(), coord(), 0.1..8.0f64),
            third in (coord(), coord()),
            t in motion(),
        ) {
            let ca = circ(a.0, a.1, a.2);
            let cb = circ(b.0, b.1, b.2);
            let z = P::new(third.0, third.1);
            let moved = |c: &Circle<f64>| Circle::new(t.apply(c.center), c.radius);
            if let (Ok(IntersectionPair::Two { plus, minus }), Ok(IntersectionPair::Two { plus: tp, minus: tm })) = (
                circle_circle_intersect(&ca, &cb, z, None),
                circle_circle_intersect(&moved(&ca), &moved(&cb), t.apply(z), None),
            ) {
                let gap = (plus.dist(z) - minus.dist(z)).abs();
                prop_assume!(gap > 1e-6);
                prop_assert!(t.apply(plus).dist(tp) < 1e-9 * (1.0 + a.2 + b.2));
                prop_assert!(t.apply(minus).dist(tm) < 1e-9 * (1.0 + a.2 + b.2));
            }
        }
    }
}
