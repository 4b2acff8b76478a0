//! Case tables for `d1 = d2` on an isosceles layout in the canonical frame.

use serde::{Deserialize, Serialize};

use super::{select_minimizers, Derivation, SolutionSet, SolveOptions};
use crate::error::{precondition, Error, Result};
use crate::geometry::{intersection_point, CandidatePoint, Point2, Role};
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};
use crate::thresholds::{
    d3_star, equilateral_height, half_chord, lower_pair_level, threshold_m, threshold_p, threshold_p_flat,
    threshold_p_sides, threshold_r, upper_pair_level, ThresholdBundle,
};

/// Which table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableKind {
    Equilateral,
    Flat,
    Sharp,
}

/// One row of a case table and the roles it lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub kind: TableKind,
    pub id: u8,
    pub roles: &'static [Role],
}

use Role::*;

const PAIR: &[Role] = &[S23Plus, S31Plus];
const TRIPLE_R: &[Role] = &[S12Plus, S23Plus, S31Plus];
const TRIPLE_M: &[Role] = &[S23Plus, S31Plus, S12Minus];
const FIVE: &[Role] = &[S12Plus, S23Plus, S23Minus, S31Plus, S31Minus];
const FOUR_FLAT: &[Role] = &[S12Plus, S12Minus, S23Plus, S31Plus];
const FOUR_SHARP: &[Role] = &[S23Plus, S23Minus, S31Plus, S31Minus];
const STAR: &[Role] = &[S12Plus, S23Minus, S31Minus];
const MINUS_PAIR: &[Role] = &[S23Minus, S31Minus];
const S12_PAIR: &[Role] = &[S12Plus, S12Minus];

struct Cmp<T> {
    tol: T,
}

impl<T: Scalar> Cmp<T> {
    fn eq(&self, x: T, y: T) -> bool {
        (x - y).abs() <= self.tol * x.abs().max(y.abs())
    }
    fn lt(&self, x: T, y: T) -> bool {
        x < y && !self.eq(x, y)
    }
    fn le(&self, x: T, y: T) -> bool {
        x < y || self.eq(x, y)
    }
}

fn row(kind: TableKind, id: u8, roles: &'static [Role]) -> TableRow {
    TableRow { kind, id, roles }
}

/// Finds the row containing `(d1, d3)`; equality with a boundary is decided with relative `tol`.
pub fn lookup_row<T: Scalar>(kind: TableKind, r: T, s: T, d1: T, d3: T, tol: T) -> Result<TableRow> {
    if !(r > T::zero() && s > T::zero() && d1 >= T::zero() && d3 >= T::zero()) {
        return Err(precondition("table lookup needs r, s > 0 and nonnegative ranges"));
    }
    let c = Cmp { tol };
    let k = kind;
    let quarter_r2 = r * r * lit(0.25);
    let two_s = s + s;
    let third = two_s / lit(3.0);
    if c.le(d1, r * lit(0.5)) {
        return Ok(if d3 <= third || c.eq(d3, third) {
            row(k, 1, &[Y0])
        } else if c.le(d3, two_s) {
            row(k, 2, &[N3])
        } else {
            row(k, 3, &[Y3])
        });
    }
    let h = half_chord(r, d1).unwrap_or(T::zero());
    let a = (quarter_r2 + s * s / lit(9.0)).sqrt();
    let b = (quarter_r2 + s * s).sqrt();
    if c.le(d1, a) {
        return Ok(if c.le(d3, third) {
            row(k, 4, &[Y0])
        } else if c.le(d3, s - h) {
            row(k, 5, &[N3])
        } else if c.lt(d3, s + h) {
            row(k, 6, PAIR)
        } else if c.le(d3, two_s) {
            row(k, 7, &[N3])
        } else {
            row(k, 8, &[Y3])
        });
    }
    let big_r = threshold_r(r, s, d1)?;
    if c.le(d1, b) {
        return Ok(if c.lt(d3, big_r) {
            row(k, 9, &[S12Plus])
        } else if c.eq(d3, big_r) {
            row(k, 10, TRIPLE_R)
        } else if c.lt(d3, s + h) {
            row(k, 11, PAIR)
        } else if c.le(d3, two_s) {
            row(k, 12, &[N3])
        } else {
            row(k, 13, &[Y3])
        });
    }
    let m = threshold_m(r, s, d1)?;
    let tail = |first: u8| {
        if c.lt(d3, m) {
            row(k, first, PAIR)
        } else if c.eq(d3, m) {
            row(k, first + 1, TRIPLE_M)
        } else {
            row(k, first + 2, &[S12Minus])
        }
    };
    let r_rows = |level: T| {
        if c.lt(d3, level) {
            row(k, 14, &[S12Plus])
        } else if c.eq(d3, level) {
            row(k, 15, TRIPLE_R)
        } else {
            tail(16)
        }
    };
    match kind {
        TableKind::Equilateral => Ok(r_rows(d1)),
        TableKind::Flat => {
            let pf = threshold_p_flat(r, s).ok_or_else(|| precondition("flat table needs s < sqrt(3)/2 r"))?;
            if c.lt(d1, pf) {
                return Ok(r_rows(big_r));
            }
            let hi = upper_pair_level(r, s, d1).ok_or_else(|| Error::Internal("upper pair level".into()))?;
            let on = c.eq(d1, pf);
            Ok(if c.lt(d3, hi) {
                row(k, if on { 19 } else { 22 }, &[S12Plus])
            } else if c.eq(d3, hi) {
                if on {
                    row(k, 20, FOUR_FLAT)
                } else {
                    row(k, 23, S12_PAIR)
                }
            } else {
                row(k, if on { 21 } else { 24 }, &[S12Minus])
            })
        }
        TableKind::Sharp => {
            let p = threshold_p(r, s).ok_or_else(|| precondition("sharp table needs s > sqrt(3)/2 r"))?;
            if c.lt(d1, p) {
                return Ok(r_rows(big_r));
            }
            let lo = lower_pair_level(r, s, d1).ok_or_else(|| Error::Internal("lower pair level".into()))?;
            if c.eq(d1, p) {
                return Ok(if c.lt(d3, lo) {
                    row(k, 19, &[S12Plus])
                } else if c.eq(d3, lo) {
                    row(k, 20, FIVE)
                } else {
                    tail(21)
                });
            }
            let star = match d3_star(r, s, d1, T::epsilon()) {
                Ok(x) => x.d3,
                Err(Error::NoBracket { .. }) => lo,
                Err(e) => return Err(e),
            };
            Ok(if c.lt(d3, star) {
                row(k, 24, &[S12Plus])
            } else if c.eq(d3, star) {
                row(k, 25, STAR)
            } else if c.lt(d3, lo) {
                row(k, 26, MINUS_PAIR)
            } else if c.eq(d3, lo) {
                row(k, 27, FOUR_SHARP)
            } else {
                tail(28)
            })
        }
    }
}

/// Coordinates of a table role in the canonical frame.
fn materialize<T: Scalar>(config: &SensorConfig<T>, s: T, d3: T, role: Role) -> Result<Option<Point2<T>>> {
    Ok(match role {
        Y0 => Some(Point2::new(T::zero(), s / lit(3.0))),
        Y3 => Some(Point2::new(T::zero(), -s)),
        N3 => Some(Point2::new(T::zero(), s - d3)),
        role if role.is_intersection() => intersection_point(config, role)?,
        other => return Err(Error::Internal(format!("{other} is not a table role"))),
    })
}

fn derivation(kind: TableKind, id: u8) -> Derivation {
    match kind {
        TableKind::Equilateral => Derivation::EquilateralTableRow(id),
        TableKind::Flat => Derivation::IsoscelesFlatRow(id),
        TableKind::Sharp => Derivation::IsoscelesSharpRow(id),
    }
}

/// Signed distances within this relative band are reported in `near_threshold`.
pub const NEAR_THRESHOLD_BAND: f64 = 1e-6;

/// Solves through the named table regardless of the actual shape.
pub fn solve_table<T: Scalar>(
    kind: TableKind,
    r: T,
    s: T,
    d1: T,
    d3: T,
    opts: &SolveOptions<T>,
) -> Result<SolutionSet<T>> {
    let config = SensorConfig::canonical(r, s, [d1, d1, d3])?;
    let tol = opts.tie_tol;
    let exact = lookup_row(kind, r, s, d1, d3, tol)?;
    let mut roles: Vec<Role> = exact.roles.to_vec();
    let mut candidates = Vec::new();
    for role in exact.roles {
        let p = materialize(&config, s, d3, *role)?
            .ok_or_else(|| Error::Internal(format!("table row {} lists missing {role}", exact.id)))?;
        candidates.push(CandidatePoint { location: p, role: *role });
    }
    // merge the rows touching this point so closed/open endpoint choices cannot drop a minimizer
    let eta = tol * lit(4.0);
    let steps = [-T::one(), T::zero(), T::one()];
    for fa in steps {
        for fb in steps {
            if fa == T::zero() && fb == T::zero() {
                continue;
            }
            let (pd1, pd3) = (d1 * (T::one() + fa * eta), d3 * (T::one() + fb * eta));
            let Ok(near) = lookup_row(kind, r, s, pd1, pd3, tol) else { continue };
            for role in near.roles {
                if roles.contains(role) {
                    continue;
                }
                if let Some(p) = materialize(&config, s, d3, *role)? {
                    roles.push(*role);
                    candidates.push(CandidatePoint { location: p, role: *role });
                }
            }
        }
    }
    candidates.sort_by_key(|c| c.role);
    let (points, value) = select_minimizers(&config, &candidates, opts)?;
    let band: T = lit(NEAR_THRESHOLD_BAND);
    let near_threshold = ThresholdBundle::compute(r, s, d1, d3)
        .signed_distances()
        .into_iter()
        .filter(|t| t.signed_distance.abs() <= band.max(tol))
        .collect();
    let mut notes = Vec::new();
    if points.len() != exact.roles.len() || !exact.roles.iter().all(|r| points.iter().any(|p| p.role == *r)) {
        notes.push(format!(
            "endpoint merge changed row {} from {:?} to {:?}",
            exact.id,
            exact.roles.iter().map(|r| r.name()).collect::<Vec<_>>(),
            points.iter().map(|p| p.role.name()).collect::<Vec<_>>()
        ));
    }
    Ok(SolutionSet {
        multiplicity: points.len(),
        points,
        objective_value: value,
        derivation: derivation(kind, exact.id),
        near_threshold,
        notes,
    })
}

fn check_p_forms<T: Scalar>(r: T, s: T) -> Result<()> {
    let l13 = (s * s + r * r * lit(0.25)).sqrt();
    match (threshold_p(r, s), threshold_p_sides(l13, r)) {
        (Some(a), Some(b)) if (a - b).abs() <= T::rel_tol() * lit(16.0) * a => Ok(()),
        (None, None) => Ok(()),
        (Some(_), None) | (None, Some(_)) if (s - equilateral_height(r)).abs() <= T::rel_tol() * r => Ok(()),
        other => Err(Error::Internal(format!("P forms disagree: {other:?}"))),
    }
}

/// Minimizers for `Z1 = (-r/2, 0)`, `Z2 = (r/2, 0)`, `Z3 = (0, s)` with `d1 = d2`.
/// Near-equilateral layouts are routed to [`solve_equilateral`].
pub fn solve_isosceles<T: Scalar>(r: T, s: T, d1: T, d3: T, opts: &SolveOptions<T>) -> Result<SolutionSet<T>> {
    if !(r > T::zero() && s > T::zero()) {
        return Err(precondition("isosceles layout needs r, s > 0"));
    }
    check_p_forms(r, s)?;
    let eq_height = equilateral_height(r);
    if (s - eq_height).abs() <= opts.shape_tol * r {
        return solve_equilateral(r, d1, d3, opts);
    }
    let kind = if s < eq_height { TableKind::Flat } else { TableKind::Sharp };
    solve_table(kind, r, s, d1, d3, opts)
}

/// Minimizers for the equilateral layout of side `r` with `d1 = d2`.
pub fn solve_equilateral<T: Scalar>(r: T, d1: T, d3: T, opts: &SolveOptions<T>) -> Result<SolutionSet<T>> {
    if !(r > T::zero()) {
        return Err(precondition("equilateral layout needs r > 0"));
    }
    solve_table(TableKind::Equilateral, r, equilateral_height(r), d1, d3, opts)
}

#[cfg(test)]
mod tests {
    use super::super::{multiplicity_conditions, solve_general};
    use super::*;
    use proptest::prelude::*;

    fn opts() -> SolveOptions<f64> {
        SolveOptions::default()
    }

    fn sorted_roles(set: &SolutionSet<f64>) -> Vec<Role> {
        let mut v = set.roles();
        v.sort();
        v
    }

    #[test]
    fn equilateral_examples() {
        let set = solve_equilateral(2.0, 1.0, 1.0, &opts()).unwrap();
        assert_eq!(set.roles(), vec![Y0]);
        assert!((set.points[0].location.y - 3f64.sqrt() / 3.0).abs() < 1e-12);
        let set = solve_equilateral(2.0, 2.6, 1.3, &opts()).unwrap();
        assert_eq!(set.roles(), vec![S12Plus]);
        let set = solve_equilateral(2.0, 4.0, 4.4495, &opts()).unwrap();
        assert_eq!(sorted_roles(&set), vec![S23Plus, S31Plus]);
        assert_eq!(set.derivation, Derivation::EquilateralTableRow(16));
        let set = solve_equilateral(2.0, 2.6, 2.6, &opts()).unwrap();
        assert_eq!(set.multiplicity, 3);
        assert_eq!(set.derivation, Derivation::EquilateralTableRow(15));
    }

    #[test]
    fn isosceles_examples() {
        let set = solve_isosceles(2.0, 3.0, 50f64.sqrt(), 40f64.sqrt(), &opts()).unwrap();
        assert_eq!(sorted_roles(&set), FIVE.to_vec());
        assert_eq!(set.derivation, Derivation::IsoscelesSharpRow(20));
        let set = solve_isosceles(2.0, 1.0, 5f64.sqrt(), 5f64.sqrt(), &opts()).unwrap();
        assert_eq!(sorted_roles(&set), vec![S12Plus, S12Minus, S23Plus, S31Plus]);
        assert_eq!(set.derivation, Derivation::IsoscelesFlatRow(20));
        let set = solve_isosceles(2.0, 3.0, 10.3158, 9.7591, &opts()).unwrap();
        assert_eq!(sorted_roles(&set), vec![S23Minus, S31Minus]);
        assert_eq!(set.derivation, Derivation::IsoscelesSharpRow(26));
    }

    #[test]
    fn four_decimal_input_needs_wider_tolerance() {
        let loose = opts().with_tie_tol(1e-4);
        let set = solve_isosceles(2.0, 3.0, 7.0711, 6.3246, &loose).unwrap();
        assert_eq!(set.multiplicity, 5);
        let set = solve_isosceles(2.0, 3.0, 7.0711, 6.3246, &opts()).unwrap();
        assert!(set.multiplicity < 5);
    }

    #[test]
    fn near_threshold_reports_on_boundaries() {
        let set = solve_isosceles(2.0, 3.0, 50f64.sqrt(), 40f64.sqrt(), &opts()).unwrap();
        let names: Vec<&str> = set.near_threshold.iter().map(|t| t.name.as_str()).collect();
        assert!(names.contains(&"P"));
        let set = solve_isosceles(2.0, 3.0, 10.3158, 9.7591, &opts()).unwrap();
        assert!(set.near_threshold.is_empty());
    }

    #[test]
    fn table_matches_scan_on_grid() {
        for s in [0.4, 1.0, 3f64.sqrt(), 2.5, 3.0, 5.0] {
            for i in 1..60 {
                for j in 1..60 {
                    let (d1, d3) = (0.2 * i as f64, 0.23 * j as f64);
                    let cfg = SensorConfig::canonical(2.0, s, [d1, d1, d3]).unwrap();
                    let (Ok(t), Ok(g)) = (solve_isosceles(2.0, s, d1, d3, &opts()), solve_general(&cfg, &opts())) else {
                        continue;
                    };
                    assert!(
                        (t.objective_value - g.objective_value).abs() <= 1e-9 * g.objective_value.max(1e-9),
                        "s={s} d1={d1} d3={d3} {:?} vs {:?}",
                        t.roles(),
                        g.roles()
                    );
                    assert_eq!(t.multiplicity, g.multiplicity, "s={s} d1={d1} d3={d3} {:?} {:?}", t.roles(), g.roles());
                }
            }
        }
    }

    #[test]
    fn conditions_agree_on_thresholds() {
        let (r, eqh) = (2.0f64, 3f64.sqrt());
        for s in [0.5, 1.0, 1.5, eqh, 2.2, 3.0, 4.5] {
            for d1 in [1.05, 1.2, 1.6, 2.3, 3.1, 4.4, 6.0, 7.3, 10.0, 16.0] {
                let h = (d1 * d1 - 1.0f64).sqrt();
                let b = ThresholdBundle::compute(r, s, d1, 1.0);
                let mut levels = vec![2.0 * s / 3.0, 2.0 * s, s - h, s + h];
                levels.extend([b.r_level, b.m_level, b.d3_star, b.lower_pair, b.upper_pair].into_iter().flatten());
                for d3 in levels.into_iter().filter(|x| *x > 1e-6) {
                    let Ok(set) = solve_isosceles(r, s, d1, d3, &opts()) else { continue };
                    let (m, why) = multiplicity_conditions(r, s, d1, d3).unwrap();
                    assert_eq!(set.multiplicity, m, "s={s} d1={d1} d3={d3} {:?} cond={why}", set.roles());
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn table_vs_conditions(s in 0.2..6.0f64, d1 in 0.05..14.0f64, d3 in 0.05..16.0f64) {
            if let Ok(set) = solve_isosceles(2.0, s, d1, d3, &opts()) {
                let (m, why) = multiplicity_conditions(2.0, s, d1, d3).unwrap();
                prop_assert_eq!(set.multiplicity, m, "roles {:?} cond {}", set.roles(), why);
            }
        }

        #[test]
        fn reflection_symmetry(s in 0.2..6.0f64, d1 in 0.05..14.0f64, d3 in 0.05..16.0f64) {
            if let Ok(set) = solve_isosceles(2.0, s, d1, d3, &opts()) {
                for p in &set.points {
                    let mirror = Point2::new(-p.location.x, p.location.y);
                    let twin = set.points.iter().find(|q| q.location.dist(mirror) <= 1e-9 * (1.0 + d1 + d3));
                    prop_assert!(twin.is_some());
                    prop_assert_eq!(twin.unwrap().role, p.role.mirrored());
                }
            }
        }

        #[test]
        fn equilateral_specialization(d1 in 0.05..14.0f64, d3 in 0.05..16.0f64) {
            let (r, s) = (2.0, 3f64.sqrt());
            let b = ThresholdBundle::compute(r, s, d1, d3);
            prop_assume!(b.nearest_distance() > 1e-6);
            let e = solve_equilateral(r, d1, d3, &opts()).unwrap();
            let wide = SolveOptions { tie_tol: 1e-7, shape_tol: 1e-7, ..opts() };
            for (kind, sk) in [(TableKind::Flat, s * (1.0 - 1e-9)), (TableKind::Sharp, s * (1.0 + 1e-9))] {
                let f = solve_table(kind, r, sk, d1, d3, &wide).unwrap();
                prop_assert_eq!(sorted_roles(&e), sorted_roles(&f), "{:?}", kind);
            }
        }
    }
}
