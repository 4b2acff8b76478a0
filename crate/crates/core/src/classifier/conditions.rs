//! Multiplicity from closed-form conditions, and the `d3^2 = d1^2 - |Z1 Z3|^2` family.

use serde::{Deserialize, Serialize};

use super::{select_minimizers, Derivation, SolutionSet, SolveOptions};
use crate::error::{precondition, Error, Result};
use crate::geometry::{intersection_candidates, Role};
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};
use crate::thresholds::{
    d3_star, equilateral_height, half_chord, lower_pair_level, threshold_m, threshold_p, threshold_p_flat,
    threshold_r, upper_pair_level,
};

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
    /// Open interval `(lo, hi)`.
    fn between(&self, lo: T, x: T, hi: T) -> bool {
        self.lt(lo, x) && self.lt(x, hi)
    }
}

/// Multiplicity of the minimizer set for `d1 = d2` on the isosceles layout `(r, s)`,
/// decided by the listed conditions directly, with the name of the condition that matched.
pub fn multiplicity_conditions<T: Scalar>(r: T, s: T, d1: T, d3: T) -> Result<(usize, &'static str)> {
    multiplicity_conditions_tol(r, s, d1, d3, T::rel_tol())
}

/// [`multiplicity_conditions`] with an explicit relative equality tolerance.
pub fn multiplicity_conditions_tol<T: Scalar>(r: T, s: T, d1: T, d3: T, tol: T) -> Result<(usize, &'static str)> {
    if !(r > T::zero() && s > T::zero() && d1 >= T::zero() && d3 >= T::zero()) {
        return Err(precondition("needs r, s > 0 and nonnegative ranges"));
    }
    let c = Cmp { tol };
    let (r2, s2) = (r * r, s * s);
    let quarter_r2 = r2 * lit(0.25);
    let eqh = equilateral_height(r);
    let equilateral = (s - eqh).abs() <= tol * r;
    let sharp = !equilateral && s > eqh;
    let flat = !equilateral && s < eqh;
    let four: T = lit(4.0);
    let a = (quarter_r2 + s2 / lit(9.0)).sqrt();
    let b = (quarter_r2 + s2).sqrt();
    if !c.lt(r * lit(0.5), d1) {
        return Ok((1, "unique"));
    }
    let h = half_chord(r, d1)?;
    let p = if sharp { threshold_p(r, s) } else { None };
    let pf = if flat { threshold_p_flat(r, s) } else { None };
    let lo = lower_pair_level(r, s, d1);
    let hi = upper_pair_level(r, s, d1);
    let big_r = if c.lt(a, d1) { Some(threshold_r(r, s, d1)?) } else { None };
    let m = if c.le(b, d1) { Some(threshold_m(r, s, d1)?) } else { None };
    let beyond_p = p.is_some_and(|p| c.lt(p, d1));
    let at_p = p.is_some_and(|p| c.eq(d1, p));
    let star = if beyond_p {
        match d3_star(r, s, d1, T::epsilon()) {
            Ok(x) => Some(x.d3),
            Err(Error::NoBracket { .. }) => lo,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let den_sharp = four * s2 - lit::<T>(3.0) * r2;
    if at_p && c.eq(d3, four * s * r * (four * s2 + r2).sqrt() / den_sharp) {
        return Ok((5, "five: d1 = P, d3 = 4sr sqrt(4s^2+r^2)/(4s^2-3r^2)"));
    }
    if beyond_p && lo.is_some_and(|lo| c.eq(d3, lo)) {
        return Ok((4, "{S23+-, S31+-}: d1 > P, d3 = sqrt(d1^2-r^2/4-s^2)"));
    }
    if let Some(pf) = pf {
        let den = lit::<T>(3.0) * r2 - four * s2;
        let v = s * (lit::<T>(25.0) * r2 * r2 - lit::<T>(24.0) * r2 * s2 + lit::<T>(16.0) * s2 * s2).sqrt() / den;
        if c.eq(d1, pf) && c.eq(d3, v) {
            return Ok((4, "{S12+-, S23+, S31+}: d1 = P_flat"));
        }
    }
    let flat_past = pf.is_some_and(|pf| c.le(pf, d1));
    if let Some(m) = m {
        if c.eq(d3, m) && !flat_past {
            return Ok((3, "{S23+, S31+, S12-}: d3 = M"));
        }
    }
    if let Some(star) = star {
        if c.eq(d3, star) {
            return Ok((3, "{S12+, S23-, S31-}: d3 = d3*"));
        }
    }
    if let Some(big_r) = big_r {
        if c.eq(d3, big_r) {
            let upper_b = c.le(d1, b);
            let eq_case = equilateral && c.lt(r, d1) && c.eq(d3, d1);
            let flat_case = pf.is_some_and(|pf| c.le(b, d1) && c.lt(d1, pf));
            let sharp_case = p.is_some_and(|p| c.le(b, d1) && c.lt(d1, p));
            if upper_b || eq_case || flat_case || sharp_case {
                return Ok((3, "{S12+, S23+, S31+}: d3 = R"));
            }
        }
    }
    if pf.is_some_and(|pf| c.lt(pf, d1)) && hi.is_some_and(|hi| c.eq(d3, hi)) {
        return Ok((2, "{S12+-}: d1 > P_flat, d3 = sqrt(d1^2-r^2/4+s^2)"));
    }
    if let (Some(star), Some(lo)) = (star, lo) {
        if c.between(star, d3, lo) {
            return Ok((2, "{S23-, S31-}: d3* < d3 < sqrt(d1^2-r^2/4-s^2)"));
        }
    }
    const PAIR: &str = "{S23+, S31+}";
    if c.le(d1, a) && c.between(s - h, d3, s + h) {
        return Ok((2, PAIR));
    }
    if let Some(big_r) = big_r {
        if c.le(d1, b) && c.between(big_r, d3, s + h) {
            return Ok((2, PAIR));
        }
        if let Some(m) = m {
            let upper_pair_zone = if equilateral {
                c.lt(r, d1)
            } else if let Some(pf) = pf {
                c.lt(b, d1) && c.lt(d1, pf)
            } else {
                c.lt(b, d1)
            };
            let lower = if sharp { big_r.max(lo.unwrap_or(big_r)) } else { big_r };
            if upper_pair_zone && c.lt(b, d1) && c.between(lower, d3, m) {
                return Ok((2, PAIR));
            }
        }
    }
    Ok((1, "unique"))
}

/// Closed-form objective values at `S12+`, `S12-` and `S31-` when `d3^2 = d1^2 - |Z1 Z3|^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerPairObjectives<T> {
    pub s12_plus: T,
    pub s12_minus: T,
    pub s31_minus: T,
}

pub fn closed_form_objectives_lower_pair<T: Scalar>(r: T, s: T, d3: T) -> Result<LowerPairObjectives<T>> {
    if !(r > T::zero() && s > T::zero() && d3 >= T::zero()) {
        return Err(precondition("needs r, s > 0 and d3 >= 0"));
    }
    let root = (d3 * d3 + s * s).sqrt();
    let two_s2 = lit::<T>(2.0) * s * s;
    Ok(LowerPairObjectives {
        s12_plus: -two_s2 + (s + s) * root,
        s12_minus: two_s2 + (s + s) * root,
        s31_minus: (r + r) * s * d3 / (s * s + r * r * lit(0.25)).sqrt(),
    })
}

/// Recovers `(s, d3)` from the objective values at `S12+` and `S12-` on the same family.
pub fn lower_pair_inputs_from_objectives<T: Scalar>(o_plus: T, o_minus: T) -> Result<(T, T)> {
    if !(o_minus > o_plus && o_plus >= T::zero()) {
        return Err(precondition("needs O(S12-) > O(S12+) >= 0"));
    }
    let s = ((o_minus - o_plus) * lit(0.25)).sqrt();
    let k = (o_plus + lit::<T>(2.0) * s * s) / (s + s);
    Ok((s, (k * k - s * s).max(T::zero()).sqrt()))
}

/// Minimizers for `d1 = d2 > |Z1 Z3|` with `d3^2 = d1^2 - |Z1 Z3|^2` on the layout `(r, s)`.
pub fn lower_pair_branch<T: Scalar>(r: T, s: T, d1: T, opts: &SolveOptions<T>) -> Result<SolutionSet<T>> {
    if !(r > T::zero() && s > T::zero()) {
        return Err(precondition("needs r, s > 0"));
    }
    let d3 = lower_pair_level(r, s, d1)
        .filter(|d3| *d3 > T::zero())
        .ok_or_else(|| precondition("needs d1 > sqrt(s^2 + r^2/4)"))?;
    let config = SensorConfig::canonical(r, s, [d1, d1, d3])?;
    let tol = opts.tie_tol;
    let p = if s > equilateral_height(r) && (s - equilateral_height(r)).abs() > opts.shape_tol * r {
        threshold_p(r, s)
    } else {
        None
    };
    let (id, roles): (u8, &[Role]) = match p {
        Some(p) if (d1 - p).abs() <= tol * p => {
            (2, &[Role::S12Plus, Role::S23Plus, Role::S23Minus, Role::S31Plus, Role::S31Minus])
        }
        Some(p) if d1 > p => (3, &[Role::S23Plus, Role::S23Minus, Role::S31Plus, Role::S31Minus]),
        _ => (1, &[Role::S12Plus]),
    };
    let all = intersection_candidates(&config)?;
    let listed: Vec<_> = all.iter().filter(|c| roles.contains(&c.role)).copied().collect();
    if listed.len() != roles.len() {
        return Err(Error::Internal("missing intersection on the d3 = sqrt(d1^2 - |Z1Z3|^2) family".into()));
    }
    let (points, value) = select_minimizers(&config, &listed, opts)?;
    let mut notes = Vec::new();
    if points.len() != roles.len() {
        notes.push(format!("objective tie test kept {} of {} listed roles", points.len(), roles.len()));
    }
    let (best_all, _) = select_minimizers(&config, &all, opts)?;
    if best_all.iter().any(|b| !roles.contains(&b.role)) {
        notes.push("an unlisted intersection attains the minimum".into());
    }
    Ok(SolutionSet {
        multiplicity: points.len(),
        points,
        objective_value: value,
        derivation: Derivation::LowerPairFamily(id),
        near_threshold: Vec::new(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::intersection_point;
    use proptest::prelude::*;

    fn opts() -> SolveOptions<f64> {
        SolveOptions::default()
    }

    #[test]
    fn condition_examples() {
        let (m, _) = multiplicity_conditions(2.0, 3.0, 50f64.sqrt(), 40f64.sqrt()).unwrap();
        assert_eq!(m, 5);
        let (m, why) = multiplicity_conditions(2.0, 1.0, 5f64.sqrt(), 5f64.sqrt()).unwrap();
        assert_eq!(m, 4);
        assert!(why.contains("P_flat"));
        let (m, why) = multiplicity_conditions(2.0, 3f64.sqrt(), 2.6, 2.6).unwrap();
        assert_eq!(m, 3);
        assert!(why.contains("= R"));
        let (m, _) = multiplicity_conditions(2.0, 3.0, 10.3158, 9.7591).unwrap();
        assert_eq!(m, 2);
        let (m, _) = multiplicity_conditions(2.0, 3f64.sqrt(), 4.0, 5.252).unwrap();
        assert_eq!(m, 1);
    }

    #[test]
    fn closed_forms() {
        let v = closed_form_objectives_lower_pair(2.0f64, 1.5, 2.0).unwrap();
        assert!((v.s12_plus - 3.0).abs() < 1e-3);
        assert!((v.s12_minus - 12.0).abs() < 1e-3);
        assert!((v.s31_minus - 6.6564).abs() < 1e-3);
        let v = closed_form_objectives_lower_pair(2.0f64, 3.0, 40f64.sqrt()).unwrap();
        assert!((v.s12_plus - 24.0).abs() < 1e-9);
        assert!((v.s12_minus - 60.0).abs() < 1e-9);
        assert!((v.s31_minus - 24.0).abs() < 1e-9);
        let v = closed_form_objectives_lower_pair(2.0f64, 3.0, 1e-9).unwrap();
        assert!(v.s12_plus.abs() < 1e-8);
    }

    #[test]
    fn reconstruction_round_trip() {
        let (s, d3) = lower_pair_inputs_from_objectives(3.0f64, 12.0).unwrap();
        assert!((s - 1.5).abs() < 1e-12 && (d3 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn branch_examples() {
        let set = lower_pair_branch(2.0, 1.5, 7.25f64.sqrt(), &opts()).unwrap();
        assert_eq!(set.roles(), vec![Role::S12Plus]);
        assert!((set.objective_value - 3.0).abs() < 1e-3);
        let set = lower_pair_branch(2.0, 3.0, 50f64.sqrt(), &opts()).unwrap();
        assert_eq!(set.multiplicity, 5);
        assert_eq!(set.derivation, Derivation::LowerPairFamily(2));
        let set = lower_pair_branch(2.0, 3.0, 9.0, &opts()).unwrap();
        assert_eq!(set.multiplicity, 4);
        assert!(set.notes.is_empty());
        assert!(lower_pair_branch(2.0, 3.0, 3.0, &opts()).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_objective(s in 0.3..6.0f64, x in 0.01..10.0f64) {
            let r = 2.0;
            let d1 = (s * s + 1.0 + x * x).sqrt();
            let d3 = x;
            let cfg = SensorConfig::canonical(r, s, [d1, d1, d3]).unwrap();
            let v = closed_form_objectives_lower_pair(r, s, d3).unwrap();
            for (role, val) in [(Role::S12Plus, v.s12_plus), (Role::S12Minus, v.s12_minus), (Role::S31Minus, v.s31_minus)] {
                let o = cfg.value(intersection_point(&cfg, role).unwrap().unwrap());
                prop_assert!((o - val).abs() <= 1e-9 * o.max(1.0), "{:?} {} {}", role, o, val);
            }
        }

        #[test]
        fn branch_agrees_with_scan(s in 0.3..6.0f64, x in 0.01..10.0f64) {
            let d1 = (s * s + 1.0 + x * x).sqrt();
            let set = lower_pair_branch(2.0, s, d1, &opts()).unwrap();
            prop_assert!(set.notes.is_empty(), "{:?}", set.notes);
        }
    }
}
