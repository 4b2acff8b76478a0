//! Closed-form thresholds on `(d1, d3)` for isosceles sensor layouts with `d1 = d2`.
//!
//! Layouts are parameterised by the base length `r = |Z1 Z2|` and the apex height
//! `s`, with sensors at `(-r/2, 0)`, `(r/2, 0)` and `(0, s)`.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};

/// Height of the equilateral triangle on base `r`.
pub fn equilateral_height<T: Scalar>(r: T) -> T {
    r * lit::<T>(3.0).sqrt() * lit(0.5)
}

/// `sqrt(d1^2 - r^2/4)`, the half-chord of circles 1 and 2 on the symmetry axis.
pub fn half_chord<T: Scalar>(r: T, d1: T) -> Result<T> {
    let h2 = d1 * d1 - r * r * lit(0.25);
    if h2 < T::zero() {
        return Err(precondition("d1 < r/2: circles 1 and 2 are disjoint"));
    }
    Ok(h2.sqrt())
}

fn isosceles_params<T: Scalar>(config: &SensorConfig<T>, tol: T) -> Result<(T, T, T, T)> {
    let z = config.sensors;
    let r = z[0].dist(z[1]);
    let (l13, l23) = (z[0].dist(z[2]), z[1].dist(z[2]));
    let d = config.ranges;
    if r == T::zero() || !l13.approx_eq(l23, tol) {
        return Err(precondition("sensor triangle is not isosceles about Z3"));
    }
    if !d[0].approx_eq(d[1], tol) {
        return Err(precondition("d1 and d2 differ"));
    }
    if d[0] + d[1] < r * (T::one() - tol) {
        return Err(precondition("circles 1 and 2 are disjoint"));
    }
    Ok((r, l13, d[0], d[2]))
}

/// Value of `d3` at which `O(S12+) = O(S12-)`.
pub fn d3_zero<T: Scalar>(config: &SensorConfig<T>, tol: T) -> Result<T> {
    let (r, l13, d1, _) = isosceles_params(config, tol)?;
    Ok((d1 * d1 + l13 * l13 - r * r * lit(0.5)).sqrt())
}

/// Value of `d1` at which `O(S23+) = O(S23-)` for the given `d3`.
pub fn d1_zero<T: Scalar>(config: &SensorConfig<T>, tol: T) -> Result<T> {
    let (r, l13, d1, d3) = isosceles_params(config, tol)?;
    let l2 = l13 * l13;
    let v = d1 * d1 + (l2 + d3 * d3 - d1 * d1) * r * r / (l2 + l2);
    if v < T::zero() {
        return Err(precondition("negative radicand for d1_zero"));
    }
    Ok(v.sqrt())
}

/// `d3` below which `S12+` beats `S31+`.
pub fn threshold_r<T: Scalar>(r: T, s: T, d1: T) -> Result<T> {
    let h = half_chord(r, d1)?;
    let (s2, r2) = (s * s, r * r);
    let four: T = lit(4.0);
    let den = four * s2 + lit::<T>(9.0) * r2;
    let v = h * h + s2 * (four * s2 + r2) / den - (s + s) * h * (four * s2 - lit::<T>(3.0) * r2) / den;
    Ok(v.max(T::zero()).sqrt())
}

/// `d3` below which `S31+` beats `S12-`.
pub fn threshold_m<T: Scalar>(r: T, s: T, d1: T) -> Result<T> {
    let (s2, r2) = (s * s, r * r);
    if d1 * d1 < r2 * lit(0.25) + s2 {
        return Err(precondition("threshold M needs d1 >= sqrt(r^2/4 + s^2)"));
    }
    let h = half_chord(r, d1)?;
    let four: T = lit(4.0);
    let den = four * s2 + r2;
    let v = h * h + (s + s) * h * (four * s2 - lit::<T>(3.0) * r2) / den
        + s2 * (four * s2 + lit::<T>(9.0) * r2) / den;
    Ok(v.sqrt())
}

/// Five-solution value of `d1` for sharp layouts (`s > sqrt(3)/2 r`).
pub fn threshold_p<T: Scalar>(r: T, s: T) -> Option<T> {
    let (s2, r2) = (s * s, r * r);
    let four: T = lit(4.0);
    let den = four * s2 - lit::<T>(3.0) * r2;
    if den <= T::zero() {
        return None;
    }
    let k = (four * s2 + lit::<T>(5.0) * r2) / den;
    Some((r2 * lit(0.25) + s2 * k * k).sqrt())
}

/// The same value expressed through the side lengths `|Z1 Z3|` and `|Z1 Z2|`.
pub fn threshold_p_sides<T: Scalar>(l13: T, l12: T) -> Option<T> {
    let (a, b) = (l13 * l13, l12 * l12);
    if a <= b {
        return None;
    }
    let quarter = b * lit(0.25);
    let k = (a + b) / (a - b);
    Some((quarter + (a - quarter) * k * k).sqrt())
}

/// Four-solution value of `d1` for flat layouts (`s < sqrt(3)/2 r`).
pub fn threshold_p_flat<T: Scalar>(r: T, s: T) -> Option<T> {
    let (s2, r2) = (s * s, r * r);
    let den = lit::<T>(3.0) * r2 - lit::<T>(4.0) * s2;
    if den <= T::zero() {
        return None;
    }
    let k = lit::<T>(4.0) * r2 / den;
    Some((r2 * lit(0.25) + s2 * k * k).sqrt())
}

/// `2 r^2 s / (s^2 - 3 r^2 / 4)`, defined for sharp layouts.
pub fn threshold_q<T: Scalar>(r: T, s: T) -> Option<T> {
    let den = s * s - r * r * lit(0.75);
    if den <= T::zero() {
        return None;
    }
    Some((r * r * s + r * r * s) / den)
}

/// `sqrt(d1^2 - r^2/4 - s^2)`, where `S23` and `S31` pairs tie.
pub fn lower_pair_level<T: Scalar>(r: T, s: T, d1: T) -> Option<T> {
    let v = d1 * d1 - r * r * lit(0.25) - s * s;
    (v >= T::zero()).then(|| v.sqrt())
}

/// `sqrt(d1^2 - r^2/4 + s^2)`, where `S12+` and `S12-` tie.
pub fn upper_pair_level<T: Scalar>(r: T, s: T, d1: T) -> Option<T> {
    let v = d1 * d1 - r * r * lit(0.25) + s * s;
    (v >= T::zero()).then(|| v.sqrt())
}

/// `O(S31-) - O(S12+)` along `d3^2 = u^2 + 2 t s u`, `u = sqrt(d1^2 - r^2/4) - s`.
pub fn g_aux<T: Scalar>(r: T, s: T, d1: T, t: T) -> Result<T> {
    let u = half_chord(r, d1)? - s;
    let (s2, r2) = (s * s, r * r);
    let quarter_r2 = r2 * lit(0.25);
    let l2 = s2 + quarter_r2;
    let rad = -s2 * u * u * t * t + (s + s) * u * (s2 + quarter_r2 + s * u) * t + quarter_r2 * u * u;
    let lin = -u * ((s2 - quarter_r2) * t + r2 * lit(0.5));
    Ok((s + s) / l2 * (lin + r * rad.max(T::zero()).sqrt()))
}

/// Root of [`g_aux`] in `(0, 1)` and the matching `d3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct D3Star<T> {
    pub d3: T,
    pub t: T,
}

/// Bisection for the `d3` at which `O(S12+) = O(S23-) = O(S31-)`; stops once the `t` bracket is below `tol`.
pub fn d3_star<T: Scalar>(r: T, s: T, d1: T, tol: T) -> Result<D3Star<T>> {
    let p = threshold_p(r, s).ok_or_else(|| precondition("d3* needs s > sqrt(3)/2 r"))?;
    if d1 < p * (T::one() - T::rel_tol()) {
        return Err(precondition("d3* needs d1 > P"));
    }
    let g = |t: T| g_aux(r, s, d1, t);
    let g1 = g(T::one())?;
    if g1 >= -T::rel_tol() * (d1 * d1 + s * s) {
        return Err(Error::NoBracket { g1: g1.as_f64() });
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let tol = tol.max(T::epsilon());
    while hi - lo > tol {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = (lo + hi) * lit(0.5);
    let u = half_chord(r, d1)? - s;
    Ok(D3Star { d3: (u * u + (t + t) * s * u).sqrt(), t })
}

/// Signed relative distance of an input from one threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdDistance<T> {
    pub name: String,
    pub variable: String,
    pub threshold: T,
    pub signed_distance: T,
}

/// Every threshold defined for one isosceles instance; `None` marks an unmet precondition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBundle<T> {
    pub r: T,
    pub s: T,
    pub d1: T,
    pub d3: T,
    pub d3_0: Option<T>,
    pub d1_0: Option<T>,
    #[serde(rename = "R")]
    pub r_level: Option<T>,
    #[serde(rename = "M")]
    pub m_level: Option<T>,
    #[serde(rename = "P")]
    pub p: Option<T>,
    pub p_flat: Option<T>,
    #[serde(rename = "Q")]
    pub q: Option<T>,
    pub d3_star: Option<T>,
    pub t_star: Option<T>,
    pub lower_pair: Option<T>,
    pub upper_pair: Option<T>,
}

impl<T: Scalar> ThresholdBundle<T> {
    pub fn compute(r: T, s: T, d1: T, d3: T) -> Self {
        let quarter_r2 = r * r * lit(0.25);
        let a_level = (quarter_r2 + s * s / lit(9.0)).sqrt();
        let b_level = (quarter_r2 + s * s).sqrt();
        let intersecting = d1 + d1 >= r;
        let d3_0 = intersecting.then(|| (d1 * d1 + s * s - quarter_r2).sqrt());
        let l2 = s * s + quarter_r2;
        let d1_0 = {
            let v = d1 * d1 + (l2 + d3 * d3 - d1 * d1) * r * r / (l2 + l2);
            (intersecting && v >= T::zero()).then(|| v.sqrt())
        };
        let r_level = if d1 >= a_level { threshold_r(r, s, d1).ok() } else { None };
        let m_level = if d1 >= b_level { threshold_m(r, s, d1).ok() } else { None };
        let p = threshold_p(r, s);
        let star = match p {
            Some(p) if d1 > p => d3_star(r, s, d1, lit(1e-12)).ok(),
            _ => None,
        };
        ThresholdBundle {
            r,
            s,
            d1,
            d3,
            d3_0,
            d1_0,
            r_level,
            m_level,
            p,
            p_flat: threshold_p_flat(r, s),
            q: threshold_q(r, s),
            d3_star: star.map(|x| x.d3),
            t_star: star.map(|x| x.t),
            lower_pair: lower_pair_level(r, s, d1),
            upper_pair: upper_pair_level(r, s, d1),
        }
    }

    /// Relative signed distances `(x - level) / level` of `d1` and `d3` from every defined level,
    /// including the fixed row boundaries of the case tables.
    pub fn signed_distances(&self) -> Vec<ThresholdDistance<T>> {
        let (r, s, d1, d3) = (self.r, self.s, self.d1, self.d3);
        let quarter_r2 = r * r * lit(0.25);
        let mut d1_levels: Vec<(&str, Option<T>)> = vec![
            ("r/2", Some(r * lit(0.5))),
            ("sqrt(r^2/4+s^2/9)", Some((quarter_r2 + s * s / lit(9.0)).sqrt())),
            ("sqrt(r^2/4+s^2)", Some((quarter_r2 + s * s).sqrt())),
            ("P", self.p),
            ("P_flat", self.p_flat),
        ];
        let h = half_chord(r, d1).ok();
        let mut d3_levels: Vec<(&str, Option<T>)> = vec![
            ("d3_0", self.d3_0),
            ("R", self.r_level),
            ("M", self.m_level),
            ("d3_star", self.d3_star),
            ("sqrt(d1^2-r^2/4-s^2)", self.lower_pair),
            ("2s/3", Some(s * lit(2.0 / 3.0))),
            ("2s", Some(s + s)),
            ("s-h", h.map(|h| s - h)),
            ("s+h", h.map(|h| s + h)),
        ];
        if (s - equilateral_height(r)).abs() <= T::rel_tol() * r {
            d1_levels.push(("r", Some(r)));
            d3_levels.push(("d1", Some(d1)));
        }
        let mut out = Vec::new();
        for (var, x, levels) in [("d1", d1, d1_levels), ("d3", d3, d3_levels)] {
            for (name, level) in levels {
                if let Some(level) = level {
                    if level > T::zero() {
                        out.push(ThresholdDistance {
                            name: name.to_string(),
                            variable: var.to_string(),
                            threshold: level,
                            signed_distance: (x - level) / level,
                        });
                    }
                }
            }
        }
        out
    }

    /// Smallest absolute relative distance to any level.
    pub fn nearest_distance(&self) -> T {
        self.signed_distances()
            .iter()
            .map(|t| t.signed_distance.abs())
            .fold(T::infinity(), T::min)
    }
}
