//! Reference objective values at the six circle intersections for `r = 2` layouts.
//!
//! Values are listed in [`Role::INTERSECTIONS`](crate::geometry::Role::INTERSECTIONS) order
//! (`S12+, S12-, S23+, S23-, S31+, S31-`) and are printed to four decimals.

use crate::classifier::lower_pair_inputs_from_objectives;
use crate::error::Result;
use crate::thresholds::{d3_star, lower_pair_level, threshold_p, threshold_r};

/// Absolute tolerance for four-decimal reference values.
pub const PRINTED_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveFixture {
    pub label: &'static str,
    pub r: f64,
    pub s: f64,
    pub d1: f64,
    pub d3: f64,
    pub values: [f64; 6],
    /// Entries attaining the minimum.
    pub minima: [bool; 6],
}

const T: bool = true;
const F: bool = false;
const SQRT3: f64 = 1.732_050_807_568_877_2;

fn fx(label: &'static str, s: f64, d1: f64, d3: f64, values: [f64; 6], minima: [bool; 6]) -> ObjectiveFixture {
    ObjectiveFixture { label, r: 2.0, s, d1, d3, values, minima }
}

/// Equilateral layout, side 2.
pub fn equilateral_fixtures() -> Vec<ObjectiveFixture> {
    vec![
        fx("a", SQRT3, 1.3333, 1.9737, [3.1726, 2.9375, 1.2628, 7.3803, 1.2628, 7.3803], [F, F, T, F, T, F]),
        fx("b", SQRT3, 2.6, 1.3, [1.2438, 15.3838, 4.9420, 3.8720, 4.9420, 3.8720], [T, F, F, F, F, F]),
        fx("c", SQRT3, 2.6, 2.6, [6.3138, 10.3138, 6.3138, 10.3138, 6.3138, 10.3138], [T, F, T, F, T, F]),
        fx("d", SQRT3, 4.0, 4.4495, [15.2144, 11.6184, 9.9563, 17.7543, 9.9563, 17.7543], [F, F, T, F, T, F]),
        fx("e", SQRT3, 4.0, 24f64.sqrt(), [19.4164, 7.4164, 7.4164, 19.4164, 7.4164, 19.4164], [F, T, T, F, T, F]),
        fx("f", SQRT3, 4.0, 5.2520, [23.0000, 3.8328, 4.4093, 19.9929, 4.4093, 19.9929], [F, T, F, F, F, F]),
    ]
}

/// Flat (`s = 1`) and sharp (`s = 3`) isosceles layouts on base 2.
///
/// Inputs sitting on a threshold are given by the threshold itself so that ties are exact.
pub fn isosceles_fixtures() -> Result<Vec<ObjectiveFixture>> {
    let r_flat = threshold_r(2.0, 1.0, 1.8251)?;
    let r_sharp = threshold_r(2.0, 3.0, 5.1167)?;
    let (p, far) = (threshold_p(2.0, 3.0).expect("sharp"), 10.31583);
    let lo = lower_pair_level(2.0, 3.0, p).expect("d1 > b");
    let star = d3_star(2.0, 3.0, far, 1e-14)?.d3;
    let (rt5, rt20) = (5f64.sqrt(), 20f64.sqrt());
    Ok(vec![
        fx("flat-a", 1.0, 1.8251, r_flat, [2.8643, 3.2429, 2.8643, 6.4858, 2.8643, 6.4858], [T, F, T, F, T, F]),
        fx("flat-b", 1.0, 1.8251, 1.9204, [3.4103, 2.6969, 2.5370, 7.2504, 2.5370, 7.2504], [F, F, T, F, T, F]),
        fx("flat-c", 1.0, rt5, 1.2477, [0.5567, 7.4433, 4.6636, 1.7770, 4.6636, 1.7770], [T, F, F, F, F, F]),
        fx("flat-d", 1.0, rt5, rt5, [4.0, 4.0, 4.0, 8.0, 4.0, 8.0], [T, T, T, F, T, F]),
        fx("flat-e", 1.0, rt20, 3.9155, [4.0491, 13.3865, 13.4171, 8.0797, 13.4171, 8.0797], [T, F, F, F, F, F]),
        fx("flat-f", 1.0, rt20, rt20, [8.7178, 8.7178, 10.4900, 14.4900, 10.4900, 14.4900], [T, T, F, F, F, F]),
        fx("sharp-a", 3.0, 5.1167, 3.2531, [6.5105, 53.7055, 12.9986, 10.7596, 12.9986, 10.7596], [T, F, F, F, F, F]),
        fx("sharp-b", 3.0, 5.1167, r_sharp, [16.0720, 44.1440, 16.0720, 17.6576, 16.0720, 17.6576], [T, F, T, F, T, F]),
        fx("sharp-c", 3.0, 5.1167, 5.1673, [22.6289, 37.5872, 16.4606, 20.6689, 16.4606, 20.6689], [F, F, T, F, T, F]),
        fx("sharp-d", 3.0, p, 5.1623, [10.6491, 73.3509, 20.5469, 15.2066, 20.5469, 15.2066], [T, F, F, F, F, F]),
        fx("sharp-e", 3.0, p, lo, [24.0, 60.0, 24.0, 24.0, 24.0, 24.0], [T, F, T, T, T, T]),
        fx("sharp-f", 3.0, p, 6.9702, [32.5832, 51.4168, 24.2271, 27.6604, 24.2271, 27.6604], [F, F, T, F, T, F]),
        fx("far-a", 3.0, far, 9.0261, [28.6572, 94.5497, 36.0460, 30.0675, 36.0460, 30.0675], [T, F, F, F, F, F]),
        fx("far-b", 3.0, far, star, [31.8414, 91.3655, 36.5462, 31.8414, 36.5462, 31.8414], [T, F, F, T, F, T]),
        fx("far-c", 3.0, far, 9.7591, [42.4272, 80.7797, 37.2617, 36.7912, 37.2617, 36.7912], [F, F, F, T, F, T]),
    ])
}

/// Reference values on the family `d1 = d2`, `d3^2 = d1^2 - |Z1 Z3|^2`, given only as objective
/// values; `(s, d3)` are recovered from `O(S12+)` and `O(S12-)` and `d1` follows from the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerPairFixture {
    pub label: &'static str,
    pub values: [f64; 6],
    pub minima: [bool; 6],
}

pub fn lower_pair_fixtures() -> Vec<LowerPairFixture> {
    let row = |label, o_plus: f64, o_minus: f64, pair: f64, minima| LowerPairFixture {
        label,
        values: [o_plus, o_minus, pair, pair, pair, pair],
        minima,
    };
    vec![
        row("a", 3.0, 12.0, 6.6564, [T, F, F, F, F, F]),
        row("b", 14.8862, 114.8862, 16.2207, [T, F, F, F, F, F]),
        row("c", 21.6750, 121.6750, 20.1430, [F, F, T, T, T, T]),
        row("d", 18.1818, 118.1818, 18.1818, [T, F, T, T, T, T]),
    ]
}

impl LowerPairFixture {
    /// `(s, d3, d1)` recovered from the printed `S12+-` values with `r = 2`.
    pub fn reconstruct(&self) -> Result<(f64, f64, f64)> {
        let (s, d3) = lower_pair_inputs_from_objectives(self.values[0], self.values[1])?;
        Ok((s, d3, (d3 * d3 + s * s + 1.0).sqrt()))
    }

    /// Instance for evaluation. The five-way row snaps `d1` to the exact tie value.
    pub fn instance(&self) -> Result<ObjectiveFixture> {
        let (s, d3, d1) = self.reconstruct()?;
        let (d1, d3) = match threshold_p(2.0, s) {
            Some(p) if (d1 - p).abs() < 1e-4 => (p, lower_pair_level(2.0, s, p).expect("d1 > b")),
            _ => (d1, d3),
        };
        Ok(ObjectiveFixture { label: self.label, r: 2.0, s, d1, d3, values: self.values, minima: self.minima })
    }
}
