//! Instance files.
//!
//! Sensors come from exactly one of `sensors: [[x, y]; 3]`, `canonical: {r, s}` or top-level
//! `r`/`s`. Ranges come from exactly one of `ranges: {d1, d2, d3}` (or a 3-array), `d: [..]`,
//! or a generator (`source` with optional `noise` and `seed`, top-level or under `generator`).

use serde::de::IgnoredAny;
use serde::Deserialize;
use trilat::geometry::canonical_sensors;
use trilat::oracle::{generate_instance, NoiseSpec};
use trilat::{Point2, SensorConfig};

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(default, rename = "name")]
    _name: Option<IgnoredAny>,
    #[serde(default, rename = "comment")]
    _comment: Option<IgnoredAny>,
    sensors: Option<[[f64; 2]; 3]>,
    canonical: Option<Canonical>,
    r: Option<f64>,
    s: Option<f64>,
    ranges: Option<Ranges>,
    d: Option<[f64; 3]>,
    generator: Option<Generator>,
    source: Option<[f64; 2]>,
    noise: Option<NoiseSpec>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Canonical {
    r: f64,
    s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Ranges {
    Named { d1: f64, d2: f64, d3: f64 },
    List([f64; 3]),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Generator {
    source: [f64; 2],
    #[serde(default)]
    noise: Option<NoiseSpec>,
    #[serde(default)]
    seed: Option<u64>,
}

fn invalid(e: trilat::Error) -> CliError {
    CliError { code: crate::error::EXIT_SCHEMA, ..e.into() }
}

/// Parses an instance document. `seed` overrides the generator seed.
pub fn parse_instance(text: &str, seed: Option<u64>) -> CliResult<SensorConfig<f64>> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
    let top_level_rs = raw.r.is_some() || raw.s.is_some();
    let sensor_groups = [raw.sensors.is_some(), raw.canonical.is_some(), top_level_rs];
    let sensors = match sensor_groups.iter().filter(|x| **x).count() {
        1 => {
            if let Some(z) = raw.sensors {
                z.map(|[x, y]| Point2::new(x, y))
            } else {
                let (r, s) = match (&raw.canonical, raw.r, raw.s) {
                    (Some(c), _, _) => (c.r, c.s),
                    (None, Some(r), Some(s)) => (r, s),
                    _ => return Err(CliError::schema("canonical layout needs both r and s")),
                };
                if !(r > 0.0 && s > 0.0 && r.is_finite() && s.is_finite()) {
                    return Err(CliError::schema("canonical r and s must be positive and finite"));
                }
                canonical_sensors(r, s)
            }
        }
        0 => return Err(CliError::schema("missing sensors: give `sensors`, `canonical` or `r`/`s`")),
        _ => return Err(CliError::schema("give exactly one of `sensors`, `canonical` or `r`/`s`")),
    };

    let top_level_gen = raw.source.is_some() || raw.noise.is_some() || raw.seed.is_some();
    let range_groups = [raw.ranges.is_some(), raw.d.is_some(), raw.generator.is_some(), top_level_gen];
    let config = match range_groups.iter().filter(|x| **x).count() {
        1 => {
            if let Some(r) = raw.ranges {
                let d = match r {
                    Ranges::Named { d1, d2, d3 } => [d1, d2, d3],
                    Ranges::List(d) => d,
                };
                SensorConfig::new(sensors, d).map_err(invalid)?
            } else if let Some(d) = raw.d {
                SensorConfig::new(sensors, d).map_err(invalid)?
            } else {
                let g = match raw.generator {
                    Some(g) => g,
                    None => Generator {
                        source: raw.source.ok_or_else(|| CliError::schema("generator needs `source`"))?,
                        noise: raw.noise,
                        seed: raw.seed,
                    },
                };
                let noise = g.noise.unwrap_or(NoiseSpec::None);
                let seed = seed.or(g.seed).unwrap_or(0);
                generate_instance(Point2::new(g.source[0], g.source[1]), sensors, noise, seed)?
            }
        }
        0 => return Err(CliError::schema("missing ranges: give `ranges`, `d` or a generator")),
        _ => return Err(CliError::schema("give exactly one of `ranges`, `d` or a generator")),
    };
    Ok(config)
}

/// Reads an instance from a path, `-` meaning standard input.
pub fn read_instance(path: &str, seed: Option<u64>) -> CliResult<SensorConfig<f64>> {
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::io(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))?
    };
    parse_instance(&text, seed)
}
