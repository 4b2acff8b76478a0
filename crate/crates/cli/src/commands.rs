use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use trilat::fixtures::{equilateral_fixtures, isosceles_fixtures, lower_pair_fixtures, ObjectiveFixture};
use trilat::oracle::{brute_force_minimize, contour_grid, objective_table, GridSpec, OracleResult};
use trilat::thresholds::ThresholdDistance;
use trilat::{isosceles_view, solve, Derivation, SensorConfig, SolveOptions, ThresholdBundle};

use crate::error::{CliError, CliResult};
use crate::report::{compare_with_oracle, detect_shape, SolveReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Stored reference layouts reproduced by `table`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableName {
    /// Equilateral layout, side 2 (6 rows).
    Equilateral,
    /// Flat and sharp isosceles layouts on base 2 (15 rows).
    Isosceles,
    /// `d1 = d2`, `d3^2 = d1^2 - |Z1 Z3|^2`, inputs recovered from objective values (4 rows).
    LowerPair,
}

/// Oracle schedule used by `oracle` and `solve --oracle-check`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSettings {
    pub resolution: usize,
    pub rounds: usize,
    pub factor: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings { resolution: 256, rounds: 4, factor: 4.0 }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::io(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::io(e.to_string()))
}

fn json_text<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::io(e.to_string()))
}

pub fn run_oracle(config: &SensorConfig<f64>, settings: OracleSettings) -> CliResult<OracleResult<f64>> {
    let spec = GridSpec::auto(config, settings.resolution, settings.rounds, settings.factor);
    Ok(brute_force_minimize(config, &spec)?)
}

pub fn solve_report(
    config: &SensorConfig<f64>,
    opts: &SolveOptions<f64>,
    oracle: Option<OracleSettings>,
) -> CliResult<SolveReport> {
    let set = solve(config, opts)?;
    let mut report = SolveReport::new(detect_shape(config, opts.shape_tol)?, &set);
    if let Some(settings) = oracle {
        let res = run_oracle(config, settings)?;
        report.oracle_agreement = Some(compare_with_oracle(config, &set, &res));
    }
    Ok(report)
}

pub fn cmd_solve(
    config: &SensorConfig<f64>,
    opts: &SolveOptions<f64>,
    oracle: Option<OracleSettings>,
    format: Format,
) -> CliResult<String> {
    let report = solve_report(config, opts, oracle)?;
    match format {
        Format::Json => json_text(&report),
        Format::Csv => csv_text(
            &["x", "y", "role", "objective", "multiplicity", "derivation"],
            report.solutions.iter().map(|p| {
                vec![
                    p.x.to_string(),
                    p.y.to_string(),
                    p.role.clone(),
                    report.objective.to_string(),
                    report.multiplicity.to_string(),
                    report.derivation.to_string(),
                ]
            }),
        ),
    }
}

/// One regenerated reference row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub row: String,
    pub s: f64,
    pub d1: f64,
    pub d3: f64,
    /// Objective at `S12+, S12-, S23+, S23-, S31+, S31-`.
    pub values: [f64; 6],
    pub minima: [bool; 6],
}

pub const TABLE_COLUMNS: [&str; 6] = ["O(S12+)", "O(S12-)", "O(S23+)", "O(S23-)", "O(S31+)", "O(S31-)"];

pub fn table_fixtures(name: TableName) -> CliResult<Vec<ObjectiveFixture>> {
    Ok(match name {
        TableName::Equilateral => equilateral_fixtures(),
        TableName::Isosceles => isosceles_fixtures()?,
        TableName::LowerPair => lower_pair_fixtures().iter().map(|f| f.instance()).collect::<trilat::Result<_>>()?,
    })
}

pub fn table_rows(name: TableName) -> CliResult<Vec<TableRow>> {
    table_fixtures(name)?
        .iter()
        .map(|f| {
            let config = SensorConfig::canonical(f.r, f.s, [f.d1, f.d1, f.d3])?;
            let t = objective_table(&config)?;
            Ok(TableRow {
                row: f.label.to_string(),
                s: f.s,
                d1: f.d1,
                d3: f.d3,
                values: t.map(|v| v.value),
                minima: t.map(|v| v.is_min),
            })
        })
        .collect()
}

pub fn cmd_table(name: TableName, format: Format) -> CliResult<String> {
    let rows = table_rows(name)?;
    match format {
        Format::Json => json_text(&rows),
        Format::Csv => {
            let mut header = vec!["row", "s", "d1", "d3"];
            header.extend(TABLE_COLUMNS);
            header.push("minima");
            csv_text(
                &header,
                rows.iter().map(|r| {
                    let mut out = vec![r.row.clone(), format!("{:.4}", r.s), format!("{:.4}", r.d1), format!("{:.4}", r.d3)];
                    out.extend(r.values.iter().map(|v| format!("{v:.4}")));
                    let minima: Vec<&str> =
                        TABLE_COLUMNS.iter().zip(r.minima).filter(|(_, m)| *m).map(|(c, _)| &c[2..c.len() - 1]).collect();
                    out.push(minima.join("|"));
                    out
                }),
            )
        }
    }
}

/// Closed interval `[lo, hi]` sampled at `steps` evenly spaced points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub fn at(&self, i: usize, steps: usize) -> f64 {
        if steps <= 1 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (steps - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub d1: f64,
    pub d3: f64,
    pub multiplicity: usize,
    pub derivation: Derivation,
}

/// Classifies every `(d1, d3)` node of a `steps x steps` grid on the canonical layout `(r, s)`.
/// Rows are ordered by `d1`, then `d3`.
pub fn sweep(r: f64, s: f64, d1: Span, d3: Span, steps: usize, opts: &SolveOptions<f64>) -> CliResult<Vec<SweepCell>> {
    if !(r > 0.0 && s > 0.0) || [d1.lo, d1.hi, d3.lo, d3.hi].iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(CliError::usage("sweep needs r, s > 0 and positive finite ranges"));
    }
    if steps == 0 {
        return Err(CliError::usage("sweep needs at least one step"));
    }
    let rows: Vec<CliResult<Vec<SweepCell>>> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let a = d1.at(i, steps);
            (0..steps)
                .map(|j| {
                    let b = d3.at(j, steps);
                    let set = solve(&SensorConfig::canonical(r, s, [a, a, b])?, opts)?;
                    Ok(SweepCell { d1: a, d3: b, multiplicity: set.multiplicity, derivation: set.derivation })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(steps * steps);
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

pub fn cmd_sweep(r: f64, s: f64, d1: Span, d3: Span, steps: usize, opts: &SolveOptions<f64>, format: Format) -> CliResult<String> {
    let cells = sweep(r, s, d1, d3, steps, opts)?;
    match format {
        Format::Json => json_text(&cells),
        Format::Csv => csv_text(
            &["d1", "d3", "multiplicity", "derivation"],
            cells
                .iter()
                .map(|c| vec![c.d1.to_string(), c.d3.to_string(), c.multiplicity.to_string(), c.derivation.to_string()]),
        ),
    }
}

pub fn cmd_contour(config: &SensorConfig<f64>, resolution: usize, format: Format) -> CliResult<String> {
    if resolution < 2 {
        return Err(CliError::usage("contour resolution must be at least 2"));
    }
    let grid = contour_grid(config, resolution, None);
    match format {
        Format::Json => json_text(&grid),
        Format::Csv => csv_text(
            &["x", "y", "O"],
            grid.points().map(|(x, y, v)| vec![x.to_string(), y.to_string(), v.to_string()]),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub schema: String,
    /// Sensor placed at the apex, 1-based.
    pub apex: usize,
    pub bundle: ThresholdBundle<f64>,
    pub distances: Vec<ThresholdDistance<f64>>,
    pub nearest_distance: f64,
}

pub fn thresholds(config: &SensorConfig<f64>, opts: &SolveOptions<f64>) -> CliResult<ThresholdReport> {
    let view = isosceles_view(config, opts)?.ok_or_else(|| {
        CliError::from(trilat::Error::PreconditionViolation(
            "thresholds need an isosceles layout with equal base ranges".into(),
        ))
    })?;
    let bundle = ThresholdBundle::compute(view.frame.r, view.frame.s, view.d1, view.d3);
    Ok(ThresholdReport {
        schema: crate::SCHEMA.to_string(),
        apex: view.perm[2] + 1,
        distances: bundle.signed_distances(),
        nearest_distance: bundle.nearest_distance(),
        bundle,
    })
}

pub fn cmd_thresholds(config: &SensorConfig<f64>, opts: &SolveOptions<f64>, format: Format) -> CliResult<String> {
    let report = thresholds(config, opts)?;
    match format {
        Format::Json => json_text(&report),
        Format::Csv => csv_text(
            &["name", "variable", "threshold", "signed_distance"],
            report.distances.iter().map(|t| {
                vec![t.name.clone(), t.variable.clone(), t.threshold.to_string(), t.signed_distance.to_string()]
            }),
        ),
    }
}

pub fn cmd_oracle(config: &SensorConfig<f64>, settings: OracleSettings, format: Format) -> CliResult<String> {
    let res = run_oracle(config, settings)?;
    match format {
        Format::Json => json_text(&res),
        Format::Csv => csv_text(
            &["x", "y", "O"],
            res.minima.iter().map(|m| vec![m.location.x.to_string(), m.location.y.to_string(), m.value.to_string()]),
        ),
    }
}
