//! Result export: grid maps as CSV and binary PGM rasters, experiment
//! trials as CSV, and JSON summaries carrying a full parameter echo.
//!
//! All writers are deterministic: identical inputs produce byte-identical
//! files.

use crate::coverage::{FlyableGrid, GridSpec};
use crate::experiment::{ExperimentResults, ExperimentSpec};
use crate::geometry::Position3D;
use crate::link::BindingCondition;
use crate::planner::{AllocationPlan, ChannelConflict, PlacementResult};
use crate::scenario::Scenario;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed map CSV: {0}")]
    MalformedCsv(String),
}

pub const CSV_HEADER: &str = "x,y,pass,worst_margin_db,binding_condition";

/// Gray levels of the PGM raster: flyable points are white, interference
/// zones are banded by their binding condition.
pub const PGM_PASS: u8 = 255;
pub const PGM_FAIL_UPLINK: u8 = 64;
pub const PGM_FAIL_DOWNLINK: u8 = 128;
pub const PGM_FAIL_TERRESTRIAL: u8 = 192;

fn shade(pass: bool, binding: BindingCondition) -> u8 {
    if pass {
        PGM_PASS
    } else {
        match binding {
            BindingCondition::Uplink => PGM_FAIL_UPLINK,
            BindingCondition::Downlink => PGM_FAIL_DOWNLINK,
            BindingCondition::Terrestrial => PGM_FAIL_TERRESTRIAL,
        }
    }
}

/// One row per grid point, `x,y,pass,worst_margin_db,binding_condition`,
/// y ascending then x ascending, margins fixed to six decimals.
pub fn grid_to_csv(grid: &FlyableGrid) -> String {
    let centers = grid.spec.centers();
    let mut out = String::with_capacity(grid.records.len() * 40 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (record, (x, y)) in grid.records.iter().zip(centers) {
        out.push_str(&format!(
            "{x:.3},{y:.3},{},{:.6},{}\n",
            u8::from(record.pass),
            record.worst_margin_db,
            record.binding.as_str()
        ));
    }
    out
}

/// Binary P5 graymap, one pixel per grid point, image row 0 holding the
/// northernmost (largest y) grid row so the raster reads like a map.
pub fn grid_to_pgm(grid: &FlyableGrid) -> Vec<u8> {
    let (nx, ny) = (grid.spec.nx(), grid.spec.ny());
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    for row in (0..ny).rev() {
        for col in 0..nx {
            let r = &grid.records[row * nx + col];
            out.push(shade(r.pass, r.binding));
        }
    }
    out
}

/// Rebuild the PGM raster from a map CSV without recomputation; for CSV
/// produced by [`grid_to_csv`] the output is byte-identical to
/// [`grid_to_pgm`] on the original grid.
pub fn csv_to_pgm(csv: &str) -> Result<Vec<u8>, ExportError> {
    let mut lines = csv.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(ExportError::MalformedCsv(format!(
                "expected header `{CSV_HEADER}`, got {other:?}"
            )))
        }
    }
    struct Row {
        x: f64,
        y: f64,
        pass: bool,
        binding: BindingCondition,
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(ExportError::MalformedCsv(format!(
                "row {}: expected 5 fields, got {}",
                i + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str, what: &str| {
            s.parse::<f64>().map_err(|e| {
                ExportError::MalformedCsv(format!("row {}: bad {what} `{s}`: {e}", i + 2))
            })
        };
        let x = parse_f(fields[0], "x")?;
        let y = parse_f(fields[1], "y")?;
        let pass = match fields[2] {
            "1" => true,
            "0" => false,
            other => {
                return Err(ExportError::MalformedCsv(format!(
                    "row {}: bad pass flag `{other}`",
                    i + 2
                )))
            }
        };
        let binding = match fields[4] {
            "uplink" => BindingCondition::Uplink,
            "downlink" => BindingCondition::Downlink,
            "terrestrial" => BindingCondition::Terrestrial,
            other => {
                return Err(ExportError::MalformedCsv(format!(
                    "row {}: bad binding condition `{other}`",
                    i + 2
                )))
            }
        };
        rows.push(Row { x, y, pass, binding });
    }
    if rows.is_empty() {
        return Err(ExportError::MalformedCsv("no data rows".into()));
    }

    let mut xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let mut ys: Vec<f64> = rows.iter().map(|r| r.y).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    let (nx, ny) = (xs.len(), ys.len());
    if nx * ny != rows.len() {
        return Err(ExportError::MalformedCsv(format!(
            "{} rows do not fill a {nx} x {ny} grid",
            rows.len()
        )));
    }
    let col_of = |v: f64, axis: &[f64]| axis.binary_search_by(|p| p.partial_cmp(&v).unwrap()).ok();
    let mut pixels = vec![0u8; nx * ny];
    for r in &rows {
        let col = col_of(r.x, &xs)
            .ok_or_else(|| ExportError::MalformedCsv(format!("x {} off axis", r.x)))?;
        let row = col_of(r.y, &ys)
            .ok_or_else(|| ExportError::MalformedCsv(format!("y {} off axis", r.y)))?;
        pixels[(ny - 1 - row) * nx + col] = shade(r.pass, r.binding);
    }
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    Ok(out)
}

/// Experiment trials as CSV, one row per trial; optional series left
/// empty when the experiment did not compute them.
pub fn trials_to_csv(results: &ExperimentResults) -> String {
    let mut out = String::from(
        "trial,seed,gs_x,gs_y,ratio_optimized,ratio_center,ratio_conventional,combined_ratio,best_fixed_pair_ratio,allocation_infeasible\n",
    );
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    for t in &results.trials {
        out.push_str(&format!(
            "{},{},{:.3},{:.3},{:.6},{:.6},{},{},{},{}\n",
            t.trial,
            t.seed,
            t.gs_x,
            t.gs_y,
            t.ratio_optimized,
            t.ratio_center,
            opt(t.ratio_conventional),
            opt(t.combined_ratio),
            opt(t.best_fixed_pair_ratio),
            t.allocation_infeasible
                .map(|b| u8::from(b).to_string())
                .unwrap_or_default(),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON summaries
// ---------------------------------------------------------------------------

/// Summary of a single map evaluation; embeds the effective scenario so
/// the result is reproducible from the file alone.
#[derive(Debug, Serialize)]
pub struct EvaluateSummary<'a> {
    pub kind: &'static str,
    pub flyable_ratio: f64,
    pub pass_count: usize,
    pub point_count: usize,
    pub clamped_count: usize,
    pub gs_position: Position3D,
    pub grid: GridSpec,
    pub scenario: &'a Scenario,
}

impl<'a> EvaluateSummary<'a> {
    pub fn new(grid: &FlyableGrid, gs_position: Position3D, scenario: &'a Scenario) -> Self {
        Self {
            kind: "evaluate",
            flyable_ratio: grid.flyable_ratio,
            pass_count: grid.pass_count(),
            point_count: grid.records.len(),
            clamped_count: grid.clamped_count(),
            gs_position,
            grid: grid.spec,
            scenario,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlacementSummary<'a> {
    pub kind: &'static str,
    pub best_position: Position3D,
    pub best_ratio: f64,
    pub candidate_resolution_m: f64,
    pub candidate_count: usize,
    pub candidates: &'a [crate::planner::CandidateRatio],
    pub grid: GridSpec,
    pub scenario: &'a Scenario,
}

impl<'a> PlacementSummary<'a> {
    pub fn new(placement: &'a PlacementResult, grid: GridSpec, scenario: &'a Scenario) -> Self {
        Self {
            kind: "optimize-gs",
            best_position: placement.best_position,
            best_ratio: placement.best_ratio,
            candidate_resolution_m: placement.candidate_resolution_m,
            candidate_count: placement.candidates.len(),
            candidates: &placement.candidates,
            grid,
            scenario,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AllocationSummary<'a> {
    pub kind: &'static str,
    pub combined_ratio: f64,
    pub any_infeasible: bool,
    pub sub_areas: &'a [crate::planner::SubAreaAllocation],
    pub channel_conflicts: Vec<ChannelConflict>,
    pub gs_position: Position3D,
    pub grid: GridSpec,
    pub scenario: &'a Scenario,
}

impl<'a> AllocationSummary<'a> {
    pub fn new(
        plan: &'a AllocationPlan,
        conflicts: Vec<ChannelConflict>,
        gs_position: Position3D,
        scenario: &'a Scenario,
    ) -> Self {
        Self {
            kind: "allocate",
            combined_ratio: plan.combined_ratio,
            any_infeasible: plan.any_infeasible,
            sub_areas: &plan.sub_areas,
            channel_conflicts: conflicts,
            gs_position,
            grid: plan.combined_grid.spec,
            scenario,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExperimentSummary<'a> {
    pub kind: &'static str,
    pub results: &'a ExperimentResults,
    pub spec: &'a ExperimentSpec,
}

impl<'a> ExperimentSummary<'a> {
    pub fn new(results: &'a ExperimentResults, spec: &'a ExperimentSpec) -> Self {
        Self {
            kind: "monte-carlo",
            results,
            spec,
        }
    }
}

/// Deterministic pretty JSON: struct fields serialize in declaration
/// order, so identical values yield identical bytes.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialize");
    s.push('\n');
    s
}

pub fn write_file(path: impl AsRef<std::path::Path>, bytes: &[u8]) -> Result<(), ExportError> {
    if let Some(parent) = path.as_ref().parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}
