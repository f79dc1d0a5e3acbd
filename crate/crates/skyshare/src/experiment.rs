//! Seeded Monte Carlo harness: repeated router arrangements over the same
//! scenario, with GS optimization, an optional conventional-mode
//! comparison, and optional multi-UAV partition + channel allocation per
//! trial.

use crate::coverage::GridSpec;
use crate::planner::{
    allocate_channels, optimize_gs, partition_area, PartitionStrategy, PlannerError,
};
use crate::scenario::{generate_routers, Mode, RouterTemplate, Scenario, ScenarioError};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("experiment requires trials >= 1")]
    NoTrials,
    #[error("trial {trial} (seed {seed}) failed: {source}")]
    Trial {
        trial: u32,
        seed: u64,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

/// Multi-UAV options: how many UAVs share the area and how it is split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationOptions {
    pub uavs: usize,
    #[serde(default)]
    pub strategy: PartitionStrategy,
}

/// A complete experiment description; `scenario.routers` is ignored and
/// replaced per trial by a seeded arrangement from `router_template`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub trials: u32,
    pub seed: u64,
    pub router_template: RouterTemplate,
    #[serde(default = "default_grid_resolution")]
    pub grid_resolution_m: f64,
    #[serde(default = "default_candidate_resolution")]
    pub candidate_resolution_m: f64,
    #[serde(default)]
    pub compare_conventional: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<AllocationOptions>,
}

fn default_grid_resolution() -> f64 {
    10.0
}

fn default_candidate_resolution() -> f64 {
    50.0
}

impl ExperimentSpec {
    pub fn from_json(json: &str) -> Result<Self, ExperimentError> {
        let spec: ExperimentSpec =
            serde_json::from_str(json).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(ScenarioError::Io)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::NoTrials);
        }
        self.scenario.validate()?;
        if self.router_template.count != self.router_template.channel_mix.len() {
            return Err(ScenarioError::Validation {
                path: "router_template.channel_mix".into(),
                message: format!(
                    "mix length {} does not match count {}",
                    self.router_template.channel_mix.len(),
                    self.router_template.count
                ),
            }
            .into());
        }
        Ok(())
    }
}

/// Per-trial seed: the first eight little-endian bytes of
/// SHA-256(master_seed LE64 || trial_index LE64). Trials are therefore
/// order-independent and individually replayable.
pub fn trial_seed(master_seed: u64, trial: u32) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update((trial as u64).to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub seed: u64,
    pub gs_x: f64,
    pub gs_y: f64,
    /// Flyable ratio at the optimized GS, scenario mode as configured.
    pub ratio_optimized: f64,
    /// Flyable ratio with the GS at the area centre (same arrangement).
    pub ratio_center: f64,
    /// Optimized flyable ratio with the conventional baseline (omni
    /// antennas at the EIRP cap).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_conventional: Option<f64>,
    /// Combined ratio of the multi-UAV allocation plan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combined_ratio: Option<f64>,
    /// Whole-area ratio of the best single fixed channel pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_fixed_pair_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation_pairs: Option<Vec<(u8, u8)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation_infeasible: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl SeriesStats {
    fn over(values: impl Iterator<Item = f64>) -> Option<SeriesStats> {
        let v: Vec<f64> = values.collect();
        if v.is_empty() {
            return None;
        }
        Some(SeriesStats {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResults {
    pub trials: Vec<TrialRecord>,
    pub optimized: SeriesStats,
    pub center: SeriesStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conventional: Option<SeriesStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combined: Option<SeriesStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_fixed_pair: Option<SeriesStats>,
}

fn trial_failure(
    trial: u32,
    seed: u64,
) -> impl FnOnce(PlannerError) -> ExperimentError {
    move |e| ExperimentError::Trial {
        trial,
        seed,
        source: Box::new(e),
    }
}

/// Run every trial: generate the router arrangement from the trial seed,
/// optimize the GS, read the centre-GS baseline off the candidate lattice,
/// optionally re-optimize in conventional mode, and optionally run the
/// multi-UAV partition + allocation. Any failing trial aborts the run with
/// its index and seed for replay.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResults, ExperimentError> {
    spec.validate()?;
    let base = &spec.scenario;
    let uplink = base.uavs[0].uplink;
    let grid = GridSpec::new(base.bounds, spec.grid_resolution_m, base.uav_altitude_m)
        .map_err(|e| ScenarioError::Validation {
            path: "grid_resolution_m".into(),
            message: e.to_string(),
        })?;
    let center = base.bounds.center();

    let mut records = Vec::with_capacity(spec.trials as usize);
    for trial in 0..spec.trials {
        let seed = trial_seed(spec.seed, trial);
        let routers = generate_routers(seed, &base.bounds, &spec.router_template, uplink)?;
        let scenario = base.with_routers(routers);
        scenario.validate().map_err(|e| ExperimentError::Trial {
            trial,
            seed,
            source: Box::new(e),
        })?;

        let placement = optimize_gs(&scenario, spec.candidate_resolution_m, &grid)
            .map_err(trial_failure(trial, seed))?;
        let ratio_center = placement
            .candidates
            .iter()
            .find(|c| (c.x, c.y) == center)
            .map(|c| c.flyable_ratio)
            .expect("area centre is always a candidate");

        let ratio_conventional = if spec.compare_conventional {
            let conventional = scenario.with_mode(Mode::Conventional);
            Some(
                optimize_gs(&conventional, spec.candidate_resolution_m, &grid)
                    .map_err(trial_failure(trial, seed))?
                    .best_ratio,
            )
        } else {
            None
        };

        let (combined_ratio, best_fixed_pair_ratio, allocation_pairs, allocation_infeasible) =
            match spec.allocation {
                None => (None, None, None, None),
                Some(opts) => {
                    let gs_xy = (placement.best_position.x, placement.best_position.y);
                    let parts = partition_area(opts.uavs, opts.strategy, gs_xy, &grid)
                        .map_err(trial_failure(trial, seed))?;
                    let plan =
                        allocate_channels(&scenario, placement.best_position, &parts, &grid)
                            .map_err(trial_failure(trial, seed))?;
                    let whole = partition_area(1, PartitionStrategy::Strips, gs_xy, &grid)
                        .map_err(trial_failure(trial, seed))?;
                    let fixed =
                        allocate_channels(&scenario, placement.best_position, &whole, &grid)
                            .map_err(trial_failure(trial, seed))?;
                    let pairs = plan
                        .sub_areas
                        .iter()
                        .map(|a| (a.uplink, a.downlink))
                        .collect();
                    (
                        Some(plan.combined_ratio),
                        Some(fixed.combined_ratio),
                        Some(pairs),
                        Some(plan.any_infeasible),
                    )
                }
            };

        records.push(TrialRecord {
            trial,
            seed,
            gs_x: placement.best_position.x,
            gs_y: placement.best_position.y,
            ratio_optimized: placement.best_ratio,
            ratio_center,
            ratio_conventional,
            combined_ratio,
            best_fixed_pair_ratio,
            allocation_pairs,
            allocation_infeasible,
        });
    }

    let optimized = SeriesStats::over(records.iter().map(|r| r.ratio_optimized))
        .expect("at least one trial");
    let center = SeriesStats::over(records.iter().map(|r| r.ratio_center)).expect("trials");
    let conventional = SeriesStats::over(records.iter().filter_map(|r| r.ratio_conventional));
    let combined = SeriesStats::over(records.iter().filter_map(|r| r.combined_ratio));
    let best_fixed_pair =
        SeriesStats::over(records.iter().filter_map(|r| r.best_fixed_pair_ratio));
    Ok(ExperimentResults {
        trials: records,
        optimized,
        center,
        conventional,
        combined,
        best_fixed_pair,
    })
}
