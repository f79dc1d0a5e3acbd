//! Command-line front end for the skyshare planning engine.
//!
//! Results go to files and standard output; progress notes go to standard
//! error. Exit codes: 0 success, 2 usage error, 3 validation error, 4 IO
//! error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use skyshare::coverage::{compute_grid, CoverageError, GridSpec};
use skyshare::experiment::{run_experiment, ExperimentError, ExperimentSpec};
use skyshare::export::{
    csv_to_pgm, grid_to_csv, grid_to_pgm, to_json_pretty, trials_to_csv, write_file,
    AllocationSummary, EvaluateSummary, ExperimentSummary, ExportError, PlacementSummary,
};
use skyshare::geometry::Position3D;
use skyshare::planner::{
    allocate_channels, cross_subarea_channel_check, optimize_gs, partition_area, PartitionStrategy,
    PlannerError,
};
use skyshare::scenario::{Mode, Scenario, ScenarioError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_VALIDATION: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<CoverageError> for CliError {
    fn from(e: CoverageError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PlannerError> for CliError {
    fn from(e: PlannerError) -> Self {
        match e {
            PlannerError::Scenario(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Scenario(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// X,Y pair in metres, e.g. `--gs 500,500`.
#[derive(Debug, Clone, Copy)]
struct Xy {
    x: f64,
    y: f64,
}

impl FromStr for Xy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| format!("expected X,Y in metres, got `{s}`"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coordinate `{v}`: {e}"))
        };
        Ok(Xy { x: parse(x)?, y: parse(y)? })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Proposed,
    Conventional,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Proposed => Mode::Proposed,
            ModeArg::Conventional => Mode::Conventional,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Strips,
    Sectors,
}

impl From<StrategyArg> for PartitionStrategy {
    fn from(s: StrategyArg) -> PartitionStrategy {
        match s {
            StrategyArg::Strips => PartitionStrategy::Strips,
            StrategyArg::Sectors => PartitionStrategy::Sectors,
        }
    }
}

/// Shared scenario/grid flags. Flags override scenario fields which
/// override built-in defaults; the effective values are echoed in every
/// JSON summary.
#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario JSON document.
    #[arg(long)]
    scenario: PathBuf,
    /// Grid resolution in metres.
    #[arg(long, default_value_t = 10.0)]
    resolution: f64,
    /// UAV altitude in metres (default: scenario value).
    #[arg(long)]
    altitude: Option<f64>,
    /// Override the scenario operating mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Parser, Debug)]
#[command(
    name = "skyshare",
    version,
    about = "Plan UAV spectrum sharing with terrestrial WLAN: flyable-area maps, GS placement, and channel allocation"
)]
struct Cli {
    /// Worker threads for grid evaluation (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the flyable-area map for one GS placement.
    Evaluate {
        #[command(flatten)]
        common: ScenarioArgs,
        /// GS position as X,Y in metres (default: scenario GS position).
        #[arg(long)]
        gs: Option<Xy>,
    },
    /// Exhaustive GS placement search.
    OptimizeGs {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Candidate lattice spacing in metres.
        #[arg(long, default_value_t = 50.0)]
        candidate_resolution: f64,
    },
    /// Partition the area for multiple UAVs and allocate channel pairs.
    Allocate {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Number of UAVs (one per sub-area).
        #[arg(long)]
        uavs: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Strips)]
        strategy: StrategyArg,
        /// GS position as X,Y in metres (default: area centre).
        #[arg(long)]
        gs: Option<Xy>,
    },
    /// Seeded multi-trial experiment over random router arrangements.
    MonteCarlo {
        /// Experiment JSON document.
        #[arg(long)]
        experiment: PathBuf,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<u32>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-render a map CSV to a PGM raster without recomputation.
    Render {
        /// Map CSV produced by evaluate/optimize-gs/allocate.
        #[arg(long)]
        input: PathBuf,
        /// Output PGM path.
        #[arg(long)]
        output: PathBuf,
    },
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_scenario(path: &Path, mode: Option<ModeArg>) -> Result<Scenario, CliError> {
    let text = read_to_string(path)?;
    let mut scenario = Scenario::from_json(&text)?;
    if let Some(m) = mode {
        scenario.mode = m.into();
    }
    Ok(scenario)
}

fn build_grid(scenario: &Scenario, common: &ScenarioArgs) -> Result<GridSpec, CliError> {
    let altitude = common.altitude.unwrap_or(scenario.uav_altitude_m);
    Ok(GridSpec::new(scenario.bounds, common.resolution, altitude)?)
}

fn write_map(out: &Path, grid: &skyshare::coverage::FlyableGrid) -> Result<(), CliError> {
    write_file(out.join("map.csv"), grid_to_csv(grid).as_bytes())?;
    write_file(out.join("map.pgm"), &grid_to_pgm(grid))?;
    Ok(())
}

fn validation(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        // A cap, not a guarantee: keep going if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match cli.command {
        Command::Evaluate { common, gs } => {
            let scenario = load_scenario(&common.scenario, common.mode)?;
            let grid = build_grid(&scenario, &common)?;
            let gs_position = match gs {
                Some(xy) => Position3D { x: xy.x, y: xy.y, z: scenario.gs.position.z },
                None => scenario.gs.position,
            };
            eprintln!(
                "evaluating {} x {} grid at {} m altitude",
                grid.nx(),
                grid.ny(),
                grid.altitude_m
            );
            let map = compute_grid(
                &scenario.uav_node(0).map_err(validation)?,
                &scenario.gs_node_at(gs_position).map_err(validation)?,
                &scenario.router_nodes().map_err(validation)?,
                &scenario.models()?,
                &scenario.thresholds,
                &grid,
            )?;
            write_map(&common.out, &map)?;
            let summary = EvaluateSummary::new(&map, gs_position, &scenario);
            write_file(common.out.join("summary.json"), to_json_pretty(&summary).as_bytes())?;
            println!("{:.6}", map.flyable_ratio);
            Ok(())
        }
        Command::OptimizeGs { common, candidate_resolution } => {
            let scenario = load_scenario(&common.scenario, common.mode)?;
            let grid = build_grid(&scenario, &common)?;
            eprintln!(
                "searching GS placements every {candidate_resolution} m over {} x {} grid",
                grid.nx(),
                grid.ny()
            );
            let placement = optimize_gs(&scenario, candidate_resolution, &grid)?;
            let map = compute_grid(
                &scenario.uav_node(0).map_err(validation)?,
                &scenario.gs_node_at(placement.best_position).map_err(validation)?,
                &scenario.router_nodes().map_err(validation)?,
                &scenario.models()?,
                &scenario.thresholds,
                &grid,
            )?;
            write_map(&common.out, &map)?;
            let summary = PlacementSummary::new(&placement, grid, &scenario);
            write_file(common.out.join("placement.json"), to_json_pretty(&summary).as_bytes())?;
            println!(
                "{:.3},{:.3} {:.6}",
                placement.best_position.x, placement.best_position.y, placement.best_ratio
            );
            Ok(())
        }
        Command::Allocate { common, uavs, strategy, gs } => {
            let scenario = load_scenario(&common.scenario, common.mode)?;
            let grid = build_grid(&scenario, &common)?;
            let center = scenario.bounds.center();
            let gs_xy = gs.map(|g| (g.x, g.y)).unwrap_or(center);
            let gs_position = Position3D { x: gs_xy.0, y: gs_xy.1, z: scenario.gs.position.z };
            eprintln!("allocating channel pairs for {uavs} UAVs ({strategy:?})");
            let parts = partition_area(uavs, strategy.into(), gs_xy, &grid)?;
            let plan = allocate_channels(&scenario, gs_position, &parts, &grid)?;
            if plan.any_infeasible {
                eprintln!("warning: at least one sub-area has no feasible channel pair");
            }
            let conflicts = cross_subarea_channel_check(&plan);
            write_map(&common.out, &plan.combined_grid)?;
            let summary = AllocationSummary::new(&plan, conflicts, gs_position, &scenario);
            write_file(common.out.join("allocation.json"), to_json_pretty(&summary).as_bytes())?;
            println!("{:.6}", plan.combined_ratio);
            Ok(())
        }
        Command::MonteCarlo { experiment, trials, seed, out } => {
            let text = read_to_string(&experiment)?;
            let mut spec = ExperimentSpec::from_json(&text)?;
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            eprintln!("running {} trials from seed {}", spec.trials, spec.seed);
            let results = run_experiment(&spec)?;
            write_file(out.join("trials.csv"), trials_to_csv(&results).as_bytes())?;
            let summary = ExperimentSummary::new(&results, &spec);
            write_file(out.join("experiment.json"), to_json_pretty(&summary).as_bytes())?;
            println!("{:.6}", results.optimized.mean);
            Ok(())
        }
        Command::Render { input, output } => {
            let csv = read_to_string(&input)?;
            let pgm = csv_to_pgm(&csv)?;
            write_file(&output, &pgm)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
