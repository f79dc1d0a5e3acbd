//! Python bindings: the scenario model and the main planning operations
//! (map evaluation, GS placement, channel allocation, Monte Carlo runs)
//! driven in-process from Python.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use skyshare::coverage::{compute_grid, evaluate_at, FlyableGrid, GridSpec};
use skyshare::experiment::{run_experiment, ExperimentSpec};
use skyshare::export::{grid_to_csv, grid_to_pgm};
use skyshare::geometry::Position3D;
use skyshare::link::ChannelAssignment;
use skyshare::planner::{
    allocate_channels, cross_subarea_channel_check, optimize_gs, partition_area,
    PartitionStrategy,
};
use skyshare::propagation::ChannelId;
use skyshare::scenario::{
    generate_routers, ChannelMixEntry, Mode, RouterTemplate, Scenario as CoreScenario,
    ScenarioError,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scenario_err(e: ScenarioError) -> PyErr {
    match e {
        ScenarioError::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "proposed" => Ok(Mode::Proposed),
        "conventional" => Ok(Mode::Conventional),
        other => Err(PyValueError::new_err(format!(
            "unknown mode `{other}` (expected proposed|conventional)"
        ))),
    }
}

fn parse_strategy(strategy: &str) -> PyResult<PartitionStrategy> {
    match strategy {
        "strips" => Ok(PartitionStrategy::Strips),
        "sectors" => Ok(PartitionStrategy::Sectors),
        other => Err(PyValueError::new_err(format!(
            "unknown strategy `{other}` (expected strips|sectors)"
        ))),
    }
}

fn parse_mix(mix: &[String]) -> PyResult<Vec<ChannelMixEntry>> {
    mix.iter()
        .map(|m| match m.as_str() {
            "co_channel" => Ok(ChannelMixEntry::CoChannel),
            "adjacent" => Ok(ChannelMixEntry::Adjacent),
            "next_adjacent" => Ok(ChannelMixEntry::NextAdjacent),
            other => Err(PyValueError::new_err(format!(
                "unknown mix entry `{other}` (expected co_channel|adjacent|next_adjacent)"
            ))),
        })
        .collect()
}

/// A validated scenario document.
#[pyclass(name = "Scenario")]
#[derive(Clone)]
struct PyScenario {
    inner: CoreScenario,
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(json: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoreScenario::from_json(json).map_err(scenario_err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CoreScenario::from_file(path).map_err(scenario_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_pretty()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode {
            Mode::Proposed => "proposed",
            Mode::Conventional => "conventional",
        }
    }

    /// Copy of the scenario with the given operating mode.
    fn with_mode(&self, mode: &str) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_mode(parse_mode(mode)?),
        })
    }

    /// Copy with a seeded random router arrangement replacing the router
    /// list (positions uniform over the bounds, channels per the mix
    /// relative to the primary uplink).
    #[pyo3(signature = (seed, mix, height_m = 1.5, tx_power_dbm = 20.0))]
    fn with_generated_routers(
        &self,
        seed: u64,
        mix: Vec<String>,
        height_m: f64,
        tx_power_dbm: f64,
    ) -> PyResult<Self> {
        let template = RouterTemplate {
            count: mix.len(),
            channel_mix: parse_mix(&mix)?,
            height_m,
            tx_power_dbm,
            antenna_gain_dbi: 0.0,
        };
        let routers = generate_routers(
            seed,
            &self.inner.bounds,
            &template,
            self.inner.uavs[0].uplink,
        )
        .map_err(scenario_err)?;
        let s = self.inner.with_routers(routers);
        s.validate().map_err(scenario_err)?;
        Ok(Self { inner: s })
    }

    #[getter]
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let b = &self.inner.bounds;
        (b.x_min, b.x_max, b.y_min, b.y_max)
    }

    #[getter]
    fn router_count(&self) -> usize {
        self.inner.routers.len()
    }

    #[getter]
    fn gs_position(&self) -> (f64, f64, f64) {
        let p = self.inner.gs.position;
        (p.x, p.y, p.z)
    }

    #[getter]
    fn uav_altitude_m(&self) -> f64 {
        self.inner.uav_altitude_m
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(mode={}, routers={}, bounds=({}, {}, {}, {}))",
            self.mode(),
            self.inner.routers.len(),
            self.inner.bounds.x_min,
            self.inner.bounds.x_max,
            self.inner.bounds.y_min,
            self.inner.bounds.y_max,
        )
    }
}

/// Flyable-area map over a grid of UAV positions.
#[pyclass(name = "FlyableMap")]
struct PyFlyableMap {
    inner: FlyableGrid,
}

#[pymethods]
impl PyFlyableMap {
    #[getter]
    fn flyable_ratio(&self) -> f64 {
        self.inner.flyable_ratio
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.spec.nx()
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.spec.ny()
    }

    #[getter]
    fn pass_count(&self) -> usize {
        self.inner.pass_count()
    }

    /// Row-major pass flags (y slowest, x fastest).
    fn passes(&self) -> Vec<bool> {
        self.inner.records.iter().map(|r| r.pass).collect()
    }

    /// Row-major worst margins in dB.
    fn worst_margins_db(&self) -> Vec<f64> {
        self.inner.records.iter().map(|r| r.worst_margin_db).collect()
    }

    fn to_csv(&self) -> String {
        grid_to_csv(&self.inner)
    }

    fn to_pgm<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new_bound(py, &grid_to_pgm(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "FlyableMap({}x{}, flyable_ratio={:.4})",
            self.inner.spec.nx(),
            self.inner.spec.ny(),
            self.inner.flyable_ratio
        )
    }
}

/// Outcome of the exhaustive GS search.
#[pyclass(name = "Placement")]
struct PyPlacement {
    #[pyo3(get)]
    x: f64,
    #[pyo3(get)]
    y: f64,
    #[pyo3(get)]
    flyable_ratio: f64,
    #[pyo3(get)]
    candidate_count: usize,
}

#[pymethods]
impl PyPlacement {
    fn __repr__(&self) -> String {
        format!(
            "Placement(x={}, y={}, flyable_ratio={:.4})",
            self.x, self.y, self.flyable_ratio
        )
    }
}

/// Multi-UAV channel plan.
#[pyclass(name = "Allocation")]
struct PyAllocation {
    #[pyo3(get)]
    pairs: Vec<(u8, u8)>,
    #[pyo3(get)]
    combined_ratio: f64,
    #[pyo3(get)]
    any_infeasible: bool,
    #[pyo3(get)]
    conflicts: usize,
}

#[pymethods]
impl PyAllocation {
    fn __repr__(&self) -> String {
        format!(
            "Allocation(pairs={:?}, combined_ratio={:.4})",
            self.pairs, self.combined_ratio
        )
    }
}

fn grid_for(scenario: &CoreScenario, resolution: f64, altitude: Option<f64>) -> PyResult<GridSpec> {
    GridSpec::new(
        scenario.bounds,
        resolution,
        altitude.unwrap_or(scenario.uav_altitude_m),
    )
    .map_err(value_err)
}

/// Flyable-area map for one GS placement (default: the scenario GS).
#[pyfunction]
#[pyo3(signature = (scenario, resolution = 10.0, altitude = None, gs = None))]
fn evaluate(
    scenario: &PyScenario,
    resolution: f64,
    altitude: Option<f64>,
    gs: Option<(f64, f64)>,
) -> PyResult<PyFlyableMap> {
    let s = &scenario.inner;
    let grid = grid_for(s, resolution, altitude)?;
    let gs_position = match gs {
        Some((x, y)) => Position3D { x, y, z: s.gs.position.z },
        None => s.gs.position,
    };
    let map = compute_grid(
        &s.uav_node(0).map_err(value_err)?,
        &s.gs_node_at(gs_position).map_err(value_err)?,
        &s.router_nodes().map_err(value_err)?,
        &s.models().map_err(scenario_err)?,
        &s.thresholds,
        &grid,
    )
    .map_err(value_err)?;
    Ok(PyFlyableMap { inner: map })
}

/// The sharing-condition SINRs at a single UAV position, as a dict with
/// keys uplink_db, downlink_db, terrestrial_db, pass, worst_margin_db,
/// binding.
#[pyfunction]
#[pyo3(signature = (scenario, uav_xyz, gs = None))]
fn link_sinr(
    py: Python<'_>,
    scenario: &PyScenario,
    uav_xyz: (f64, f64, f64),
    gs: Option<(f64, f64)>,
) -> PyResult<PyObject> {
    let s = &scenario.inner;
    let gs_position = match gs {
        Some((x, y)) => Position3D { x, y, z: s.gs.position.z },
        None => s.gs.position,
    };
    let eval = evaluate_at(
        &s.uav_node(0).map_err(value_err)?,
        &s.gs_node_at(gs_position).map_err(value_err)?,
        &s.router_nodes().map_err(value_err)?,
        &s.models().map_err(scenario_err)?,
        &s.thresholds,
        &Position3D { x: uav_xyz.0, y: uav_xyz.1, z: uav_xyz.2 },
    )
    .map_err(value_err)?;
    let dict = pyo3::types::PyDict::new_bound(py);
    dict.set_item("uplink_db", eval.sinr.uplink_db)?;
    dict.set_item("downlink_db", eval.sinr.downlink_db)?;
    dict.set_item("terrestrial_db", eval.sinr.terrestrial_db.clone())?;
    dict.set_item("pass", eval.report.pass)?;
    dict.set_item("worst_margin_db", eval.report.worst_margin_db)?;
    dict.set_item("binding", eval.report.binding.as_str())?;
    Ok(dict.into())
}

/// Exhaustive GS placement search.
#[pyfunction(name = "optimize_gs")]
#[pyo3(signature = (scenario, candidate_resolution = 50.0, resolution = 10.0, altitude = None))]
fn optimize_gs_py(
    scenario: &PyScenario,
    candidate_resolution: f64,
    resolution: f64,
    altitude: Option<f64>,
) -> PyResult<PyPlacement> {
    let s = &scenario.inner;
    let grid = grid_for(s, resolution, altitude)?;
    let placement = optimize_gs(s, candidate_resolution, &grid).map_err(value_err)?;
    Ok(PyPlacement {
        x: placement.best_position.x,
        y: placement.best_position.y,
        flyable_ratio: placement.best_ratio,
        candidate_count: placement.candidates.len(),
    })
}

/// Partition the area and allocate a channel pair per sub-area.
#[pyfunction]
#[pyo3(signature = (scenario, uavs, strategy = "strips", resolution = 10.0, altitude = None, gs = None))]
fn allocate(
    scenario: &PyScenario,
    uavs: usize,
    strategy: &str,
    resolution: f64,
    altitude: Option<f64>,
    gs: Option<(f64, f64)>,
) -> PyResult<PyAllocation> {
    let s = &scenario.inner;
    let grid = grid_for(s, resolution, altitude)?;
    let gs_xy = gs.unwrap_or_else(|| s.bounds.center());
    let gs_position = Position3D { x: gs_xy.0, y: gs_xy.1, z: s.gs.position.z };
    let parts = partition_area(uavs, parse_strategy(strategy)?, gs_xy, &grid).map_err(value_err)?;
    let plan = allocate_channels(s, gs_position, &parts, &grid).map_err(value_err)?;
    let conflicts = cross_subarea_channel_check(&plan).len();
    Ok(PyAllocation {
        pairs: plan.sub_areas.iter().map(|a| (a.uplink, a.downlink)).collect(),
        combined_ratio: plan.combined_ratio,
        any_infeasible: plan.any_infeasible,
        conflicts,
    })
}

/// Whole-area flyable ratio of one fixed channel pair (helper for
/// dominance comparisons from Python).
#[pyfunction]
#[pyo3(signature = (scenario, uplink, downlink, resolution = 10.0, altitude = None, gs = None))]
fn fixed_pair_ratio(
    scenario: &PyScenario,
    uplink: u8,
    downlink: u8,
    resolution: f64,
    altitude: Option<f64>,
    gs: Option<(f64, f64)>,
) -> PyResult<f64> {
    let s = &scenario.inner;
    let grid = grid_for(s, resolution, altitude)?;
    let gs_position = match gs {
        Some((x, y)) => Position3D { x, y, z: s.gs.position.z },
        None => s.gs.position,
    };
    let mut uav = s.uav_node(0).map_err(value_err)?;
    uav.channels = ChannelAssignment::Pair {
        uplink: ChannelId::new(uplink).map_err(value_err)?,
        downlink: ChannelId::new(downlink).map_err(value_err)?,
    };
    skyshare::coverage::flyable_ratio(
        &uav,
        &s.gs_node_at(gs_position).map_err(value_err)?,
        &s.router_nodes().map_err(value_err)?,
        &s.models().map_err(scenario_err)?,
        &s.thresholds,
        &grid,
    )
    .map_err(value_err)
}

/// Run a Monte Carlo experiment document (JSON in, results JSON out).
#[pyfunction]
fn run_experiment_json(json: &str) -> PyResult<String> {
    let spec = ExperimentSpec::from_json(json).map_err(value_err)?;
    let results = run_experiment(&spec).map_err(value_err)?;
    serde_json::to_string_pretty(&results).map_err(value_err)
}

/// Per-trial seed derivation (SHA-256 based), exposed for replaying
/// individual trials.
#[pyfunction]
fn trial_seed(master_seed: u64, trial: u32) -> u64 {
    skyshare::experiment::trial_seed(master_seed, trial)
}

#[pymodule]
fn skyshare_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyFlyableMap>()?;
    m.add_class::<PyPlacement>()?;
    m.add_class::<PyAllocation>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(link_sinr, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_gs_py, m)?)?;
    m.add_function(wrap_pyfunction!(allocate, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_pair_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment_json, m)?)?;
    m.add_function(wrap_pyfunction!(trial_seed, m)?)?;
    Ok(())
}
