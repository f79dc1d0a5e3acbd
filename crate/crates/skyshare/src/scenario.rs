//! Scenario schema: the full world description (area, nodes, channels,
//! thresholds, model constants), strict JSON loading with field-path
//! diagnostics, operating-mode handling, and seeded router generation.

use crate::antenna::{gs_default_pattern, uav_default_pattern, AntennaPattern};
use crate::geometry::{AreaBounds, Position3D};
use crate::link::{LinkError, LinkModels, RadioNode, SharingThresholds};
use crate::propagation::{ChannelId, NoiseModel, PathLossModel, PropagationError};
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ScenarioError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Proposed system (directional antennas, Table-style powers) or the
/// conventional baseline (omni antennas at the EIRP cap on both ends).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Proposed,
    Conventional,
}

/// Ground-station configuration. The GS exchanges traffic with every UAV,
/// receiving on each UAV's uplink channel and transmitting on its downlink
/// channel, so it carries no channel pair of its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsConfig {
    #[serde(default = "default_gs_id")]
    pub id: String,
    pub position: Position3D,
    #[serde(default = "default_gs_tx")]
    pub tx_power_dbm: f64,
    #[serde(default = "gs_default_pattern")]
    pub antenna: AntennaPattern,
}

fn default_gs_id() -> String {
    "gs".into()
}

fn default_gs_tx() -> f64 {
    11.0
}

/// UAV hardware template plus its full-duplex channel pair. The position
/// comes from the evaluation (grid point or explicit placement), not the
/// scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UavConfig {
    #[serde(default = "default_uav_id")]
    pub id: String,
    #[serde(default)]
    pub tx_power_dbm: f64,
    #[serde(default = "uav_default_pattern")]
    pub antenna: AntennaPattern,
    pub uplink: ChannelId,
    pub downlink: ChannelId,
}

fn default_uav_id() -> String {
    "uav0".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouterConfig {
    pub id: String,
    pub position: Position3D,
    #[serde(default = "default_router_tx")]
    pub tx_power_dbm: f64,
    #[serde(default = "default_router_antenna")]
    pub antenna: AntennaPattern,
    pub channel: ChannelId,
}

fn default_router_tx() -> f64 {
    20.0
}

fn default_router_antenna() -> AntennaPattern {
    AntennaPattern::omni(0.0)
}

/// Log-distance model parameters; the free-space intercept is derived from
/// the carrier frequency unless given explicitly, in which case it must
/// match free space at the reference distance within 0.01 dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLossConfig {
    #[serde(default = "default_carrier")]
    pub carrier_frequency_mhz: f64,
    #[serde(default = "default_reference_distance")]
    pub reference_distance_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_loss_db: Option<f64>,
    #[serde(default = "default_exponent_air")]
    pub exponent_air: f64,
    #[serde(default = "default_exponent_ground")]
    pub exponent_ground: f64,
}

fn default_carrier() -> f64 {
    5700.0
}

fn default_reference_distance() -> f64 {
    1.0
}

fn default_exponent_air() -> f64 {
    2.0
}

fn default_exponent_ground() -> f64 {
    4.0
}

impl Default for PathLossConfig {
    fn default() -> Self {
        Self {
            carrier_frequency_mhz: default_carrier(),
            reference_distance_m: default_reference_distance(),
            reference_loss_db: None,
            exponent_air: default_exponent_air(),
            exponent_ground: default_exponent_ground(),
        }
    }
}

impl PathLossConfig {
    pub fn build(&self) -> Result<PathLossModel, PropagationError> {
        match self.reference_loss_db {
            Some(loss) => PathLossModel::with_reference_loss(
                self.carrier_frequency_mhz,
                self.reference_distance_m,
                loss,
                self.exponent_air,
                self.exponent_ground,
            ),
            None => PathLossModel::new(
                self.carrier_frequency_mhz,
                self.reference_distance_m,
                self.exponent_air,
                self.exponent_ground,
            ),
        }
    }
}

/// Receiver noise configuration: 10 MHz UAV-link channels and 20 MHz WLAN
/// victim channels by default, one noise figure for all receivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default = "default_uav_bw")]
    pub uav_link_bandwidth_hz: f64,
    #[serde(default = "default_wlan_bw")]
    pub wlan_bandwidth_hz: f64,
    #[serde(default = "default_nf")]
    pub noise_figure_db: f64,
}

fn default_uav_bw() -> f64 {
    10e6
}

fn default_wlan_bw() -> f64 {
    20e6
}

fn default_nf() -> f64 {
    6.0
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            uav_link_bandwidth_hz: default_uav_bw(),
            wlan_bandwidth_hz: default_wlan_bw(),
            noise_figure_db: default_nf(),
        }
    }
}

fn default_thresholds() -> SharingThresholds {
    SharingThresholds::default()
}

fn default_ue_distance() -> f64 {
    5.0
}

fn default_eirp_limit() -> f64 {
    36.0
}

fn default_altitude() -> f64 {
    30.0
}

/// The full world description consumed by coverage and planning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    #[serde(default)]
    pub mode: Mode,
    pub bounds: AreaBounds,
    pub gs: GsConfig,
    pub uavs: Vec<UavConfig>,
    #[serde(default)]
    pub routers: Vec<RouterConfig>,
    #[serde(default)]
    pub path_loss: PathLossConfig,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default = "default_thresholds")]
    pub thresholds: SharingThresholds,
    #[serde(default = "default_ue_distance")]
    pub ue_distance_m: f64,
    #[serde(default = "default_eirp_limit")]
    pub eirp_limit_dbm: f64,
    #[serde(default)]
    pub building_entry_loss_db: f64,
    #[serde(default = "default_altitude")]
    pub uav_altitude_m: f64,
}

impl Scenario {
    /// Parse and validate a scenario document. Unknown fields are
    /// rejected; semantic violations name the offending field path.
    pub fn from_json(json: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario =
            serde_json::from_str(json).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::at(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        self.bounds
            .validate()
            .map_err(|e| ScenarioError::at("bounds", e.to_string()))?;

        self.gs
            .position
            .validate()
            .map_err(|e| ScenarioError::at("gs.position", e.to_string()))?;
        if !self.bounds.contains_xy(self.gs.position.x, self.gs.position.y) {
            return Err(ScenarioError::at(
                "gs.position",
                "GS must be placed inside the target area",
            ));
        }
        self.gs
            .antenna
            .validate()
            .map_err(|e| ScenarioError::at("gs.antenna", e.to_string()))?;

        if self.uavs.is_empty() {
            return Err(ScenarioError::at("uavs", "at least one UAV configuration is required"));
        }
        for (i, uav) in self.uavs.iter().enumerate() {
            if uav.uplink == uav.downlink {
                return Err(ScenarioError::at(
                    format!("uavs[{i}]"),
                    format!(
                        "full-duplex pair must use two separated channels, got uplink = downlink = {}",
                        uav.uplink.index()
                    ),
                ));
            }
            uav.antenna
                .validate()
                .map_err(|e| ScenarioError::at(format!("uavs[{i}].antenna"), e.to_string()))?;
        }
        for (i, r) in self.routers.iter().enumerate() {
            r.position
                .validate()
                .map_err(|e| ScenarioError::at(format!("routers[{i}].position"), e.to_string()))?;
            if !r.antenna.is_omni() {
                return Err(ScenarioError::at(
                    format!("routers[{i}].antenna"),
                    "routers carry omni-directional antennas",
                ));
            }
        }

        // Legal EIRP cap, checked on the as-written configuration; the
        // conventional transform caps at the limit by construction.
        let check_eirp = |path: String, eirp: f64, limit: f64| -> Result<(), ScenarioError> {
            if eirp > limit + 1e-9 {
                return Err(ScenarioError::at(
                    path,
                    format!("EIRP {eirp:.2} dBm exceeds the legal limit {limit:.2} dBm"),
                ));
            }
            Ok(())
        };
        check_eirp(
            "gs.tx_power_dbm".into(),
            self.gs.antenna.eirp_dbm(self.gs.tx_power_dbm),
            self.eirp_limit_dbm,
        )?;
        for (i, uav) in self.uavs.iter().enumerate() {
            check_eirp(
                format!("uavs[{i}].tx_power_dbm"),
                uav.antenna.eirp_dbm(uav.tx_power_dbm),
                self.eirp_limit_dbm,
            )?;
        }
        for (i, r) in self.routers.iter().enumerate() {
            check_eirp(
                format!("routers[{i}].tx_power_dbm"),
                r.antenna.eirp_dbm(r.tx_power_dbm),
                self.eirp_limit_dbm,
            )?;
        }

        if !(self.ue_distance_m > 0.0) {
            return Err(ScenarioError::at(
                "ue_distance_m",
                format!("must be > 0, got {}", self.ue_distance_m),
            ));
        }
        if !(self.uav_altitude_m > 0.0) {
            return Err(ScenarioError::at(
                "uav_altitude_m",
                format!("the UAV must be airborne, got altitude {}", self.uav_altitude_m),
            ));
        }
        if self.building_entry_loss_db < 0.0 {
            return Err(ScenarioError::at(
                "building_entry_loss_db",
                format!("must be >= 0, got {}", self.building_entry_loss_db),
            ));
        }
        self.path_loss
            .build()
            .map_err(|e| ScenarioError::at("path_loss", e.to_string()))?;
        NoiseModel::new(self.noise.uav_link_bandwidth_hz, self.noise.noise_figure_db)
            .map_err(|e| ScenarioError::at("noise.uav_link_bandwidth_hz", e.to_string()))?;
        NoiseModel::new(self.noise.wlan_bandwidth_hz, self.noise.noise_figure_db)
            .map_err(|e| ScenarioError::at("noise.wlan_bandwidth_hz", e.to_string()))?;
        Ok(())
    }

    pub fn is_conventional(&self) -> bool {
        self.mode == Mode::Conventional
    }

    /// Antenna and power after applying the operating mode: conventional
    /// mode replaces UAV/GS antennas with 0 dBi omnis transmitting at the
    /// EIRP cap.
    fn effective_rf(&self, tx_power_dbm: f64, antenna: AntennaPattern) -> (f64, AntennaPattern) {
        match self.mode {
            Mode::Proposed => (tx_power_dbm, antenna),
            Mode::Conventional => (self.eirp_limit_dbm, AntennaPattern::omni(0.0)),
        }
    }

    /// Mode-effective GS node at its configured position.
    pub fn gs_node(&self) -> Result<RadioNode, LinkError> {
        self.gs_node_at(self.gs.position)
    }

    /// Mode-effective GS node at an explicit position (used by placement
    /// search and CLI overrides); keeps the configured antenna height.
    pub fn gs_node_at(&self, position: Position3D) -> Result<RadioNode, LinkError> {
        let (tx, antenna) = self.effective_rf(self.gs.tx_power_dbm, self.gs.antenna);
        let uav = &self.uavs[0];
        RadioNode::gs(self.gs.id.clone(), position, tx, antenna, uav.uplink, uav.downlink)
    }

    /// Mode-effective UAV template (index into `uavs`); the placeholder
    /// position is replaced per evaluation.
    pub fn uav_node(&self, index: usize) -> Result<RadioNode, LinkError> {
        let uav = &self.uavs[index.min(self.uavs.len() - 1)];
        let (tx, antenna) = self.effective_rf(uav.tx_power_dbm, uav.antenna);
        RadioNode::uav(
            uav.id.clone(),
            Position3D { x: self.bounds.x_min, y: self.bounds.y_min, z: self.uav_altitude_m },
            tx,
            antenna,
            uav.uplink,
            uav.downlink,
        )
    }

    pub fn router_nodes(&self) -> Result<Vec<RadioNode>, LinkError> {
        self.routers
            .iter()
            .map(|r| {
                RadioNode::router(
                    r.id.clone(),
                    r.position,
                    r.tx_power_dbm,
                    r.antenna,
                    r.channel,
                )
            })
            .collect()
    }

    pub fn models(&self) -> Result<LinkModels, ScenarioError> {
        Ok(LinkModels {
            path_loss: self
                .path_loss
                .build()
                .map_err(|e| ScenarioError::at("path_loss", e.to_string()))?,
            uav_noise: NoiseModel::new(self.noise.uav_link_bandwidth_hz, self.noise.noise_figure_db)
                .map_err(|e| ScenarioError::at("noise", e.to_string()))?,
            gs_noise: NoiseModel::new(self.noise.uav_link_bandwidth_hz, self.noise.noise_figure_db)
                .map_err(|e| ScenarioError::at("noise", e.to_string()))?,
            wlan_noise: NoiseModel::new(self.noise.wlan_bandwidth_hz, self.noise.noise_figure_db)
                .map_err(|e| ScenarioError::at("noise", e.to_string()))?,
            ue_distance_m: self.ue_distance_m,
            building_entry_loss_db: self.building_entry_loss_db,
        })
    }

    /// Copy of the scenario with the given mode.
    pub fn with_mode(&self, mode: Mode) -> Scenario {
        let mut s = self.clone();
        s.mode = mode;
        s
    }

    /// Copy with a replaced router list (used by the experiment harness).
    pub fn with_routers(&self, routers: Vec<RouterConfig>) -> Scenario {
        let mut s = self.clone();
        s.routers = routers;
        s
    }
}

// ---------------------------------------------------------------------------
// Seeded router generation
// ---------------------------------------------------------------------------

/// Channel of a generated router relative to the primary UAV uplink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMixEntry {
    CoChannel,
    Adjacent,
    NextAdjacent,
}

/// Template for randomly installed routers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouterTemplate {
    pub count: usize,
    pub channel_mix: Vec<ChannelMixEntry>,
    #[serde(default = "default_router_height")]
    pub height_m: f64,
    #[serde(default = "default_router_tx")]
    pub tx_power_dbm: f64,
    #[serde(default)]
    pub antenna_gain_dbi: f64,
}

fn default_router_height() -> f64 {
    1.5
}

/// Deterministic router placement: positions drawn uniformly over the
/// bounds from a ChaCha8 stream cipher RNG seeded with `seed` (64-bit seed
/// expanded by rand_core's SplitMix64 `seed_from_u64`). Each router
/// consumes two draws, x first then y; a draw maps the top 53 bits of the
/// next u64 to [0, 1). Channels follow the mix relative to `uplink`,
/// offsets clipped back onto the raster (+1/+2 preferred, -1/-2 at the
/// upper edge).
pub fn generate_routers(
    seed: u64,
    bounds: &AreaBounds,
    template: &RouterTemplate,
    uplink: ChannelId,
) -> Result<Vec<RouterConfig>, ScenarioError> {
    if template.count != template.channel_mix.len() {
        return Err(ScenarioError::at(
            "router_template.channel_mix",
            format!(
                "mix length {} does not match count {}",
                template.channel_mix.len(),
                template.count
            ),
        ));
    }
    if template.height_m < 0.0 {
        return Err(ScenarioError::at(
            "router_template.height_m",
            format!("must be >= 0, got {}", template.height_m),
        ));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let u = uplink.index();
    let pick = |offset: u8| -> ChannelId {
        let up = u.checked_add(offset).filter(|&c| c <= ChannelId::MAX_INDEX);
        let idx = match up {
            Some(c) => c,
            None => u - offset,
        };
        ChannelId::new(idx).expect("clipped to raster")
    };
    let mut routers = Vec::with_capacity(template.count);
    for (i, entry) in template.channel_mix.iter().enumerate() {
        let x = bounds.x_min + unit() * bounds.width();
        let y = bounds.y_min + unit() * bounds.height();
        let channel = match entry {
            ChannelMixEntry::CoChannel => uplink,
            ChannelMixEntry::Adjacent => pick(1),
            ChannelMixEntry::NextAdjacent => pick(2),
        };
        routers.push(RouterConfig {
            id: format!("router-{i}"),
            position: Position3D { x, y, z: template.height_m },
            tx_power_dbm: template.tx_power_dbm,
            antenna: AntennaPattern::omni(template.antenna_gain_dbi),
            channel,
        });
    }
    Ok(routers)
}
