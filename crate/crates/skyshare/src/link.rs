//! Assembly of the sharing-condition SINRs for one UAV position: uplink at
//! the GS receiver, downlink at the UAV receiver, and one terrestrial SINR
//! per WLAN router, all under perfect UAV<->GS beam alignment.
//!
//! The same compiled evaluator backs both the scalar operations here and
//! the grid sweep in [`crate::coverage`], so the two paths agree
//! bit-for-bit. Interference aggregates as a linear power sum in
//! milliwatts.

use crate::antenna::AntennaPattern;
use crate::geometry::{GeometryError, Position3D};
use crate::propagation::{
    channel_rejection, noise_power_dbm, path_loss, ChannelId, LinkClass, NoiseModel,
    PathLossModel, PropagationError, Rejection,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinkError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error("node `{id}` has role {found:?}, expected {expected:?}")]
    WrongRole {
        id: String,
        expected: NodeRole,
        found: NodeRole,
    },
    #[error("node `{id}`: {reason}")]
    InvalidNode { id: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Uav,
    Gs,
    Router,
}

/// Channel bookkeeping per role: UAV and GS carry a full-duplex
/// (uplink, downlink) pair, routers a single WLAN channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelAssignment {
    Pair { uplink: ChannelId, downlink: ChannelId },
    Single { channel: ChannelId },
}

/// A radio terminal in the scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioNode {
    pub id: String,
    pub role: NodeRole,
    pub position: Position3D,
    pub tx_power_dbm: f64,
    pub antenna: AntennaPattern,
    pub channels: ChannelAssignment,
}

impl RadioNode {
    pub fn uav(
        id: impl Into<String>,
        position: Position3D,
        tx_power_dbm: f64,
        antenna: AntennaPattern,
        uplink: ChannelId,
        downlink: ChannelId,
    ) -> Result<Self, LinkError> {
        let node = Self {
            id: id.into(),
            role: NodeRole::Uav,
            position,
            tx_power_dbm,
            antenna,
            channels: ChannelAssignment::Pair { uplink, downlink },
        };
        node.validate()?;
        Ok(node)
    }

    pub fn gs(
        id: impl Into<String>,
        position: Position3D,
        tx_power_dbm: f64,
        antenna: AntennaPattern,
        uplink: ChannelId,
        downlink: ChannelId,
    ) -> Result<Self, LinkError> {
        let node = Self {
            id: id.into(),
            role: NodeRole::Gs,
            position,
            tx_power_dbm,
            antenna,
            channels: ChannelAssignment::Pair { uplink, downlink },
        };
        node.validate()?;
        Ok(node)
    }

    pub fn router(
        id: impl Into<String>,
        position: Position3D,
        tx_power_dbm: f64,
        antenna: AntennaPattern,
        channel: ChannelId,
    ) -> Result<Self, LinkError> {
        let node = Self {
            id: id.into(),
            role: NodeRole::Router,
            position,
            tx_power_dbm,
            antenna,
            channels: ChannelAssignment::Single { channel },
        };
        node.validate()?;
        Ok(node)
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        self.position.validate()?;
        self.antenna
            .validate()
            .map_err(|e| LinkError::InvalidNode {
                id: self.id.clone(),
                reason: e.to_string(),
            })?;
        match (self.role, &self.channels) {
            (NodeRole::Uav | NodeRole::Gs, ChannelAssignment::Pair { uplink, downlink }) => {
                if uplink == downlink {
                    return Err(LinkError::InvalidNode {
                        id: self.id.clone(),
                        reason: format!(
                            "full-duplex pair must use two separated channels, got uplink = downlink = {}",
                            uplink.index()
                        ),
                    });
                }
            }
            (NodeRole::Router, ChannelAssignment::Single { .. }) => {
                if !self.antenna.is_omni() {
                    return Err(LinkError::InvalidNode {
                        id: self.id.clone(),
                        reason: "routers carry omni-directional antennas".into(),
                    });
                }
            }
            (role, _) => {
                return Err(LinkError::InvalidNode {
                    id: self.id.clone(),
                    reason: format!("channel assignment does not match role {role:?}"),
                })
            }
        }
        Ok(())
    }

    pub fn pair(&self) -> Option<(ChannelId, ChannelId)> {
        match self.channels {
            ChannelAssignment::Pair { uplink, downlink } => Some((uplink, downlink)),
            ChannelAssignment::Single { .. } => None,
        }
    }

    pub fn single_channel(&self) -> Option<ChannelId> {
        match self.channels {
            ChannelAssignment::Single { channel } => Some(channel),
            ChannelAssignment::Pair { .. } => None,
        }
    }

    fn expect_role(&self, expected: NodeRole) -> Result<(), LinkError> {
        if self.role != expected {
            return Err(LinkError::WrongRole {
                id: self.id.clone(),
                expected,
                found: self.role,
            });
        }
        Ok(())
    }
}

/// Minimum required SINRs for the three sharing conditions (strict
/// inequalities). The two terrestrial directions collapse to one
/// threshold; configuring distinct thresholds re-expands them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharingThresholds {
    pub uplink_min_db: f64,
    pub downlink_min_db: f64,
    pub terrestrial_min_db: f64,
}

impl Default for SharingThresholds {
    /// 11 dB uplink (4K video), 2 dB downlink (flight control), 2 dB
    /// terrestrial (802.11ac MCS-0).
    fn default() -> Self {
        Self {
            uplink_min_db: 11.0,
            downlink_min_db: 2.0,
            terrestrial_min_db: 2.0,
        }
    }
}

/// Propagation and receiver constants shared by every link evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkModels {
    pub path_loss: PathLossModel,
    /// UAV receiver (downlink victim).
    pub uav_noise: NoiseModel,
    /// GS receiver (uplink victim).
    pub gs_noise: NoiseModel,
    /// WLAN victim receiver.
    pub wlan_noise: NoiseModel,
    /// Worst-case router-to-UE separation for the terrestrial desired
    /// signal.
    pub ue_distance_m: f64,
    /// Extra loss on every path between an outdoor node (UAV/GS) and a
    /// router; the router-to-UE link is unaffected.
    pub building_entry_loss_db: f64,
}

impl LinkModels {
    pub fn paper_default() -> Self {
        Self {
            path_loss: PathLossModel::paper_default(),
            uav_noise: NoiseModel::new(10e6, 6.0).unwrap(),
            gs_noise: NoiseModel::new(10e6, 6.0).unwrap(),
            wlan_noise: NoiseModel::new(20e6, 6.0).unwrap(),
            ue_distance_m: 5.0,
            building_entry_loss_db: 0.0,
        }
    }
}

/// The four SINR quantities of the sharing conditions for one UAV
/// placement, in dB.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkSinr {
    pub uplink_db: f64,
    pub downlink_db: f64,
    /// One entry per router in scenario order.
    pub terrestrial_db: Vec<f64>,
    /// True when any involved distance fell below the path-loss reference
    /// distance and was clamped (close-in region, outside model validity).
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingCondition {
    Uplink,
    Downlink,
    Terrestrial,
}

impl BindingCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            BindingCondition::Uplink => "uplink",
            BindingCondition::Downlink => "downlink",
            BindingCondition::Terrestrial => "terrestrial",
        }
    }
}

/// Outcome of checking a [`LinkSinr`] against thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    /// Smallest margin (SINR minus its threshold) across all conditions.
    pub worst_margin_db: f64,
    /// Condition holding the smallest margin. Ties resolve in the order
    /// uplink, downlink, terrestrial.
    pub binding: BindingCondition,
}

/// Strict-inequality check of all sharing conditions plus the worst
/// margin. With no routers the terrestrial quantifier is vacuous.
pub fn evaluate_conditions(sinr: &LinkSinr, thresholds: &SharingThresholds) -> ConditionReport {
    let up_margin = sinr.uplink_db - thresholds.uplink_min_db;
    let down_margin = sinr.downlink_db - thresholds.downlink_min_db;
    let terr_margin = sinr
        .terrestrial_db
        .iter()
        .map(|s| s - thresholds.terrestrial_min_db)
        .fold(f64::INFINITY, f64::min);

    let mut worst = up_margin;
    let mut binding = BindingCondition::Uplink;
    if down_margin < worst {
        worst = down_margin;
        binding = BindingCondition::Downlink;
    }
    if terr_margin < worst {
        worst = terr_margin;
        binding = BindingCondition::Terrestrial;
    }
    ConditionReport {
        pass: up_margin > 0.0 && down_margin > 0.0 && terr_margin > 0.0,
        worst_margin_db: worst,
        binding,
    }
}

// ---------------------------------------------------------------------------
// Compiled evaluator
// ---------------------------------------------------------------------------

const LN10_OVER_10: f64 = core::f64::consts::LN_10 / 10.0;

#[inline]
fn dbm_to_mw(dbm: f64) -> f64 {
    (dbm * LN10_OVER_10).exp()
}

#[inline]
fn db_to_lin(db: f64) -> f64 {
    (db * LN10_OVER_10).exp()
}

/// Everything about one router that does not depend on the UAV position.
#[derive(Debug, Clone)]
struct RouterTerms {
    pos: Position3D,
    /// Router transmissions into the GS receiver: tx + own gain - entry -
    /// rejection vs the uplink channel, as a linear mW factor. `None` when
    /// totally rejected.
    k_into_gs: Option<f64>,
    /// Router transmissions into the UAV receiver (vs downlink channel).
    k_into_uav: Option<f64>,
    /// UAV transmissions (uplink channel) into this victim: uav tx + victim
    /// gain - entry - rejection, linear.
    k_from_uav: Option<f64>,
    /// GS transmissions (downlink channel) into this victim.
    k_from_gs: Option<f64>,
    /// Desired signal power at the UE in mW.
    desired_mw: f64,
    /// GS-to-router ground path gain (linear) and the off-vertical data
    /// needed for GS antenna angles; fixed for a fixed GS.
    gs_path_gain: f64,
    gs_dir: (f64, f64, f64),
    gs_clamped: bool,
}

/// Link evaluator compiled for a fixed GS position, UAV hardware/channel
/// configuration, router set, and model constants. Evaluations at
/// different UAV positions are independent and lock-free.
#[derive(Debug, Clone)]
pub struct LinkContext {
    gs_pos: Position3D,
    gs_antenna: AntennaPattern,
    uav_antenna: AntennaPattern,
    /// 10^((uav.tx + G_uav(0) + G_gs(0)) / 10)
    s_up_peak_mw: f64,
    /// 10^((gs.tx + G_gs(0) + G_uav(0)) / 10)
    s_down_peak_mw: f64,
    ref_dist_sq: f64,
    inv_ref_loss_lin: f64,
    half_exp_air: f64,
    n_gs_mw: f64,
    n_uav_mw: f64,
    n_wlan_mw: f64,
    routers: Vec<RouterTerms>,
    base_clamped: bool,
}

/// Full per-point evaluation: the SINRs plus their threshold check.
#[derive(Debug, Clone)]
pub struct PointEvaluation {
    pub sinr: LinkSinr,
    pub report: ConditionReport,
}

impl LinkContext {
    /// Compile the evaluator. `uav` supplies transmit power, antenna, and
    /// the (uplink, downlink) pair; its position is ignored (positions are
    /// supplied per evaluation). Roles are validated here once so the hot
    /// path can skip checks.
    pub fn compile(
        uav: &RadioNode,
        gs: &RadioNode,
        routers: &[RadioNode],
        models: &LinkModels,
    ) -> Result<Self, LinkError> {
        uav.expect_role(NodeRole::Uav)?;
        gs.expect_role(NodeRole::Gs)?;
        uav.validate()?;
        gs.validate()?;
        let (uplink, downlink) = uav.pair().expect("validated UAV carries a pair");
        if models.ue_distance_m <= 0.0 {
            return Err(LinkError::InvalidNode {
                id: "models".into(),
                reason: format!("ue_distance_m must be > 0, got {}", models.ue_distance_m),
            });
        }

        let pl = &models.path_loss;
        let d0 = pl.reference_distance_m;
        let entry = models.building_entry_loss_db;
        let mut base_clamped = false;

        let ue_pl = path_loss(pl, LinkClass::GroundToGround, models.ue_distance_m)?;
        base_clamped |= ue_pl.clamped;

        let gs_pos = gs.position;
        let mut router_terms = Vec::with_capacity(routers.len());
        for r in routers {
            r.expect_role(NodeRole::Router)?;
            r.validate()?;
            let ch = r.single_channel().expect("validated router carries one channel");
            let r_gain = r.antenna.peak_gain_dbi();
            let as_lin = |rej: Rejection, base_db: f64| match rej {
                Rejection::Total => None,
                Rejection::Db(rdb) => Some(db_to_lin(base_db - rdb - entry)),
            };
            // Ground path GS<->router is fixed for a fixed GS.
            let gs_d2 = gs_pos.distance_sq(&r.position);
            let (gs_path_gain, gs_clamped) = path_gain_lin(
                gs_d2,
                d0 * d0,
                db_to_lin(-pl.reference_loss_db),
                pl.exponent_ground / 2.0,
            );
            router_terms.push(RouterTerms {
                pos: r.position,
                k_into_gs: as_lin(channel_rejection(&uplink, &ch), r.tx_power_dbm + r_gain),
                k_into_uav: as_lin(channel_rejection(&downlink, &ch), r.tx_power_dbm + r_gain),
                k_from_uav: as_lin(channel_rejection(&ch, &uplink), uav.tx_power_dbm + r_gain),
                k_from_gs: as_lin(channel_rejection(&ch, &downlink), gs.tx_power_dbm + r_gain),
                desired_mw: dbm_to_mw(r.tx_power_dbm + r_gain - ue_pl.db),
                gs_path_gain,
                gs_dir: (
                    r.position.x - gs_pos.x,
                    r.position.y - gs_pos.y,
                    r.position.z - gs_pos.z,
                ),
                gs_clamped,
            });
        }

        let g_uav0 = uav.antenna.peak_gain_dbi();
        let g_gs0 = gs.antenna.peak_gain_dbi();
        Ok(Self {
            gs_pos,
            gs_antenna: gs.antenna,
            uav_antenna: uav.antenna,
            s_up_peak_mw: dbm_to_mw(uav.tx_power_dbm + g_uav0 + g_gs0),
            s_down_peak_mw: dbm_to_mw(gs.tx_power_dbm + g_gs0 + g_uav0),
            ref_dist_sq: d0 * d0,
            inv_ref_loss_lin: db_to_lin(-pl.reference_loss_db),
            half_exp_air: pl.exponent_air / 2.0,
            n_gs_mw: dbm_to_mw(noise_power_dbm(&models.gs_noise)),
            n_uav_mw: dbm_to_mw(noise_power_dbm(&models.uav_noise)),
            n_wlan_mw: dbm_to_mw(noise_power_dbm(&models.wlan_noise)),
            routers: router_terms,
            base_clamped,
        })
    }

    pub fn router_count(&self) -> usize {
        self.routers.len()
    }

    /// The three SINR groups at one UAV position (beams aligned GS<->UAV),
    /// with margins evaluated against `thresholds`.
    pub fn evaluate(&self, uav_pos: &Position3D, thresholds: &SharingThresholds) -> PointEvaluation {
        let mut clamped = self.base_clamped;

        // UAV -> GS geometry; both boresights point along this axis.
        let to_gs = (
            self.gs_pos.x - uav_pos.x,
            self.gs_pos.y - uav_pos.y,
            self.gs_pos.z - uav_pos.z,
        );
        let d2_air = to_gs.0 * to_gs.0 + to_gs.1 * to_gs.1 + to_gs.2 * to_gs.2;
        let (air_gain, c) = path_gain_lin(d2_air, self.ref_dist_sq, self.inv_ref_loss_lin, self.half_exp_air);
        clamped |= c;
        let s_up_mw = self.s_up_peak_mw * air_gain;
        let s_down_mw = self.s_down_peak_mw * air_gain;

        let mut i_gs_mw = 0.0; // interference into the GS receiver
        let mut i_uav_mw = 0.0; // interference into the UAV receiver
        let mut terrestrial_db = Vec::with_capacity(self.routers.len());

        for r in &self.routers {
            let to_r = (
                r.pos.x - uav_pos.x,
                r.pos.y - uav_pos.y,
                r.pos.z - uav_pos.z,
            );
            let d2_ur = to_r.0 * to_r.0 + to_r.1 * to_r.1 + to_r.2 * to_r.2;
            let (ur_gain, c) =
                path_gain_lin(d2_ur, self.ref_dist_sq, self.inv_ref_loss_lin, self.half_exp_air);
            clamped |= c;
            clamped |= r.gs_clamped;

            // Off-boresight angles: at the UAV between (UAV->GS, UAV->router),
            // at the GS between (GS->UAV, GS->router).
            let theta_uav = angle_deg(to_gs, to_r);
            let from_gs = (-to_gs.0, -to_gs.1, -to_gs.2);
            let theta_gs = angle_deg(from_gs, r.gs_dir);
            let g_uav_lin = db_to_lin(self.uav_antenna.gain_dbi_unchecked(theta_uav));
            let g_gs_lin = db_to_lin(self.gs_antenna.gain_dbi_unchecked(theta_gs));

            if let Some(k) = r.k_into_gs {
                i_gs_mw += k * g_gs_lin * r.gs_path_gain;
            }
            if let Some(k) = r.k_into_uav {
                i_uav_mw += k * g_uav_lin * ur_gain;
            }

            let mut victim_mw = self.n_wlan_mw;
            if let Some(k) = r.k_from_uav {
                victim_mw += k * g_uav_lin * ur_gain;
            }
            if let Some(k) = r.k_from_gs {
                victim_mw += k * g_gs_lin * r.gs_path_gain;
            }
            terrestrial_db.push(10.0 * (r.desired_mw / victim_mw).log10());
        }

        let sinr = LinkSinr {
            uplink_db: 10.0 * (s_up_mw / (i_gs_mw + self.n_gs_mw)).log10(),
            downlink_db: 10.0 * (s_down_mw / (i_uav_mw + self.n_uav_mw)).log10(),
            terrestrial_db,
            clamped,
        };
        let report = evaluate_conditions(&sinr, thresholds);
        PointEvaluation { sinr, report }
    }

    /// Pass/fail only, short-circuiting on the first violated condition.
    /// Produces exactly the same booleans as [`evaluate`](Self::evaluate):
    /// every SINR it does compute uses the identical arithmetic. The
    /// terrestrial conditions are checked first because they are the ones
    /// that prune whole regions.
    pub fn passes(&self, uav_pos: &Position3D, thresholds: &SharingThresholds) -> bool {
        let to_gs = (
            self.gs_pos.x - uav_pos.x,
            self.gs_pos.y - uav_pos.y,
            self.gs_pos.z - uav_pos.z,
        );
        let d2_air = to_gs.0 * to_gs.0 + to_gs.1 * to_gs.1 + to_gs.2 * to_gs.2;
        let (air_gain, _) =
            path_gain_lin(d2_air, self.ref_dist_sq, self.inv_ref_loss_lin, self.half_exp_air);

        let mut i_gs_mw = 0.0;
        let mut i_uav_mw = 0.0;
        for r in &self.routers {
            let to_r = (
                r.pos.x - uav_pos.x,
                r.pos.y - uav_pos.y,
                r.pos.z - uav_pos.z,
            );
            let d2_ur = to_r.0 * to_r.0 + to_r.1 * to_r.1 + to_r.2 * to_r.2;
            let (ur_gain, _) =
                path_gain_lin(d2_ur, self.ref_dist_sq, self.inv_ref_loss_lin, self.half_exp_air);
            let theta_uav = angle_deg(to_gs, to_r);
            let from_gs = (-to_gs.0, -to_gs.1, -to_gs.2);
            let theta_gs = angle_deg(from_gs, r.gs_dir);
            let g_uav_lin = db_to_lin(self.uav_antenna.gain_dbi_unchecked(theta_uav));
            let g_gs_lin = db_to_lin(self.gs_antenna.gain_dbi_unchecked(theta_gs));

            let mut victim_mw = self.n_wlan_mw;
            if let Some(k) = r.k_from_uav {
                victim_mw += k * g_uav_lin * ur_gain;
            }
            if let Some(k) = r.k_from_gs {
                victim_mw += k * g_gs_lin * r.gs_path_gain;
            }
            let terr_db = 10.0 * (r.desired_mw / victim_mw).log10();
            if !(terr_db - thresholds.terrestrial_min_db > 0.0) {
                return false;
            }

            if let Some(k) = r.k_into_gs {
                i_gs_mw += k * g_gs_lin * r.gs_path_gain;
            }
            if let Some(k) = r.k_into_uav {
                i_uav_mw += k * g_uav_lin * ur_gain;
            }
        }

        let s_up_mw = self.s_up_peak_mw * air_gain;
        let uplink_db = 10.0 * (s_up_mw / (i_gs_mw + self.n_gs_mw)).log10();
        if !(uplink_db - thresholds.uplink_min_db > 0.0) {
            return false;
        }
        let s_down_mw = self.s_down_peak_mw * air_gain;
        let downlink_db = 10.0 * (s_down_mw / (i_uav_mw + self.n_uav_mw)).log10();
        downlink_db - thresholds.downlink_min_db > 0.0
    }
}

/// Linear path gain 10^(-PL/10) for a squared distance, clamping the
/// close-in region to the reference distance. For even exponents this
/// needs no square root.
#[inline]
fn path_gain_lin(d2: f64, ref_d2: f64, inv_ref_loss_lin: f64, half_exp: f64) -> (f64, bool) {
    let clamped = d2 < ref_d2;
    let d2 = if clamped { ref_d2 } else { d2 };
    let ratio = ref_d2 / d2;
    let factor = if half_exp == 1.0 {
        ratio
    } else if half_exp == 2.0 {
        ratio * ratio
    } else {
        ratio.powf(half_exp)
    };
    (inv_ref_loss_lin * factor, clamped)
}

/// Angle in degrees between two vectors via atan2(|cross|, dot); the zero
/// vector maps to 0 degrees (degenerate boresights are handled by the
/// close-in clamp, not here).
#[inline]
fn angle_deg(u: (f64, f64, f64), v: (f64, f64, f64)) -> f64 {
    let dot = u.0 * v.0 + u.1 * v.1 + u.2 * v.2;
    let cx = u.1 * v.2 - u.2 * v.1;
    let cy = u.2 * v.0 - u.0 * v.2;
    let cz = u.0 * v.1 - u.1 * v.0;
    let cross = (cx * cx + cy * cy + cz * cz).sqrt();
    cross.atan2(dot).to_degrees()
}

// ---------------------------------------------------------------------------
// Scalar operations
// ---------------------------------------------------------------------------

fn scalar_eval(
    uav: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
) -> Result<LinkSinr, LinkError> {
    if uav.position == gs.position {
        return Err(GeometryError::DegenerateDirection { role: "boresight target" }.into());
    }
    for r in routers {
        if r.position == uav.position || r.position == gs.position {
            return Err(GeometryError::DegenerateDirection { role: "other node" }.into());
        }
    }
    let ctx = LinkContext::compile(uav, gs, routers, models)?;
    Ok(ctx.evaluate(&uav.position, &SharingThresholds::default()).sinr)
}

/// Uplink SINR in dB at the GS receiver: UAV signal over summed router
/// interference (ground paths into the GS antenna) plus noise.
pub fn uplink_sinr(
    uav: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
) -> Result<f64, LinkError> {
    scalar_eval(uav, gs, routers, models).map(|s| s.uplink_db)
}

/// Downlink SINR in dB at the UAV receiver: GS signal over summed router
/// interference (air paths into the UAV antenna) plus noise.
pub fn downlink_sinr(
    uav: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
) -> Result<f64, LinkError> {
    scalar_eval(uav, gs, routers, models).map(|s| s.downlink_db)
}

/// Terrestrial SINR in dB for a single WLAN victim, evaluated at the
/// router position with the desired signal arriving from `ue_distance_m`
/// away. The UAV interferes on its uplink channel, the GS on the downlink
/// channel.
pub fn terrestrial_sinr(
    router: &RadioNode,
    uav: &RadioNode,
    gs: &RadioNode,
    models: &LinkModels,
) -> Result<f64, LinkError> {
    router.expect_role(NodeRole::Router)?;
    let sinr = scalar_eval(uav, gs, std::slice::from_ref(router), models)?;
    Ok(sinr.terrestrial_db[0])
}

/// All SINR quantities for one UAV placement.
pub fn link_sinr(
    uav: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
) -> Result<LinkSinr, LinkError> {
    scalar_eval(uav, gs, routers, models)
}
