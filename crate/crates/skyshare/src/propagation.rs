//! Radio-physics scalar kernel: log-distance path loss, receiver noise
//! floor, adjacent-channel rejection, and link-budget assembly in dB.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DENSITY_DBM_HZ: f64 = -174.0;

#[derive(Debug, Error, PartialEq)]
pub enum PropagationError {
    #[error("distance must be > 0 for path loss, got {0} m")]
    NonPositiveDistance(f64),
    #[error("path-loss exponents must be > 0, got air {air}, ground {ground}")]
    NonPositiveExponent { air: f64, ground: f64 },
    #[error("reference distance must be > 0, got {0} m")]
    NonPositiveReference(f64),
    #[error(
        "reference loss {given:.4} dB is not the free-space loss {expected:.4} dB \
         at {reference_distance} m / {carrier_frequency_mhz} MHz (tolerance 0.01 dB)"
    )]
    ReferenceLossMismatch {
        given: f64,
        expected: f64,
        reference_distance: f64,
        carrier_frequency_mhz: f64,
    },
    #[error("channel index {0} outside raster 0..={}", ChannelId::MAX_INDEX)]
    OffRaster(u8),
    #[error("noise model requires bandwidth > 0 and noise figure >= 0, got {bandwidth_hz} Hz / {noise_figure_db} dB")]
    InvalidNoiseModel {
        bandwidth_hz: f64,
        noise_figure_db: f64,
    },
}

/// Free-space path loss in dB at distance `d_m` and frequency `f_mhz`.
pub fn free_space_loss_db(d_m: f64, f_mhz: f64) -> f64 {
    let f_hz = f_mhz * 1e6;
    20.0 * (4.0 * std::f64::consts::PI * d_m * f_hz / SPEED_OF_LIGHT_M_S).log10()
}

/// Which path-loss exponent a link uses. Air-to-ground covers every link
/// with a UAV endpoint; ground-to-ground covers the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkClass {
    AirToGround,
    GroundToGround,
}

/// Log-distance path-loss model with a free-space intercept at the
/// reference distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub carrier_frequency_mhz: f64,
    pub reference_distance_m: f64,
    pub reference_loss_db: f64,
    pub exponent_air: f64,
    pub exponent_ground: f64,
}

impl PathLossModel {
    /// Free-space intercept computed from the carrier frequency.
    pub fn new(
        carrier_frequency_mhz: f64,
        reference_distance_m: f64,
        exponent_air: f64,
        exponent_ground: f64,
    ) -> Result<Self, PropagationError> {
        let reference_loss_db = free_space_loss_db(reference_distance_m, carrier_frequency_mhz);
        Self::with_reference_loss(
            carrier_frequency_mhz,
            reference_distance_m,
            reference_loss_db,
            exponent_air,
            exponent_ground,
        )
    }

    /// Explicit intercept; must match the free-space loss at the reference
    /// distance within 0.01 dB.
    pub fn with_reference_loss(
        carrier_frequency_mhz: f64,
        reference_distance_m: f64,
        reference_loss_db: f64,
        exponent_air: f64,
        exponent_ground: f64,
    ) -> Result<Self, PropagationError> {
        if reference_distance_m <= 0.0 {
            return Err(PropagationError::NonPositiveReference(reference_distance_m));
        }
        if exponent_air <= 0.0 || exponent_ground <= 0.0 {
            return Err(PropagationError::NonPositiveExponent {
                air: exponent_air,
                ground: exponent_ground,
            });
        }
        let expected = free_space_loss_db(reference_distance_m, carrier_frequency_mhz);
        if (reference_loss_db - expected).abs() > 0.01 {
            return Err(PropagationError::ReferenceLossMismatch {
                given: reference_loss_db,
                expected,
                reference_distance: reference_distance_m,
                carrier_frequency_mhz,
            });
        }
        Ok(Self {
            carrier_frequency_mhz,
            reference_distance_m,
            reference_loss_db,
            exponent_air,
            exponent_ground,
        })
    }

    /// Paper defaults: 5700 MHz mid-band intercept at 1 m, exponent 2 in
    /// the air, 4 on the ground.
    pub fn paper_default() -> Self {
        Self::new(5700.0, 1.0, 2.0, 4.0).expect("paper defaults are valid")
    }

    pub fn exponent(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::AirToGround => self.exponent_air,
            LinkClass::GroundToGround => self.exponent_ground,
        }
    }
}

/// Path loss plus a flag marking evaluations inside the close-in region
/// (d < reference distance), where the distance is clamped to the
/// reference and the result is outside model validity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub db: f64,
    pub clamped: bool,
}

/// Log-distance path loss: reference_loss + 10 n log10(d / d0).
///
/// Distances below the reference are clamped to the reference and flagged;
/// non-positive distances are rejected.
pub fn path_loss(
    model: &PathLossModel,
    class: LinkClass,
    d_m: f64,
) -> Result<PathLoss, PropagationError> {
    if d_m <= 0.0 || !d_m.is_finite() {
        return Err(PropagationError::NonPositiveDistance(d_m));
    }
    let clamped = d_m < model.reference_distance_m;
    let d = if clamped { model.reference_distance_m } else { d_m };
    let n = model.exponent(class);
    Ok(PathLoss {
        db: model.reference_loss_db + 10.0 * n * (d / model.reference_distance_m).log10(),
        clamped,
    })
}

/// Receiver noise model: fixed -174 dBm/Hz thermal density plus a noise
/// figure over the channel bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
}

impl NoiseModel {
    pub fn new(bandwidth_hz: f64, noise_figure_db: f64) -> Result<Self, PropagationError> {
        if bandwidth_hz <= 0.0 || noise_figure_db < 0.0 {
            return Err(PropagationError::InvalidNoiseModel {
                bandwidth_hz,
                noise_figure_db,
            });
        }
        Ok(Self { bandwidth_hz, noise_figure_db })
    }
}

/// Noise floor in dBm: -174 + 10 log10(B) + NF.
pub fn noise_power_dbm(noise: &NoiseModel) -> f64 {
    THERMAL_NOISE_DENSITY_DBM_HZ + 10.0 * noise.bandwidth_hz.log10() + noise.noise_figure_db
}

/// One channel on the fixed 10 MHz raster from 5650 to 5750 MHz.
///
/// Index i has centre frequency 5655 + 10 i MHz; channels whose 10 MHz
/// span lies inside 5650-5730 MHz are shared with WLAN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ChannelId(u8);

impl ChannelId {
    pub const MAX_INDEX: u8 = 9;
    pub const COUNT: usize = 10;
    pub const RASTER_START_MHZ: f64 = 5650.0;
    pub const RASTER_STEP_MHZ: f64 = 10.0;
    pub const WLAN_OVERLAP_END_MHZ: f64 = 5730.0;

    pub fn new(index: u8) -> Result<Self, PropagationError> {
        if index > Self::MAX_INDEX {
            return Err(PropagationError::OffRaster(index));
        }
        Ok(Self(index))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn center_mhz(&self) -> f64 {
        Self::RASTER_START_MHZ + Self::RASTER_STEP_MHZ * (self.0 as f64 + 0.5)
    }

    /// True when the channel's span lies inside the WLAN-shared
    /// 5650-5730 MHz block.
    pub fn overlaps_wlan(&self) -> bool {
        Self::RASTER_START_MHZ + Self::RASTER_STEP_MHZ * (self.0 as f64 + 1.0)
            <= Self::WLAN_OVERLAP_END_MHZ
    }

    pub fn all() -> impl Iterator<Item = ChannelId> {
        (0..=Self::MAX_INDEX).map(ChannelId)
    }

    pub fn offset(&self, other: &ChannelId) -> u8 {
        self.0.abs_diff(other.0)
    }
}

impl<'de> Deserialize<'de> for ChannelId {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let index = u8::deserialize(deserializer)?;
        ChannelId::new(index).map_err(serde::de::Error::custom)
    }
}

/// Attenuation applied to an interferer by channel separation. Offsets of
/// three or more channels are treated as complete rejection: the
/// interference contribution is exactly zero power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rejection {
    Db(f64),
    Total,
}

/// 0 dB co-channel, 16 dB adjacent, 32 dB next-adjacent, total beyond.
pub fn channel_rejection(victim: &ChannelId, interferer: &ChannelId) -> Rejection {
    match victim.offset(interferer) {
        0 => Rejection::Db(0.0),
        1 => Rejection::Db(16.0),
        2 => Rejection::Db(32.0),
        _ => Rejection::Total,
    }
}

/// Link budget in the dB domain: tx + gains - loss - rejection. A totally
/// rejected interferer yields `None` and is excluded from power sums.
pub fn received_power_dbm(
    tx_power_dbm: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
    loss_db: f64,
    rejection: Rejection,
) -> Option<f64> {
    match rejection {
        Rejection::Total => None,
        Rejection::Db(r) => Some(tx_power_dbm + tx_gain_dbi + rx_gain_dbi - loss_db - r),
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Aggregate interference terms by linear power addition in milliwatts.
/// Fully rejected terms (`None`) contribute exactly zero. Returns `None`
/// when no term carries power.
pub fn power_sum_dbm<I>(terms: I) -> Option<f64>
where
    I: IntoIterator<Item = Option<f64>>,
{
    let mut total_mw = 0.0;
    let mut any = false;
    for term in terms {
        if let Some(dbm) = term {
            total_mw += dbm_to_mw(dbm);
            any = true;
        }
    }
    any.then(|| mw_to_dbm(total_mw))
}
