//! Parametric antenna patterns: a parabolic main lobe with a flat sidelobe
//! floor for directional antennas, and a constant-gain omni pattern.
//!
//! The pattern is rotationally symmetric about boresight, so a single
//! off-boresight angle selects the gain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AntennaError {
    #[error("off-boresight angle must be in [0, 180] degrees, got {0}")]
    AngleOutOfRange(f64),
    #[error("directional beamwidth must be in (0, 180] degrees, got {0}")]
    InvalidBeamwidth(f64),
    #[error("sidelobe floor must be > 0 dB, got {0}")]
    InvalidSidelobeFloor(f64),
}

/// Gain-vs-angle model. `Directional` attenuates by 12 (theta/beamwidth)^2
/// dB up to a flat `sidelobe_floor_db` below the peak; the attenuation is
/// exactly 3 dB at half the 3 dB beamwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AntennaPattern {
    Omni {
        peak_gain_dbi: f64,
    },
    Directional {
        peak_gain_dbi: f64,
        beamwidth_3db_deg: f64,
        sidelobe_floor_db: f64,
    },
}

impl AntennaPattern {
    pub fn omni(peak_gain_dbi: f64) -> Self {
        AntennaPattern::Omni { peak_gain_dbi }
    }

    pub fn directional(
        peak_gain_dbi: f64,
        beamwidth_3db_deg: f64,
        sidelobe_floor_db: f64,
    ) -> Result<Self, AntennaError> {
        let p = AntennaPattern::Directional {
            peak_gain_dbi,
            beamwidth_3db_deg,
            sidelobe_floor_db,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), AntennaError> {
        if let AntennaPattern::Directional {
            beamwidth_3db_deg,
            sidelobe_floor_db,
            ..
        } = *self
        {
            if !(beamwidth_3db_deg > 0.0 && beamwidth_3db_deg <= 180.0) {
                return Err(AntennaError::InvalidBeamwidth(beamwidth_3db_deg));
            }
            if sidelobe_floor_db <= 0.0 {
                return Err(AntennaError::InvalidSidelobeFloor(sidelobe_floor_db));
            }
        }
        Ok(())
    }

    pub fn peak_gain_dbi(&self) -> f64 {
        match *self {
            AntennaPattern::Omni { peak_gain_dbi } => peak_gain_dbi,
            AntennaPattern::Directional { peak_gain_dbi, .. } => peak_gain_dbi,
        }
    }

    pub fn is_omni(&self) -> bool {
        matches!(self, AntennaPattern::Omni { .. })
    }

    /// Gain in dBi at `theta_deg` off boresight.
    pub fn gain_dbi(&self, theta_deg: f64) -> Result<f64, AntennaError> {
        if !(0.0..=180.0).contains(&theta_deg) {
            return Err(AntennaError::AngleOutOfRange(theta_deg));
        }
        Ok(self.gain_dbi_unchecked(theta_deg))
    }

    /// Same as [`gain_dbi`](Self::gain_dbi) without the range check; the
    /// grid loop only ever passes angles produced by
    /// [`crate::geometry::off_boresight_angle`], which are in range.
    pub(crate) fn gain_dbi_unchecked(&self, theta_deg: f64) -> f64 {
        match *self {
            AntennaPattern::Omni { peak_gain_dbi } => peak_gain_dbi,
            AntennaPattern::Directional {
                peak_gain_dbi,
                beamwidth_3db_deg,
                sidelobe_floor_db,
            } => {
                let ratio = theta_deg / beamwidth_3db_deg;
                peak_gain_dbi - (12.0 * ratio * ratio).min(sidelobe_floor_db)
            }
        }
    }

    /// EIRP at boresight: transmit power plus peak gain. The legal-cap
    /// check lives in scenario validation, not here.
    pub fn eirp_dbm(&self, tx_power_dbm: f64) -> f64 {
        tx_power_dbm + self.peak_gain_dbi()
    }
}

/// Table-defaults for the ground station: 25 dBi peak, 4 degree beamwidth,
/// 25 dB sidelobe floor (sidelobes radiate at 0 dBi).
pub fn gs_default_pattern() -> AntennaPattern {
    AntennaPattern::directional(25.0, 4.0, 25.0).expect("defaults valid")
}

/// Table-defaults for the UAV: 15 dBi peak, 36 degree beamwidth, 25 dB
/// sidelobe floor (sidelobes radiate at -10 dBi).
pub fn uav_default_pattern() -> AntennaPattern {
    AntennaPattern::directional(15.0, 36.0, 25.0).expect("defaults valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn gs_pattern_anchors() {
        let gs = gs_default_pattern();
        assert_abs_diff_eq!(gs.gain_dbi(0.0).unwrap(), 25.0);
        // 12 * (2/4)^2 = 3 dB attenuation at half beamwidth.
        assert_abs_diff_eq!(gs.gain_dbi(2.0).unwrap(), 22.0, epsilon = 1e-12);
        // Deep sidelobe clamps at the floor.
        assert_abs_diff_eq!(gs.gain_dbi(90.0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn omni_is_flat() {
        let omni = AntennaPattern::omni(0.0);
        for theta in [0.0, 17.3, 90.0, 180.0] {
            assert_abs_diff_eq!(omni.gain_dbi(theta).unwrap(), 0.0);
        }
    }

    #[test]
    fn angle_range_enforced() {
        let gs = gs_default_pattern();
        assert!(gs.gain_dbi(-0.1).is_err());
        assert!(gs.gain_dbi(180.1).is_err());
        assert!(gs.gain_dbi(180.0).is_ok());
    }

    #[test]
    fn construction_invariants() {
        assert!(AntennaPattern::directional(25.0, 0.0, 25.0).is_err());
        assert!(AntennaPattern::directional(25.0, 181.0, 25.0).is_err());
        assert!(AntennaPattern::directional(25.0, 4.0, 0.0).is_err());
        assert!(AntennaPattern::directional(25.0, 180.0, 25.0).is_ok());
    }

    #[test]
    fn eirp_anchors() {
        assert_abs_diff_eq!(gs_default_pattern().eirp_dbm(11.0), 36.0);
        assert_abs_diff_eq!(uav_default_pattern().eirp_dbm(0.0), 15.0);
        assert_abs_diff_eq!(AntennaPattern::omni(0.0).eirp_dbm(36.0), 36.0);
    }

    #[test]
    fn half_beamwidth_is_exactly_3db_down() {
        for (peak, bw) in [(25.0, 4.0), (15.0, 36.0), (10.0, 120.0)] {
            let p = AntennaPattern::directional(peak, bw, 30.0).unwrap();
            let g = p.gain_dbi(bw / 2.0).unwrap();
            assert!((g - (peak - 3.0)).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn directional_gain_is_non_increasing(
            theta in 0.0f64..180.0,
            step in 0.0f64..10.0,
            bw in 0.5f64..180.0,
            floor in 1.0f64..60.0,
        ) {
            let p = AntennaPattern::directional(20.0, bw, floor).unwrap();
            let a = p.gain_dbi(theta).unwrap();
            let b = p.gain_dbi((theta + step).min(180.0)).unwrap();
            prop_assert!(b <= a + 1e-12);
        }

        #[test]
        fn gain_bounded_by_peak_and_floor(theta in 0.0f64..=180.0) {
            let p = AntennaPattern::directional(25.0, 4.0, 25.0).unwrap();
            let g = p.gain_dbi(theta).unwrap();
            prop_assert!(g <= 25.0 + 1e-12);
            prop_assert!(g >= 0.0 - 1e-12);
        }
    }
}
