//! 3-D positions, distances, and off-boresight angles for beam-aligned links.
//!
//! Flat-earth Cartesian coordinates (east, north, height). Over areas of a
//! few square kilometres Earth curvature is far below model fidelity, so no
//! geodetic handling is attempted. Angles are reported in degrees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("position has non-finite coordinate ({x}, {y}, {z})")]
    NonFinite { x: f64, y: f64, z: f64 },
    #[error("height must be >= 0, got {0}")]
    NegativeHeight(f64),
    #[error("direction vector from antenna to {role} has zero length")]
    DegenerateDirection { role: &'static str },
    #[error("invalid area bounds: require x_min < x_max and y_min < y_max, got [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    InvalidBounds {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
}

/// A point in the local Cartesian frame: `x` east, `y` north, `z` height
/// above ground in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(GeometryError::NonFinite { x, y, z });
        }
        if z < 0.0 {
            return Err(GeometryError::NegativeHeight(z));
        }
        Ok(Self { x, y, z })
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        Self::new(self.x, self.y, self.z).map(|_| ())
    }

    /// Squared Euclidean distance; the hot grid loop works on this to avoid
    /// square roots where the path-loss exponent is even.
    pub fn distance_sq(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn horizontal_distance(&self, other: &Position3D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Euclidean 3-D distance in metres.
pub fn distance(a: &Position3D, b: &Position3D) -> f64 {
    a.distance_sq(b).sqrt()
}

/// Angle in degrees, in [0, 180], between the boresight direction
/// (`antenna_pos` -> `boresight_target`) and the direction to `other`.
///
/// Computed as atan2(|u x v|, u . v), which stays accurate near 0 and 180
/// degrees where the acos form loses precision.
pub fn off_boresight_angle(
    antenna_pos: &Position3D,
    boresight_target: &Position3D,
    other: &Position3D,
) -> Result<f64, GeometryError> {
    let u = (
        boresight_target.x - antenna_pos.x,
        boresight_target.y - antenna_pos.y,
        boresight_target.z - antenna_pos.z,
    );
    let v = (
        other.x - antenna_pos.x,
        other.y - antenna_pos.y,
        other.z - antenna_pos.z,
    );
    if u.0 == 0.0 && u.1 == 0.0 && u.2 == 0.0 {
        return Err(GeometryError::DegenerateDirection { role: "boresight target" });
    }
    if v.0 == 0.0 && v.1 == 0.0 && v.2 == 0.0 {
        return Err(GeometryError::DegenerateDirection { role: "other node" });
    }
    Ok(angle_between(u, v))
}

/// atan2-based angle between two non-zero vectors, degrees in [0, 180].
pub(crate) fn angle_between(u: (f64, f64, f64), v: (f64, f64, f64)) -> f64 {
    let dot = u.0 * v.0 + u.1 * v.1 + u.2 * v.2;
    let cx = u.1 * v.2 - u.2 * v.1;
    let cy = u.2 * v.0 - u.0 * v.2;
    let cz = u.0 * v.1 - u.1 * v.0;
    let cross = (cx * cx + cy * cy + cz * cz).sqrt();
    cross.atan2(dot).to_degrees()
}

/// Axis-aligned rectangular target area in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl AreaBounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, GeometryError> {
        let b = Self { x_min, x_max, y_min, y_max };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let finite = self.x_min.is_finite()
            && self.x_max.is_finite()
            && self.y_min.is_finite()
            && self.y_max.is_finite();
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(GeometryError::InvalidBounds {
                x_min: self.x_min,
                x_max: self.x_max,
                y_min: self.y_min,
                y_max: self.y_max,
            });
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn contains_xy(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}
