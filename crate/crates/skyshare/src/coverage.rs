//! Flyable-area maps: evaluate the sharing conditions over a horizontal
//! grid of UAV positions at a fixed altitude.
//!
//! Grid points sit at cell centres; evaluation is embarrassingly parallel
//! over points and guaranteed to match sequential evaluation exactly
//! (order-preserving collection, no cross-point state).

use crate::geometry::{AreaBounds, GeometryError, Position3D};
use crate::link::{
    BindingCondition, LinkContext, LinkError, LinkModels, PointEvaluation, RadioNode,
    SharingThresholds,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoverageError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("grid resolution must be > 0 m, got {0}")]
    InvalidResolution(f64),
    #[error("grid altitude must be > 0 m (the UAV is airborne), got {0}")]
    InvalidAltitude(f64),
    #[error("GS position ({x}, {y}) lies outside the target area")]
    GsOutsideBounds { x: f64, y: f64 },
    #[error("region does not intersect any grid point")]
    EmptyRegion,
}

/// A horizontal grid of UAV positions at a fixed altitude. Cell counts are
/// `ceil(extent / resolution)` per axis with points at cell centres; a
/// partial last cell is represented by its clipped midpoint so every point
/// stays inside the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub bounds: AreaBounds,
    pub resolution_m: f64,
    pub altitude_m: f64,
}

impl GridSpec {
    pub fn new(bounds: AreaBounds, resolution_m: f64, altitude_m: f64) -> Result<Self, CoverageError> {
        let spec = Self { bounds, resolution_m, altitude_m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CoverageError> {
        self.bounds.validate()?;
        if !(self.resolution_m > 0.0) || !self.resolution_m.is_finite() {
            return Err(CoverageError::InvalidResolution(self.resolution_m));
        }
        if !(self.altitude_m > 0.0) || !self.altitude_m.is_finite() {
            return Err(CoverageError::InvalidAltitude(self.altitude_m));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        (self.bounds.width() / self.resolution_m).ceil() as usize
    }

    pub fn ny(&self) -> usize {
        (self.bounds.height() / self.resolution_m).ceil() as usize
    }

    pub fn point_count(&self) -> usize {
        self.nx() * self.ny()
    }

    fn axis_center(origin: f64, extent: f64, res: f64, i: usize) -> f64 {
        let c = (i as f64 + 0.5) * res;
        if c <= extent {
            origin + c
        } else {
            origin + (i as f64 * res + extent) / 2.0
        }
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        Self::axis_center(self.bounds.x_min, self.bounds.width(), self.resolution_m, ix)
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        Self::axis_center(self.bounds.y_min, self.bounds.height(), self.resolution_m, iy)
    }

    /// Cell centres in row-major order: y varies slowest, x fastest.
    pub fn centers(&self) -> Vec<(f64, f64)> {
        let (nx, ny) = (self.nx(), self.ny());
        let mut pts = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            let y = self.y_at(iy);
            for ix in 0..nx {
                pts.push((self.x_at(ix), y));
            }
        }
        pts
    }
}

/// Outcome at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointRecord {
    pub pass: bool,
    pub worst_margin_db: f64,
    pub binding: BindingCondition,
    /// Some involved distance fell below the path-loss reference distance
    /// and was clamped (e.g. grid point coincident with the GS).
    pub clamped: bool,
}

/// Per-point pass/fail map plus the flyable ratio for one GS placement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlyableGrid {
    pub spec: GridSpec,
    /// Row-major, `iy * nx + ix`, matching [`GridSpec::centers`].
    pub records: Vec<PointRecord>,
    pub flyable_ratio: f64,
}

impl FlyableGrid {
    pub fn pass_count(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn clamped_count(&self) -> usize {
        self.records.iter().filter(|r| r.clamped).count()
    }
}

/// Compile a link evaluator for the UAV template and an explicit GS
/// placement, checking that the placement lies inside the target bounds.
fn compile_for_gs(
    uav_template: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
    bounds: &AreaBounds,
) -> Result<LinkContext, CoverageError> {
    if !bounds.contains_xy(gs.position.x, gs.position.y) {
        return Err(CoverageError::GsOutsideBounds {
            x: gs.position.x,
            y: gs.position.y,
        });
    }
    Ok(LinkContext::compile(uav_template, gs, routers, models)?)
}

/// Evaluate the sharing conditions at every grid point with the UAV placed
/// at the point and beams aligned GS<->UAV.
pub fn compute_grid(
    uav_template: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
    thresholds: &SharingThresholds,
    grid: &GridSpec,
) -> Result<FlyableGrid, CoverageError> {
    grid.validate()?;
    let ctx = compile_for_gs(uav_template, gs, routers, models, &grid.bounds)?;
    let centers = grid.centers();
    let altitude = grid.altitude_m;
    let records: Vec<PointRecord> = centers
        .par_iter()
        .map(|&(x, y)| {
            let eval = ctx.evaluate(&Position3D { x, y, z: altitude }, thresholds);
            PointRecord {
                pass: eval.report.pass,
                worst_margin_db: eval.report.worst_margin_db,
                binding: eval.report.binding,
                clamped: eval.sinr.clamped,
            }
        })
        .collect();
    let passes = records.iter().filter(|r| r.pass).count();
    let ratio = passes as f64 / records.len() as f64;
    Ok(FlyableGrid {
        spec: *grid,
        records,
        flyable_ratio: ratio,
    })
}

/// Flyable ratio only, short-circuiting each point on its first violated
/// condition. Produces exactly the ratio of [`compute_grid`] at a fraction
/// of the cost; used by the exhaustive GS search.
pub fn flyable_ratio(
    uav_template: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
    thresholds: &SharingThresholds,
    grid: &GridSpec,
) -> Result<f64, CoverageError> {
    grid.validate()?;
    let ctx = compile_for_gs(uav_template, gs, routers, models, &grid.bounds)?;
    let centers = grid.centers();
    let altitude = grid.altitude_m;
    let passes = centers
        .par_iter()
        .filter(|&&(x, y)| ctx.passes(&Position3D { x, y, z: altitude }, thresholds))
        .count();
    Ok(passes as f64 / centers.len() as f64)
}

/// Full SINR evaluation at a single UAV position, through the same
/// compiled path the grid sweep uses.
pub fn evaluate_at(
    uav_template: &RadioNode,
    gs: &RadioNode,
    routers: &[RadioNode],
    models: &LinkModels,
    thresholds: &SharingThresholds,
    uav_position: &Position3D,
) -> Result<PointEvaluation, CoverageError> {
    let ctx = LinkContext::compile(uav_template, gs, routers, models)?;
    Ok(ctx.evaluate(uav_position, thresholds))
}

/// Even-odd point-in-polygon test on the cell centres of `grid`, returning
/// the pass fraction among contained points.
pub fn flyable_ratio_within(grid: &FlyableGrid, polygon: &[(f64, f64)]) -> Result<f64, CoverageError> {
    let centers = grid.spec.centers();
    let mut inside = 0usize;
    let mut passed = 0usize;
    for (record, point) in grid.records.iter().zip(centers.iter()) {
        let (x, y) = *point;
        if point_in_polygon(x, y, polygon) {
            inside += 1;
            if record.pass {
                passed += 1;
            }
        }
    }
    if inside == 0 {
        return Err(CoverageError::EmptyRegion);
    }
    Ok(passed as f64 / inside as f64)
}

/// Even-odd ray casting; points exactly on an edge count as inside on the
/// lower/left side only, which keeps adjacent regions disjoint.
pub fn point_in_polygon(x: f64, y: f64, polygon: &[(f64, f64)]) -> bool {
    let n = polygon.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = polygon[i];
        let (xj, yj) = polygon[j];
        if (yi > y) != (yj > y) {
            let x_cross = xi + (y - yi) / (yj - yi) * (xj - xi);
            if x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}
