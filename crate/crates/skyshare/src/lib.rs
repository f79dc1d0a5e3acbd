//! Deterministic planning engine for spectrum sharing between a
//! directional-antenna UAV system and terrestrial WLAN.
//!
//! Given WLAN router positions and channels from a prior monitoring step,
//! the engine evaluates the uplink / downlink / terrestrial SINR sharing
//! conditions over a spatial grid to map where a UAV may fly, places the
//! ground station by exhaustive search, partitions the target area for
//! multiple UAVs, and allocates full-duplex channel pairs per sub-area.

pub mod antenna;
pub mod coverage;
pub mod experiment;
pub mod export;
pub mod geometry;
pub mod link;
pub mod planner;
pub mod propagation;
pub mod scenario;

pub use antenna::AntennaPattern;
pub use geometry::{AreaBounds, Position3D};
pub use link::{
    BindingCondition, ConditionReport, LinkModels, LinkSinr, RadioNode, SharingThresholds,
};
pub use propagation::{ChannelId, LinkClass, NoiseModel, PathLossModel, Rejection};
