//! Deterministic fixed-timestep driving simulator.
//!
//! Two vehicles move with explicit-Euler longitudinal kinematics and
//! commanded lateral velocity. The adversary is driven by an external
//! action; the ego vehicle runs one of three controllers (PD-based
//! adaptive cruise, a lane-change switching controller, or the yellow
//! light stop/cruise policy). A scheduled traffic light, collision
//! predicates, and a fixed set of derived signals complete the world.
//!
//! `x` is the front-bumper position of a vehicle, increasing in the
//! driving direction; a vehicle occupies `[x - length, x]`. `y` is the
//! lateral center position. The front-bumper gap `d = x_adv - x_ego`
//! matches the distance-between-front-bumpers convention that collision
//! thresholds are stated in.
//!
//! Identical (world, action sequence, parameters) produce bit-identical
//! trajectories; stochasticity only ever enters through the optional
//! acceleration-noise hook whose samples the caller supplies.

mod controller;
mod light;
mod vehicle;
mod world;

pub use controller::{
    ego_control, AccPdParams, CruiseParams, EgoController, LaneSwitchParams, YellowLightParams,
};
pub use light::{LightConfig, LightState, TrafficLight};
pub use vehicle::{VehicleLimits, VehicleState};
pub use world::{
    collision, derived_signals, step, AccelNoise, AdversaryAction, CollisionRule, SimParams,
    WorldState, SIGNALS,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("non-finite state after step {step}: {dump}")]
    NonFinite { step: u64, dump: String },
    #[error("scenario has no traffic light but the ego controller needs one")]
    MissingLight,
}
