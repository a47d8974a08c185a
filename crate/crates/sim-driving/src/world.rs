use serde::{Deserialize, Serialize};

use crate::controller::{ego_control, EgoController};
use crate::light::{LightConfig, TrafficLight};
use crate::vehicle::{VehicleLimits, VehicleState};
use crate::SimError;

/// Collision predicate of the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CollisionRule {
    /// Front-bumper gap at or below the threshold (inclusive).
    BumperGap { d_min: f64 },
    /// Axis-aligned footprints in contact: laterally overlapping and
    /// longitudinally within `margin` of each other. The margin registers
    /// the contact a rear-end produces in discrete time before the boxes
    /// interpenetrate, so it can coincide with a non-negative bumper
    /// order.
    FootprintOverlap { margin: f64 },
}

/// One adversary command: longitudinal acceleration plus a lateral
/// velocity setpoint (zero in the single-lane scenarios).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdversaryAction {
    pub accel: f64,
    #[serde(default)]
    pub lat_vel: f64,
}

/// Caller-sampled acceleration perturbations for the optional dynamics
/// noise hook; `None` keeps the dynamics deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelNoise {
    pub ego: f64,
    pub adv: f64,
}

/// Static world parameters for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub dt: f64,
    pub ego_controller: EgoController,
    pub ego_limits: VehicleLimits,
    pub adv_limits: VehicleLimits,
    pub collision: CollisionRule,
    pub light: Option<LightConfig>,
    /// Stop line to far-side exit distance of the intersection box.
    pub intersection_depth: f64,
}

/// Full world at one instant, including the latched crossing flags the
/// yellow-light rulebook formulas consume.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub ego: VehicleState,
    pub adv: VehicleState,
    pub light: Option<TrafficLight>,
    pub step_count: u64,
    pub time: f64,
    pub adv_crossed_line: bool,
    pub adv_crossed_before_red: bool,
    pub ego_crossed_line: bool,
}

impl WorldState {
    pub fn new(ego: VehicleState, adv: VehicleState, light: Option<TrafficLight>) -> Self {
        let mut w = Self {
            ego,
            adv,
            light,
            step_count: 0,
            time: 0.0,
            adv_crossed_line: false,
            adv_crossed_before_red: false,
            ego_crossed_line: false,
        };
        w.latch_crossings();
        w
    }

    fn latch_crossings(&mut self) {
        let Some(light) = &self.light else { return };
        if !self.adv_crossed_line && self.adv.x > light.config.stop_line {
            self.adv_crossed_line = true;
            self.adv_crossed_before_red = light.state != crate::LightState::Red;
        }
        if !self.ego_crossed_line && self.ego.x > light.config.stop_line {
            self.ego_crossed_line = true;
        }
    }

    /// Front-bumper gap.
    pub fn gap(&self) -> f64 {
        self.adv.x - self.ego.x
    }

    pub fn ego_in_intersection(&self, depth: f64) -> bool {
        let Some(light) = &self.light else {
            return false;
        };
        let line = light.config.stop_line;
        self.ego.x > line && self.ego.rear() < line + depth
    }
}

/// Signals recorded every step, in this order.
pub const SIGNALS: &[&str] = &[
    "x_ego",
    "y_ego",
    "v_ego",
    "v_lat_ego",
    "x_adv",
    "y_adv",
    "v_adv",
    "v_lat_adv",
    "d",
    "d_lat",
    "gap_long",
    "x_adv_rear",
    "x_ego_front",
    "overlap",
    "d_traffic_light",
    "d_tl_adv",
    "light",
    "adv_crossed_line",
    "adv_crossed_before_red",
    "ego_in_intersection",
];

fn bool_sig(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Current values of [`SIGNALS`], recomputed from primitive state.
pub fn derived_signals(world: &WorldState, params: &SimParams) -> Vec<f64> {
    let margin = match params.collision {
        CollisionRule::FootprintOverlap { margin } => margin,
        CollisionRule::BumperGap { .. } => 0.0,
    };
    let overlap = footprints_contact(&world.ego, &world.adv, margin);
    let (d_tl_ego, d_tl_adv, light_code) = match &world.light {
        Some(l) => (
            l.config.stop_line - world.ego.x,
            l.config.stop_line - world.adv.x,
            l.state.code(),
        ),
        None => (1e9, 1e9, 0.0),
    };
    vec![
        world.ego.x,
        world.ego.y,
        world.ego.v,
        world.ego.v_lat,
        world.adv.x,
        world.adv.y,
        world.adv.v,
        world.adv.v_lat,
        world.gap(),
        (world.adv.y - world.ego.y).abs(),
        world.adv.rear() - world.ego.x,
        world.adv.rear(),
        world.ego.x,
        bool_sig(overlap),
        d_tl_ego,
        d_tl_adv,
        light_code,
        bool_sig(world.adv_crossed_line),
        bool_sig(world.adv_crossed_before_red),
        bool_sig(world.ego_in_intersection(params.intersection_depth)),
    ]
}

fn footprints_contact(a: &VehicleState, b: &VehicleState, margin: f64) -> bool {
    let ((ax0, ax1), (ay0, ay1)) = a.footprint();
    let ((bx0, bx1), (by0, by1)) = b.footprint();
    ax0 < bx1 + margin && bx0 < ax1 + margin && ay0 < by1 && by0 < ay1
}

/// Scenario collision predicate.
pub fn collision(world: &WorldState, rule: CollisionRule) -> bool {
    match rule {
        CollisionRule::BumperGap { d_min } => world.gap() <= d_min,
        CollisionRule::FootprintOverlap { margin } => {
            footprints_contact(&world.ego, &world.adv, margin)
        }
    }
}

fn integrate(v: &mut VehicleState, accel: f64, lat_vel: f64, limits: &VehicleLimits, dt: f64) {
    v.x += v.v * dt;
    v.v = (v.v + accel * dt).clamp(limits.v_min, limits.v_max);
    v.v_lat = lat_vel;
    v.y = (v.y + v.v_lat * dt).clamp(limits.y_min, limits.y_max);
}

/// Advances the world one timestep: the adversary applies its action,
/// the ego computes its control from the current world, both integrate
/// with explicit Euler, the light advances on the new adversary
/// position, and the latched flags update.
pub fn step(
    world: &WorldState,
    action: AdversaryAction,
    params: &SimParams,
    noise: Option<AccelNoise>,
) -> Result<WorldState, SimError> {
    let mut next = world.clone();
    let (ego_noise, adv_noise) = noise.map_or((0.0, 0.0), |n| (n.ego, n.adv));
    let ego_accel = ego_control(world, &params.ego_controller) + ego_noise;
    let adv_accel = action.accel + adv_noise;

    integrate(&mut next.ego, ego_accel, 0.0, &params.ego_limits, params.dt);
    integrate(
        &mut next.adv,
        adv_accel,
        action.lat_vel,
        &params.adv_limits,
        params.dt,
    );
    if let Some(light) = &mut next.light {
        light.advance(params.dt, next.adv.x);
    }
    next.step_count += 1;
    next.time = next.step_count as f64 * params.dt;
    next.latch_crossings();

    if !next.ego.is_finite() || !next.adv.is_finite() {
        return Err(SimError::NonFinite {
            step: next.step_count,
            dump: format!("ego {:?} adv {:?} action {:?}", next.ego, next.adv, action),
        });
    }
    Ok(next)
}
