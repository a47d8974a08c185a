use serde::{Deserialize, Serialize};

use crate::light::LightState;
use crate::world::WorldState;

/// PD adaptive cruise control on the lead vehicle. Throttle is the
/// saturated PD output in `[theta_min, theta_max]`, scaled to an
/// acceleration by `gain`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccPdParams {
    pub kp: f64,
    pub kd: f64,
    pub d_set: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub gain: f64,
}

/// Plain speed-hold cruise: accelerate toward a set speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CruiseParams {
    pub v_set: f64,
    pub gain: f64,
}

/// Switching controller for the lane-change scenario: cruise while the
/// lateral lookahead `D = d_lat - closing_speed * tau` stays above the
/// safety margin, otherwise brake at a constant rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaneSwitchParams {
    pub d_safety: f64,
    pub lookahead_tau: f64,
    pub cruise: CruiseParams,
    pub avoid_decel: f64,
}

/// Yellow-light policy: compare the stopping distance
/// `d_stop = v * t + a_max * t^2 / 2` (t = remaining yellow) against the
/// distance to the stop line; one branch brakes at `max_decel`, the
/// other keeps cruising on the lead vehicle.
///
/// `brake_when_stoppable = false` keeps the published inequality
/// (brake when `d_stop >= d_to_line`); `true` flips it so the vehicle
/// brakes exactly when it can still stop before the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YellowLightParams {
    pub max_decel: f64,
    pub acc: AccPdParams,
    pub brake_when_stoppable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EgoController {
    AccPd(AccPdParams),
    LaneSwitch(LaneSwitchParams),
    YellowLight(YellowLightParams),
}

fn acc_pd(world: &WorldState, p: &AccPdParams) -> f64 {
    let d = world.adv.x - world.ego.x;
    let pd = p.kp * (d - p.d_set) + p.kd * (world.adv.v - world.ego.v);
    let theta = pd.clamp(p.theta_min, p.theta_max);
    p.gain * theta
}

fn cruise(world: &WorldState, p: &CruiseParams) -> f64 {
    p.gain * (p.v_set - world.ego.v)
}

fn lane_switch(world: &WorldState, p: &LaneSwitchParams) -> f64 {
    let d_lat = (world.adv.y - world.ego.y).abs();
    // adversary lateral speed toward the ego
    let closing = if world.adv.y > world.ego.y {
        -world.adv.v_lat
    } else {
        world.adv.v_lat
    };
    let lookahead = d_lat - closing * p.lookahead_tau;
    if lookahead > p.d_safety {
        cruise(world, &p.cruise)
    } else {
        -p.avoid_decel
    }
}

fn yellow_light(world: &WorldState, p: &YellowLightParams) -> f64 {
    let Some(light) = &world.light else {
        return acc_pd(world, &p.acc);
    };
    if light.state == LightState::Green {
        return acc_pd(world, &p.acc);
    }
    let t = light.yellow_remaining();
    let d_stop = world.ego.v * t + 0.5 * p.max_decel * t * t;
    let d_to_line = light.config.stop_line - world.ego.x;
    let brake = if p.brake_when_stoppable {
        d_stop <= d_to_line
    } else {
        d_stop >= d_to_line
    };
    if brake {
        -p.max_decel
    } else {
        acc_pd(world, &p.acc)
    }
}

/// Ego acceleration command for the current world.
pub fn ego_control(world: &WorldState, ctrl: &EgoController) -> f64 {
    match ctrl {
        EgoController::AccPd(p) => acc_pd(world, p),
        EgoController::LaneSwitch(p) => lane_switch(world, p),
        EgoController::YellowLight(p) => yellow_light(world, p),
    }
}
