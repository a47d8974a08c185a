use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LightState {
    Green,
    Yellow,
    Red,
}

impl LightState {
    /// Exported signal encoding: 0 green, 1 yellow, 2 red.
    pub fn code(self) -> f64 {
        match self {
            LightState::Green => 0.0,
            LightState::Yellow => 1.0,
            LightState::Red => 2.0,
        }
    }
}

/// Static traffic-light schedule parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightConfig {
    /// Stop-line position on the x axis.
    pub stop_line: f64,
    /// Yellow fires when the adversary is within this distance of the line.
    pub trigger_distance: f64,
    /// Seconds of yellow before red.
    pub yellow_duration: f64,
}

/// Scheduled (non-adversarial) traffic light. Transitions only ever run
/// green -> yellow -> red within an episode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficLight {
    pub config: LightConfig,
    pub state: LightState,
    pub time_in_state: f64,
}

impl TrafficLight {
    pub fn new(config: LightConfig) -> Self {
        Self {
            config,
            state: LightState::Green,
            time_in_state: 0.0,
        }
    }

    /// Remaining yellow countdown; full duration while green, zero at red.
    pub fn yellow_remaining(&self) -> f64 {
        match self.state {
            LightState::Green => self.config.yellow_duration,
            LightState::Yellow => (self.config.yellow_duration - self.time_in_state).max(0.0),
            LightState::Red => 0.0,
        }
    }

    /// Advances the schedule by one timestep given the adversary's front
    /// bumper position.
    pub fn advance(&mut self, dt: f64, adv_front_x: f64) {
        match self.state {
            LightState::Green => {
                self.time_in_state += dt;
                if self.config.stop_line - adv_front_x <= self.config.trigger_distance {
                    self.state = LightState::Yellow;
                    self.time_in_state = 0.0;
                }
            }
            LightState::Yellow => {
                self.time_in_state += dt;
                if self.time_in_state >= self.config.yellow_duration - 1e-9 {
                    self.state = LightState::Red;
                    self.time_in_state = 0.0;
                }
            }
            LightState::Red => {
                self.time_in_state += dt;
            }
        }
    }
}
