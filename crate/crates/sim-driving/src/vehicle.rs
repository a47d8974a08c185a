use serde::{Deserialize, Serialize};

/// Kinematic state of one vehicle. `x` is the front bumper, `y` the
/// lateral center of the footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub v_lat: f64,
    pub length: f64,
    pub width: f64,
}

impl VehicleState {
    pub fn rear(&self) -> f64 {
        self.x - self.length
    }

    /// Axis-aligned footprint as ((x_lo, x_hi), (y_lo, y_hi)).
    pub fn footprint(&self) -> ((f64, f64), (f64, f64)) {
        (
            (self.x - self.length, self.x),
            (self.y - self.width / 2.0, self.y + self.width / 2.0),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.v.is_finite()
            && self.v_lat.is_finite()
    }
}

/// Per-vehicle clamps applied after integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleLimits {
    pub v_min: f64,
    pub v_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl VehicleLimits {
    /// Forward-only vehicle pinned to one lane.
    pub fn forward_only(v_max: f64, y: f64) -> Self {
        Self {
            v_min: 0.0,
            v_max,
            y_min: y,
            y_max: y,
        }
    }
}
