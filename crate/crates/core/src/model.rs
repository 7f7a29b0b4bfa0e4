//! Model definition: parameters, ventilation, right-hand side and the
//! raw <-> normalized coordinate transform.
//!
//! Normalized coordinates use the scalings `a = 1/p` and `b = 1/sigma`:
//! `x = a (x_raw - x_I)`, `y = b (y_I - y_raw)`.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Result};

/// Ventilation gain, 14/100.
pub const VENT_GAIN: f64 = 14.0 / 100.0;
/// O2 sensitivity of the ventilation exponent, 5/100.
pub const VENT_O2_SLOPE: f64 = 5.0 / 100.0;
/// Reference O2 level inside the exponent.
pub const VENT_O2_REF: f64 = 100.0;

/// Physiological parameters of the un-normalized system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    /// CO2 production rate.
    pub p: f64,
    /// O2 consumption rate.
    pub sigma: f64,
    /// Inspired CO2 concentration.
    pub x_i: f64,
    /// Inspired O2 concentration.
    pub y_i: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
}

impl Default for RawParams {
    /// `p = sigma = 1`, `x_I = 0`, `y_I = 100`: raw and normalized coordinates
    /// coincide up to the O2 reflection.
    fn default() -> Self {
        let m = ModelParams::default();
        Self {
            p: 1.0,
            sigma: 1.0,
            x_i: 0.0,
            y_i: 100.0,
            alpha: m.alpha,
            beta: m.beta,
            tau: m.tau,
        }
    }
}

impl RawParams {
    pub fn validate(&self) -> Result<()> {
        require_positive("p", self.p)?;
        require_positive("sigma", self.sigma)?;
        require_non_negative("x_i", self.x_i)?;
        require_positive("y_i", self.y_i)?;
        require_positive("alpha", self.alpha)?;
        require_positive("beta", self.beta)?;
        require_non_negative("tau", self.tau)?;
        Ok(())
    }

    /// Scaling of the CO2 coordinate, `a = 1/p`.
    pub fn co2_scale(&self) -> f64 {
        1.0 / self.p
    }

    /// Scaling of the O2 coordinate, `b = 1/sigma`.
    pub fn o2_scale(&self) -> f64 {
        1.0 / self.sigma
    }

    pub fn to_model(&self) -> Result<ModelParams> {
        self.validate()?;
        ModelParams::new(self.alpha, self.beta, self.tau)
    }
}

/// Parameters of the normalized system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.8,
            tau: 0.0,
        }
    }
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        let params = Self { alpha, beta, tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha", self.alpha)?;
        require_positive("beta", self.beta)?;
        require_non_negative("tau", self.tau)?;
        Ok(())
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }
}

/// A point of the normalized state space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Raw (physiological) concentrations `(x_raw, y_raw)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawState {
    pub x: f64,
    pub y: f64,
}

/// `V = 0.14 exp(-0.05 (100 - y_del)) x_del`.
#[inline]
pub fn ventilation(x_del: f64, y_del: f64) -> f64 {
    VENT_GAIN * (-VENT_O2_SLOPE * (VENT_O2_REF - y_del)).exp() * x_del
}

/// `(dV/dx, dV/dy)` at `(x, y)`.
#[inline]
pub fn ventilation_gradient(x: f64, y: f64) -> (f64, f64) {
    let exp_part = VENT_GAIN * (-VENT_O2_SLOPE * (VENT_O2_REF - y)).exp();
    (exp_part, VENT_O2_SLOPE * exp_part * x)
}

/// Time derivative of the normalized state given the current and delayed states.
#[inline]
pub fn rhs(current: State, delayed: State, params: &ModelParams) -> State {
    let v = ventilation(delayed.x, delayed.y);
    State {
        x: 1.0 - params.alpha * v * current.x,
        y: 1.0 - params.beta * v * current.y,
    }
}

pub fn normalize(raw_state: RawState, raw: &RawParams) -> State {
    State {
        x: raw.co2_scale() * (raw_state.x - raw.x_i),
        y: raw.o2_scale() * (raw.y_i - raw_state.y),
    }
}

pub fn denormalize(state: State, raw: &RawParams) -> RawState {
    RawState {
        x: raw.x_i + state.x / raw.co2_scale(),
        y: raw.y_i - state.y / raw.o2_scale(),
    }
}
