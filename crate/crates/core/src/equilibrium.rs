//! The unique positive equilibrium, via the principal Lambert W branch.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::model::{ventilation, State};

const W_REL_TOL: f64 = 1e-14;
const W_MAX_ITER: usize = 50;

/// Positive fixed point `(x*, y*)` together with the residual of the
/// equilibrium equations at that point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub x_star: f64,
    pub y_star: f64,
    pub residual: f64,
}

impl Equilibrium {
    pub fn state(&self) -> State {
        State::new(self.x_star, self.y_star)
    }

    /// `V(x*, y*)`.
    pub fn ventilation(&self) -> f64 {
        ventilation(self.x_star, self.y_star)
    }
}

/// Principal branch `W0(z)`, the solution of `w e^w = z` with `w >= -1`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    let branch_point = -(-1.0f64).exp();
    if z.is_nan() || z < branch_point {
        return Err(Error::LambertDomain(z));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if z >= 0.0 {
        z.ln_1p()
    } else {
        // series about the branch point
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    };
    for _ in 0..W_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        if wp1.abs() < f64::EPSILON {
            // at the branch point itself
            return Ok(w);
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= W_REL_TOL * w.abs().max(f64::MIN_POSITIVE) {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        what: "Lambert W Halley iteration",
        iterations: W_MAX_ITER,
    })
}

/// Max-abs residual of the two equilibrium equations
/// `1 - alpha V(x*, y*) x*` and `1 - beta V(x*, y*) y*`.
pub fn verify_equilibrium(eq: &Equilibrium, alpha: f64, beta: f64) -> f64 {
    residual_at(eq.x_star, eq.y_star, alpha, beta)
}

fn residual_at(x: f64, y: f64, alpha: f64, beta: f64) -> f64 {
    let v = ventilation(x, y);
    let r1 = 1.0 - alpha * v * x;
    let r2 = 1.0 - beta * v * y;
    r1.abs().max(r2.abs())
}

/// Closed-form equilibrium followed by Newton polishing on the equilibrium
/// equations.
pub fn equilibrium(alpha: f64, beta: f64) -> Result<Equilibrium> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;

    let arg = (2.5f64).exp() * alpha.sqrt() / beta / (4.0 * 14.0f64.sqrt());
    let y0 = 40.0 * lambert_w0(arg)?;
    let x0 = beta / alpha * y0;

    let (mut x, mut y) = (x0, y0);
    let mut residual = residual_at(x, y, alpha, beta);
    for _ in 0..3 {
        if residual < 1e-13 {
            break;
        }
        let v = ventilation(x, y);
        let f1 = 1.0 - alpha * v * x;
        let f2 = 1.0 - beta * v * y;
        // Jacobian with V_x = V / x and V_y = V / 20
        let j11 = -2.0 * alpha * v;
        let j12 = -alpha * x * v / 20.0;
        let j21 = -beta * y * v / x;
        let j22 = -beta * v * (1.0 + y / 20.0);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let nx = x - (f1 * j22 - f2 * j12) / det;
        let ny = y - (j11 * f2 - j21 * f1) / det;
        let nr = residual_at(nx, ny, alpha, beta);
        if !(nr < residual) {
            break;
        }
        x = nx;
        y = ny;
        residual = nr;
    }

    Ok(Equilibrium {
        x_star: x,
        y_star: y,
        residual,
    })
}
