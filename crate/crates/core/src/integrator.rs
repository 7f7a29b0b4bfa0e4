//! Method-of-steps simulation of the delayed system.
//!
//! Classic RK4 with `h = tau / m`, so `t - tau` always lands on a stored grid
//! node. The half-step stages need the delayed state between nodes; it comes
//! from the cubic Hermite interpolant built from the stored values and
//! derivatives at the two neighbouring nodes.

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::model::{rhs, ventilation, ModelParams, State};

/// Default target step.
pub const DEFAULT_STEP: f64 = 0.05;
/// Trailing-window amplitude below which a trajectory counts as settled.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-3;
/// Fewest samples an analysis window may hold.
pub const MIN_WINDOW: usize = 10;
/// Any state coordinate beyond this magnitude aborts the run.
const BLOW_UP: f64 = 1e12;

/// Initial function on `[-tau, 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HistorySpec {
    Constant { x0: f64, y0: f64 },
}

impl HistorySpec {
    pub fn constant(x0: f64, y0: f64) -> Self {
        HistorySpec::Constant { x0, y0 }
    }

    /// The `(35.5, 26.5)` initial condition used for regime and bifurcation runs.
    pub fn standard() -> Self {
        Self::constant(35.5, 26.5)
    }

    pub fn value(&self, _t: f64) -> State {
        match *self {
            HistorySpec::Constant { x0, y0 } => State::new(x0, y0),
        }
    }

    pub fn derivative(&self, _t: f64) -> State {
        match *self {
            HistorySpec::Constant { .. } => State::new(0.0, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `V(x(t - tau), y(t - tau))` at each sample time.
    pub ventilation: Vec<f64>,
    pub step: f64,
    pub tau: f64,
    pub history: HistorySpec,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> State {
        State::new(*self.xs.last().unwrap(), *self.ys.last().unwrap())
    }

    /// Number of grid steps per delay.
    pub fn delay_steps(&self) -> usize {
        (self.tau / self.step).round() as usize
    }

    /// `(x(t_i - tau), y(t_i - tau))`, read from the history before `t = 0`.
    pub fn delayed_state(&self, i: usize) -> State {
        let m = self.delay_steps();
        if i >= m {
            State::new(self.xs[i - m], self.ys[i - m])
        } else {
            self.history.value(self.times[i] - self.tau)
        }
    }

    /// Max-abs deviation from `target` over the whole run.
    pub fn max_deviation(&self, target: State) -> f64 {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| (x - target.x).abs().max((y - target.y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Step size and steps per delay for a target step: `m = ceil(tau / h_target)`.
pub fn grid_step(tau: f64, h_target: f64) -> Result<(f64, usize)> {
    require_positive("h_target", h_target)?;
    if tau == 0.0 {
        return Ok((h_target, 0));
    }
    if h_target > tau {
        return Err(Error::InvalidStep(format!(
            "h_target = {h_target} exceeds the delay tau = {tau}"
        )));
    }
    let m = (tau / h_target).ceil() as usize;
    Ok((tau / m as f64, m))
}

/// Cubic Hermite midpoint of `[t0, t0 + h]`.
#[inline]
fn hermite_mid(p0: State, d0: State, p1: State, d1: State, h: f64) -> State {
    State::new(
        0.5 * (p0.x + p1.x) + h / 8.0 * (d0.x - d1.x),
        0.5 * (p0.y + p1.y) + h / 8.0 * (d0.y - d1.y),
    )
}

pub fn simulate(
    params: ModelParams,
    history: HistorySpec,
    t_max: f64,
    h_target: f64,
) -> Result<Trajectory> {
    params.validate()?;
    require_positive("t_max", t_max)?;
    let tau = params.tau;
    let (h, m) = grid_step(tau, h_target)?;
    let n = (t_max / h - 1e-9).ceil().max(1.0) as usize;
    if n > 200_000_000 {
        return Err(Error::InvalidStep(format!("{n} steps requested")));
    }

    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    let mut dxs: Vec<State> = Vec::with_capacity(n + 1);
    let mut vent = Vec::with_capacity(n + 1);

    let start = history.value(0.0);
    if !start.is_finite() {
        return Err(Error::NonFinite {
            t: 0.0,
            x: start.x,
            y: start.y,
        });
    }
    xs.push(start.x);
    ys.push(start.y);

    // value and derivative of the solution (or history) at grid index k - m
    let delayed_at = |k: usize, xs: &[f64], ys: &[f64], dxs: &[State]| -> (State, State) {
        if m == 0 {
            unreachable!()
        }
        if k >= m {
            (State::new(xs[k - m], ys[k - m]), dxs[k - m])
        } else {
            let t = (k as f64 - m as f64) * h;
            (history.value(t), history.derivative(t))
        }
    };

    let delayed0 = if m == 0 { start } else { history.value(-tau) };
    vent.push(ventilation(delayed0.x, delayed0.y));
    dxs.push(rhs(start, delayed0, &params));

    for k in 0..n {
        let cur = State::new(xs[k], ys[k]);
        let half = 0.5 * h;
        let next = if m == 0 {
            let f = |s: State| rhs(s, s, &params);
            let k1 = f(cur);
            let k2 = f(State::new(cur.x + half * k1.x, cur.y + half * k1.y));
            let k3 = f(State::new(cur.x + half * k2.x, cur.y + half * k2.y));
            let k4 = f(State::new(cur.x + h * k3.x, cur.y + h * k3.y));
            State::new(
                cur.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                cur.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            )
        } else {
            let (d0, dd0) = delayed_at(k, &xs, &ys, &dxs);
            let (d1, mut dd1) = delayed_at(k + 1, &xs, &ys, &dxs);
            if k + 1 == m {
                // [-h, 0] belongs to the history; use its left derivative at 0
                dd1 = history.derivative(0.0);
            }
            let dm = hermite_mid(d0, dd0, d1, dd1, h);
            let k1 = rhs(cur, d0, &params);
            let k2 = rhs(
                State::new(cur.x + half * k1.x, cur.y + half * k1.y),
                dm,
                &params,
            );
            let k3 = rhs(
                State::new(cur.x + half * k2.x, cur.y + half * k2.y),
                dm,
                &params,
            );
            let k4 = rhs(State::new(cur.x + h * k3.x, cur.y + h * k3.y), d1, &params);
            State::new(
                cur.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                cur.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            )
        };
        if !next.is_finite() || next.x.abs() > BLOW_UP || next.y.abs() > BLOW_UP {
            return Err(Error::NonFinite {
                t: (k + 1) as f64 * h,
                x: next.x,
                y: next.y,
            });
        }
        xs.push(next.x);
        ys.push(next.y);
        let delayed = if m == 0 {
            next
        } else {
            delayed_at(k + 1, &xs, &ys, &dxs).0
        };
        vent.push(ventilation(delayed.x, delayed.y));
        dxs.push(rhs(next, delayed, &params));
    }

    let times = (0..=n).map(|k| k as f64 * h).collect();
    Ok(Trajectory {
        times,
        xs,
        ys,
        ventilation: vent,
        step: h,
        tau,
        history,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationStats {
    pub amplitude_x: f64,
    pub amplitude_y: f64,
    pub period: Option<f64>,
    pub converged: bool,
}

/// Indices of strict-left local maxima and minima: sign changes of the
/// forward difference (`+` to `<= 0` for maxima, `-` to `>= 0` for minima).
pub fn local_extrema(values: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let before = values[i] - values[i - 1];
        let after = values[i + 1] - values[i];
        if before > 0.0 && after <= 0.0 {
            maxima.push(i);
        } else if before < 0.0 && after >= 0.0 {
            minima.push(i);
        }
    }
    (maxima, minima)
}

/// Index of the first sample of the trailing `window_fraction` of `len` samples.
pub fn window_start(len: usize, window_fraction: f64) -> Result<usize> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "window_fraction",
            value: window_fraction,
            reason: "must lie in (0, 1]",
        });
    }
    let count = ((len as f64) * window_fraction).floor() as usize;
    if count < MIN_WINDOW {
        return Err(Error::WindowTooShort {
            len: count,
            min: MIN_WINDOW,
        });
    }
    Ok(len - count)
}

fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    hi - lo
}

pub fn oscillation_stats(traj: &Trajectory, window_fraction: f64) -> Result<OscillationStats> {
    let start = window_start(traj.len(), window_fraction)?;
    let xs = &traj.xs[start..];
    let ys = &traj.ys[start..];
    let amplitude_x = spread(xs);
    let amplitude_y = spread(ys);
    let (maxima, _) = local_extrema(xs);
    let period = (maxima.len() >= 2).then(|| {
        let first = maxima[0];
        let last = maxima[maxima.len() - 1];
        (last - first) as f64 * traj.step / (maxima.len() - 1) as f64
    });
    Ok(OscillationStats {
        amplitude_x,
        amplitude_y,
        period,
        converged: amplitude_x < CONVERGENCE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::equilibrium;

    fn params(tau: f64) -> ModelParams {
        ModelParams::new(0.5, 0.8, tau).unwrap()
    }

    #[test]
    fn grid_step_divides_delay() {
        let (h, m) = grid_step(30.8017, 0.05).unwrap();
        assert_eq!(m, 617);
        assert!((h * m as f64 - 30.8017).abs() < 1e-12);
        assert!(h <= 0.05);
        assert_eq!(grid_step(0.0, 0.05).unwrap(), (0.05, 0));
        assert!(grid_step(0.01, 0.05).is_err());
        assert!(grid_step(1.0, 0.0).is_err());
    }

    #[test]
    fn equilibrium_history_stays_put() {
        let eq = equilibrium(0.5, 0.8).unwrap();
        for tau in [0.0, 5.0, 40.0] {
            let tr = simulate(
                params(tau),
                HistorySpec::constant(eq.x_star, eq.y_star),
                500.0,
                0.05,
            )
            .unwrap();
            assert!(tr.max_deviation(eq.state()) < 1e-6, "tau = {tau}");
        }
    }

    #[test]
    fn grid_invariants() {
        let tr = simulate(params(7.3), HistorySpec::standard(), 100.0, 0.05).unwrap();
        for (k, t) in tr.times.iter().enumerate() {
            assert_eq!(*t, k as f64 * tr.step);
        }
        assert!(*tr.times.last().unwrap() >= 100.0 - 1e-9);
        assert!((tr.tau / tr.step - tr.delay_steps() as f64).abs() < 1e-9);
        assert_eq!(tr.xs.len(), tr.len());
        assert_eq!(tr.ventilation.len(), tr.len());
        // before t = tau the delayed state is the history
        let d = tr.delayed_state(3);
        assert_eq!((d.x, d.y), (35.5, 26.5));
        let v0 = crate::model::ventilation(35.5, 26.5);
        assert_eq!(tr.ventilation[0], v0);
        let i = tr.delay_steps() + 10;
        let d = tr.delayed_state(i);
        assert_eq!(tr.ventilation[i], crate::model::ventilation(d.x, d.y));
    }

    #[test]
    fn tau_zero_matches_ode_rk4() {
        let tr = simulate(params(0.0), HistorySpec::standard(), 2.0, 0.1).unwrap();
        // one RK4 step of the undelayed ODE written out by hand
        let p = params(0.0);
        let f = |x: f64, y: f64| {
            let v = crate::model::ventilation(x, y);
            (1.0 - p.alpha * v * x, 1.0 - p.beta * v * y)
        };
        let (x, y, h) = (35.5, 26.5, 0.1);
        let k1 = f(x, y);
        let k2 = f(x + h / 2.0 * k1.0, y + h / 2.0 * k1.1);
        let k3 = f(x + h / 2.0 * k2.0, y + h / 2.0 * k2.1);
        let k4 = f(x + h * k3.0, y + h * k3.1);
        let x1 = x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        assert!((tr.xs[1] - x1).abs() < 1e-14);
    }

    #[test]
    fn step_halving_converges() {
        let a = simulate(params(15.0), HistorySpec::standard(), 300.0, 0.05).unwrap();
        let b = simulate(params(15.0), HistorySpec::standard(), 300.0, 0.025).unwrap();
        let diff = (a.last().x - b.last().x)
            .abs()
            .max((a.last().y - b.last().y).abs());
        assert!(diff < 1e-6, "diff {diff}");
    }

    #[test]
    fn ventilation_nonnegative() {
        for tau in [10.0, 35.0] {
            let tr = simulate(params(tau), HistorySpec::standard(), 2000.0, 0.05).unwrap();
            assert!(tr.ventilation.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(simulate(params(10.0), HistorySpec::standard(), 0.0, 0.05).is_err());
        assert!(simulate(params(10.0), HistorySpec::standard(), 10.0, 11.0).is_err());
        let bad = simulate(
            params(1.0),
            HistorySpec::constant(f64::NAN, 1.0),
            10.0,
            0.05,
        );
        assert!(matches!(bad, Err(Error::NonFinite { .. })));
    }

    fn synthetic(values: Vec<f64>, step: f64) -> Trajectory {
        let n = values.len();
        Trajectory {
            times: (0..n).map(|k| k as f64 * step).collect(),
            ys: values.clone(),
            xs: values,
            ventilation: vec![0.0; n],
            step,
            tau: 0.0,
            history: HistorySpec::constant(0.0, 0.0),
        }
    }

    #[test]
    fn stats_of_constant_signal() {
        let s = oscillation_stats(&synthetic(vec![3.0; 400], 0.1), 0.25).unwrap();
        assert_eq!(s.amplitude_x, 0.0);
        assert_eq!(s.period, None);
        assert!(s.converged);
    }

    #[test]
    fn stats_of_sinusoid() {
        let step = 0.05;
        let period = 7.3;
        let v = (0..20000)
            .map(|k| 2.0 * (std::f64::consts::TAU * k as f64 * step / period).sin())
            .collect();
        let s = oscillation_stats(&synthetic(v, step), 0.25).unwrap();
        assert!((s.period.unwrap() - period).abs() <= 2.0 * step);
        assert!((s.amplitude_x - 4.0).abs() < 1e-3);
        assert!(!s.converged);
    }

    #[test]
    fn short_window_rejected() {
        let err = oscillation_stats(&synthetic(vec![1.0; 20], 0.1), 0.25).unwrap_err();
        assert!(matches!(err, Error::WindowTooShort { .. }));
        assert!(oscillation_stats(&synthetic(vec![1.0; 200], 0.1), 0.0).is_err());
    }

    #[test]
    fn extrema_detection() {
        let (mx, mn) = local_extrema(&[0.0, 1.0, 0.0, -1.0, 0.0, 2.0, 2.0, 1.0]);
        assert_eq!(mx, vec![1, 5]);
        assert_eq!(mn, vec![3]);
    }
}
