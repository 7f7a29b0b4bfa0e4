//! Parameter sweeps: bifurcation diagrams in `tau`, critical-curve families,
//! the critical surface `tau*(alpha, beta)` and max-real-part tables.
//!
//! Grid points are independent and evaluated through [`Execution`]; output
//! order always follows the grid index. A failing point never aborts a sweep,
//! it is recorded in `failures` with a reason code.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::exec::Execution;
use crate::integrator::{local_extrema, simulate, window_start, HistorySpec, DEFAULT_STEP};
use crate::model::ModelParams;
use crate::spectrum::{
    characteristic_roots_with, coefficients_for, critical_delays, mirror_delays, Branch, RootSearch,
};

/// Simulation horizon of a full bifurcation scan.
pub const SCAN_T_MAX: f64 = 20_000.0;
/// Shorter horizon for quick scans.
pub const FAST_SCAN_T_MAX: f64 = 5_000.0;
/// Trailing spread of `x` above which a delay counts as oscillating.
pub const ONSET_SPREAD: f64 = 0.1;
/// Second-half over first-half amplitude ratio that counts as non-decaying.
pub const SUSTAINED_RATIO: f64 = 0.95;

/// A grid point that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    /// The grid coordinates, in the order the sweep lists them.
    pub coords: Vec<f64>,
    pub code: String,
    pub message: String,
}

impl PointFailure {
    fn new(index: usize, coords: Vec<f64>, err: &Error) -> Self {
        Self {
            index,
            coords,
            code: err.code().to_string(),
            message: err.to_string(),
        }
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    fn validate_positive(&self, name: &'static str, min_points: usize) -> Result<()> {
        require_positive(name, self.lo)?;
        require_positive(name, self.hi)?;
        if self.hi < self.lo {
            return Err(Error::InvalidParameter {
                name,
                value: self.hi,
                reason: "range end below range start",
            });
        }
        if self.points < min_points {
            return Err(Error::InvalidParameter {
                name,
                value: self.points as f64,
                reason: "too few grid points",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationConfig {
    pub alpha: f64,
    pub beta: f64,
    pub tau_from: f64,
    pub tau_to: f64,
    pub tau_step: f64,
    pub t_max: f64,
    pub h_target: f64,
    pub window_fraction: f64,
    pub history: HistorySpec,
    pub execution: Execution,
}

impl BifurcationConfig {
    pub fn new(
        alpha: f64,
        beta: f64,
        tau_from: f64,
        tau_to: f64,
        tau_step: f64,
        t_max: f64,
    ) -> Self {
        Self {
            alpha,
            beta,
            tau_from,
            tau_to,
            tau_step,
            t_max,
            h_target: DEFAULT_STEP,
            window_fraction: 0.25,
            history: HistorySpec::standard(),
            execution: Execution::Parallel,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha", self.alpha)?;
        require_positive("beta", self.beta)?;
        require_non_negative("tau_from", self.tau_from)?;
        require_positive("tau_step", self.tau_step)?;
        require_positive("t_max", self.t_max)?;
        require_positive("h_target", self.h_target)?;
        if !(self.tau_to > self.tau_from) || !self.tau_to.is_finite() {
            return Err(Error::InvalidParameter {
                name: "tau_to",
                value: self.tau_to,
                reason: "must exceed tau_from",
            });
        }
        Ok(())
    }

    /// `tau_from, tau_from + step, ...` up to `tau_to` (inclusive up to rounding).
    pub fn taus(&self) -> Vec<f64> {
        let n = ((self.tau_to - self.tau_from) / self.tau_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.tau_from + i as f64 * self.tau_step)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub tau: f64,
    /// Local maxima and minima of `x` in the trailing window, in time order.
    pub extrema_x: Vec<f64>,
    pub extrema_y: Vec<f64>,
    /// `max - min` of `x` over the trailing window.
    pub spread_x: f64,
    pub spread_y: f64,
    /// Spread of the last half of the window over that of the first half.
    pub envelope_ratio: f64,
}

impl BifurcationPoint {
    /// Non-trivial and not decaying within the window.
    pub fn is_oscillating(&self, spread_threshold: f64) -> bool {
        self.spread_x > spread_threshold && self.envelope_ratio >= SUSTAINED_RATIO
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationDiagram {
    pub config: BifurcationConfig,
    pub points: Vec<BifurcationPoint>,
    pub failures: Vec<PointFailure>,
}

impl BifurcationDiagram {
    pub fn taus(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    /// First scanned delay whose trailing window oscillates with a
    /// non-decaying envelope and spread above `spread_threshold`.
    pub fn onset(&self, spread_threshold: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.is_oscillating(spread_threshold))
            .map(|p| p.tau)
    }
}

fn spread(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    hi - lo
}

fn extrema_values(v: &[f64]) -> Vec<f64> {
    let (mut maxima, minima) = local_extrema(v);
    maxima.extend(minima);
    maxima.sort_unstable();
    if maxima.is_empty() {
        // monotone window: the settled value stands in for the extrema
        return vec![v[v.len() - 1]];
    }
    maxima.into_iter().map(|i| v[i]).collect()
}

fn bifurcation_point(cfg: &BifurcationConfig, tau: f64) -> Result<BifurcationPoint> {
    let params = ModelParams::new(cfg.alpha, cfg.beta, tau)?;
    let h = if tau > 0.0 {
        cfg.h_target.min(tau)
    } else {
        cfg.h_target
    };
    let traj = simulate(params, cfg.history, cfg.t_max, h)?;
    let start = window_start(traj.len(), cfg.window_fraction)?;
    let xs = &traj.xs[start..];
    let ys = &traj.ys[start..];
    let mid = xs.len() / 2;
    let first = spread(&xs[..mid]);
    let second = spread(&xs[mid..]);
    Ok(BifurcationPoint {
        tau,
        extrema_x: extrema_values(xs),
        extrema_y: extrema_values(ys),
        spread_x: spread(xs),
        spread_y: spread(ys),
        envelope_ratio: if first > 0.0 { second / first } else { 0.0 },
    })
}

pub fn bifurcation_diagram(cfg: &BifurcationConfig) -> Result<BifurcationDiagram> {
    cfg.validate()?;
    let taus = cfg.taus();
    let results = cfg.execution.map(&taus, |&tau| bifurcation_point(cfg, tau));
    let mut points = Vec::with_capacity(taus.len());
    let mut failures = Vec::new();
    for (i, (tau, r)) in taus.iter().zip(results).enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(e) => failures.push(PointFailure::new(i, vec![*tau], &e)),
        }
    }
    Ok(BifurcationDiagram {
        config: *cfg,
        points,
        failures,
    })
}

/// Which parameter is held fixed in a critical-curve sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fixed", content = "value", rename_all = "lowercase")]
pub enum Sweep {
    /// `alpha` fixed, `beta` varies.
    Alpha(f64),
    /// `beta` fixed, `alpha` varies.
    Beta(f64),
}

impl Sweep {
    fn pair(self, varying: f64) -> (f64, f64) {
        match self {
            Sweep::Alpha(a) => (a, varying),
            Sweep::Beta(b) => (varying, b),
        }
    }

    pub fn varying_name(self) -> &'static str {
        match self {
            Sweep::Alpha(_) => "beta",
            Sweep::Beta(_) => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Value of the varying parameter.
    pub param: f64,
    pub branch: Branch,
    pub n: u32,
    pub tau: f64,
    /// Max-abs residual of the crossing equations at `(omega*, tau)`.
    pub residual: f64,
}

/// A grid value where `tau_1(n - 1) < tau_2(n) < tau_1(n)` fails.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingViolation {
    pub param: f64,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveFamily {
    pub sweep: Sweep,
    pub axis: Axis,
    pub n_max: u32,
    /// Grid order; per grid value the plus curves `n = 0..=n_max` then the
    /// mirrored curves `n = 1..=n_max`.
    pub points: Vec<CurvePoint>,
    pub ordering_violations: Vec<OrderingViolation>,
    pub failures: Vec<PointFailure>,
}

/// Residual bound every plus-branch point must meet.
pub const CURVE_RESIDUAL_TOL: f64 = 1e-9;

pub fn critical_curve_family(
    sweep: Sweep,
    axis: Axis,
    n_max: u32,
    execution: Execution,
) -> Result<CurveFamily> {
    match sweep {
        Sweep::Alpha(a) => require_positive("alpha", a)?,
        Sweep::Beta(b) => require_positive("beta", b)?,
    };
    axis.validate_positive(sweep.varying_name(), 1)?;
    let values = axis.values();
    let per_point = execution.map(&values, |&v| -> Result<Vec<CurvePoint>> {
        let (alpha, beta) = sweep.pair(v);
        let (_, k) = coefficients_for(alpha, beta)?;
        let plus = critical_delays(&k, n_max);
        let mut out: Vec<CurvePoint> = plus
            .points
            .iter()
            .map(|p| CurvePoint {
                param: v,
                branch: p.branch,
                n: p.n,
                tau: p.tau,
                residual: p.residual,
            })
            .collect();
        if let Some(bad) = out.iter().find(|p| p.residual >= CURVE_RESIDUAL_TOL) {
            return Err(Error::NotACrossing {
                omega: plus.omega_star,
                tau: bad.tau,
                residual: bad.residual,
            });
        }
        out.extend(mirror_delays(&k, n_max).into_iter().map(|p| CurvePoint {
            param: v,
            branch: p.branch,
            n: p.n,
            tau: p.tau,
            residual: p.residual,
        }));
        Ok(out)
    });

    let mut points = Vec::new();
    let mut failures = Vec::new();
    let mut ordering_violations = Vec::new();
    for (i, (v, r)) in values.iter().zip(per_point).enumerate() {
        match r {
            Ok(pts) => {
                let plus = |n: u32| pts.iter().find(|p| p.branch == Branch::Plus && p.n == n);
                for m in pts.iter().filter(|p| p.branch == Branch::Minus) {
                    if let (Some(lo), Some(hi)) = (plus(m.n - 1), plus(m.n)) {
                        if !(lo.tau < m.tau && m.tau < hi.tau) {
                            ordering_violations.push(OrderingViolation { param: *v, n: m.n });
                        }
                    }
                }
                points.extend(pts);
            }
            Err(e) => {
                let (a, b) = sweep.pair(*v);
                failures.push(PointFailure::new(i, vec![a, b], &e));
            }
        }
    }
    Ok(CurveFamily {
        sweep,
        axis,
        n_max,
        points,
        ordering_violations,
        failures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub alpha: f64,
    pub beta: f64,
    /// Smallest critical delay; the stable region is `0 <= tau < tau_star`.
    pub tau_star: f64,
    pub omega_star: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilitySurface {
    pub alpha_axis: Axis,
    pub beta_axis: Axis,
    /// Row-major: `alpha` outer, `beta` inner.
    pub points: Vec<SurfacePoint>,
    pub failures: Vec<PointFailure>,
}

impl StabilitySurface {
    pub fn get(&self, alpha: f64, beta: f64) -> Option<&SurfacePoint> {
        self.points
            .iter()
            .find(|p| (p.alpha - alpha).abs() < 1e-12 && (p.beta - beta).abs() < 1e-12)
    }

    /// True when `tau*` strictly falls with `alpha` along every sampled `beta` column.
    pub fn decreasing_in_alpha(&self) -> bool {
        self.beta_axis.values().iter().all(|&b| {
            let mut col: Vec<&SurfacePoint> = self
                .points
                .iter()
                .filter(|p| (p.beta - b).abs() < 1e-12)
                .collect();
            col.sort_by(|p, q| p.alpha.total_cmp(&q.alpha));
            col.windows(2).all(|w| w[1].tau_star < w[0].tau_star)
        })
    }
}

pub fn stability_surface(
    alpha_axis: Axis,
    beta_axis: Axis,
    execution: Execution,
) -> Result<StabilitySurface> {
    alpha_axis.validate_positive("alpha", 2)?;
    beta_axis.validate_positive("beta", 2)?;
    let grid: Vec<(f64, f64)> = alpha_axis
        .values()
        .into_iter()
        .flat_map(|a| beta_axis.values().into_iter().map(move |b| (a, b)))
        .collect();
    let results = execution.map(&grid, |&(alpha, beta)| -> Result<SurfacePoint> {
        let (_, k) = coefficients_for(alpha, beta)?;
        let set = critical_delays(&k, 0);
        let residual = set.max_residual();
        if residual >= CURVE_RESIDUAL_TOL {
            return Err(Error::NotACrossing {
                omega: set.omega_star,
                tau: set.tau_star(),
                residual,
            });
        }
        Ok(SurfacePoint {
            alpha,
            beta,
            tau_star: set.tau_star(),
            omega_star: set.omega_star,
            residual,
        })
    });
    let mut points = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for (i, (&(a, b), r)) in grid.iter().zip(results).enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(e) => failures.push(PointFailure::new(i, vec![a, b], &e)),
        }
    }
    Ok(StabilitySurface {
        alpha_axis,
        beta_axis,
        points,
        failures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub max_re: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxRealPartTable {
    /// `alpha` outer, then `beta`, then `tau`.
    pub rows: Vec<TableRow>,
    pub failures: Vec<PointFailure>,
}

impl MaxRealPartTable {
    pub fn get(&self, alpha: f64, beta: f64, tau: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.alpha == alpha && r.beta == beta && r.tau == tau)
            .map(|r| r.max_re)
    }
}

pub fn max_real_part_table(
    alphas: &[f64],
    betas: &[f64],
    taus: &[f64],
    execution: Execution,
) -> Result<MaxRealPartTable> {
    for (name, list) in [("alpha", alphas), ("beta", betas), ("tau", taus)] {
        if list.is_empty() {
            return Err(Error::InvalidParameter {
                name,
                value: 0.0,
                reason: "list must not be empty",
            });
        }
    }
    let mut cells = Vec::with_capacity(alphas.len() * betas.len() * taus.len());
    for &a in alphas {
        for &b in betas {
            for &t in taus {
                cells.push((a, b, t));
            }
        }
    }
    // the outer map parallelises over cells, so each root search runs serially
    let search = RootSearch {
        execution: Execution::Sequential,
        ..RootSearch::default()
    };
    let results = execution.map(&cells, |&(alpha, beta, tau)| -> Result<TableRow> {
        require_positive("alpha", alpha)?;
        require_positive("beta", beta)?;
        let (_, k) = coefficients_for(alpha, beta)?;
        let res = characteristic_roots_with(&k, tau, 1, &search)?;
        Ok(TableRow {
            alpha,
            beta,
            tau,
            max_re: res.max_real,
            certified: res.certified,
        })
    });
    let mut rows = Vec::with_capacity(cells.len());
    let mut failures = Vec::new();
    for (i, (&(a, b, t), r)) in cells.iter().zip(results).enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(PointFailure::new(i, vec![a, b, t], &e)),
        }
    }
    Ok(MaxRealPartTable { rows, failures })
}
