//! One runner per subcommand. Each returns the stdout summary and writes the
//! requested CSV/JSON/SVG files.

use std::fmt::Write as _;

use serde_json::{json, Value};

use resp_dde::equilibrium::equilibrium;
use resp_dde::hopf::hopf_quantities;
use resp_dde::integrator::{oscillation_stats, simulate, HistorySpec, CONVERGENCE_THRESHOLD};
use resp_dde::model::ModelParams;
use resp_dde::scan::{
    bifurcation_diagram, critical_curve_family, max_real_part_table, stability_surface, Axis,
    BifurcationConfig, Sweep, FAST_SCAN_T_MAX, ONSET_SPREAD, SCAN_T_MAX,
};
use resp_dde::spectrum::{characteristic_roots_with, RootSearch};
use resp_dde::spectrum::{
    coefficients_for, cooke_dichotomy, critical_delays, mirror_delays, Branch, CookeOutcome,
};
use resp_dde::Execution;

use crate::args::{
    BifurcationArgs, ChartArgs, ChartKind, Command, CriticalArgs, Fixed, Outputs, Pair,
    SimulateArgs, SpectrumArgs, TableArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{document, kv, num, to_value, write_file, write_json, Csv};
use crate::svg::{Mark, Plot};

pub fn run(command: &Command, exec: Execution) -> CliResult<String> {
    match command {
        Command::Equilibrium(a) => run_equilibrium(a),
        Command::Spectrum(a) => run_spectrum(a, exec),
        Command::Critical(a) => run_critical(a),
        Command::Cooke(a) => run_cooke(a),
        Command::Chart(a) => run_chart(a, exec),
        Command::Simulate(a) => run_simulate(a),
        Command::Bifurcation(a) => run_bifurcation(a, exec),
        Command::Hopf(a) => run_hopf(a),
        Command::Table(a) => run_table(a, exec),
    }
}

struct Artifacts<'a> {
    outputs: &'a Outputs,
    csv: Option<String>,
    svg: Option<Plot>,
}

impl<'a> Artifacts<'a> {
    fn new(outputs: &'a Outputs) -> Self {
        Self {
            outputs,
            csv: None,
            svg: None,
        }
    }

    fn write(
        self,
        command: &str,
        parameters: Value,
        tolerances: Value,
        result: Value,
    ) -> CliResult<()> {
        if let Some(path) = &self.outputs.out {
            let csv = self.csv.ok_or_else(|| {
                CliError::Validation(format!("`{command}` has no CSV output; use --json"))
            })?;
            write_file(path, &csv)?;
        }
        if let Some(path) = &self.outputs.json {
            write_json(path, &document(command, parameters, tolerances, result))?;
        }
        if let Some(path) = &self.outputs.svg {
            let plot = self
                .svg
                .ok_or_else(|| CliError::Validation(format!("`{command}` has no plot output")))?;
            write_file(path, &plot.render())?;
        }
        Ok(())
    }
}

fn run_equilibrium(a: &Pair) -> CliResult<String> {
    let eq = equilibrium(a.alpha, a.beta)?;
    let mut csv = Csv::new(&["alpha", "beta", "x_star", "y_star", "residual"]);
    csv.nums(&[a.alpha, a.beta, eq.x_star, eq.y_star, eq.residual]);
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.write(
        "equilibrium",
        json!({"alpha": a.alpha, "beta": a.beta}),
        json!({"residual_max": 1e-12}),
        to_value(&eq),
    )?;
    let mut s = String::new();
    kv(&mut s, "x*", format!("{:.4}", eq.x_star));
    kv(&mut s, "y*", format!("{:.4}", eq.y_star));
    kv(&mut s, "residual", format!("{:.3e}", eq.residual));
    Ok(s)
}

fn run_spectrum(a: &SpectrumArgs, exec: Execution) -> CliResult<String> {
    let (_, k) = coefficients_for(a.alpha, a.beta)?;
    let cfg = RootSearch {
        execution: exec,
        ..RootSearch::default()
    };
    let spec = characteristic_roots_with(&k, a.tau, a.count, &cfg)?;
    let mut csv = Csv::new(&["re", "im", "residual"]);
    for (r, res) in spec.roots.iter().zip(&spec.residuals) {
        csv.nums(&[r.re, r.im, *res]);
    }
    let mut plot = Plot::new(
        &format!(
            "Characteristic roots, alpha={} beta={} tau={}",
            a.alpha, a.beta, a.tau
        ),
        "Re lambda",
        "Im lambda",
    );
    plot.add(
        "roots",
        spec.roots.iter().map(|r| (r.re, r.im)).collect(),
        Mark::Dots,
    );
    plot.add(
        "Re = 0",
        vec![
            (0.0, spec.roots.iter().map(|r| r.im).fold(0.0, f64::min)),
            (0.0, spec.roots.iter().map(|r| r.im).fold(0.0, f64::max)),
        ],
        Mark::Dashed,
    );
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "spectrum",
        json!({"alpha": a.alpha, "beta": a.beta, "tau": a.tau, "count": a.count}),
        to_value(&cfg),
        to_value(&spec),
    )?;
    let mut s = String::new();
    kv(&mut s, "roots", spec.roots.len());
    kv(&mut s, "max_re", format!("{:.6e}", spec.max_real));
    let r = spec.rightmost();
    kv(&mut s, "rightmost", format!("{:.6}{:+.6}i", r.re, r.im));
    kv(&mut s, "certified", spec.certified);
    kv(&mut s, "stable", spec.max_real < 0.0);
    Ok(s)
}

fn run_critical(a: &CriticalArgs) -> CliResult<String> {
    let (_, k) = coefficients_for(a.alpha, a.beta)?;
    let set = critical_delays(&k, a.n_max);
    let mirrors = mirror_delays(&k, a.n_max);
    let mut csv = Csv::new(&["branch", "n", "tau", "residual"]);
    for p in set.points.iter().chain(&mirrors) {
        csv.row(&[
            p.branch.as_str().into(),
            p.n.to_string(),
            num(p.tau),
            num(p.residual),
        ]);
    }
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.write(
        "critical",
        json!({"alpha": a.alpha, "beta": a.beta, "n_max": a.n_max}),
        json!({"crossing_residual_max": resp_dde::scan::CURVE_RESIDUAL_TOL}),
        json!({"crossings": to_value(&set), "mirrored": to_value(&mirrors)}),
    )?;
    let mut s = String::new();
    kv(&mut s, "omega*", format!("{:.6}", set.omega_star));
    kv(&mut s, "tau*", format!("{:.4}", set.tau_star()));
    for p in &set.points {
        kv(&mut s, &format!("tau_1({})", p.n), format!("{:.4}", p.tau));
    }
    Ok(s)
}

fn run_cooke(a: &Pair) -> CliResult<String> {
    let rep = cooke_dichotomy(a.alpha, a.beta)?;
    let (label, tau_star) = match rep.outcome {
        CookeOutcome::DelayIndependentStable => ("delay_independent_stable", f64::NAN),
        CookeOutcome::FiniteCriticalDelay { tau_star } => ("finite_critical_delay", tau_star),
    };
    let mut csv = Csv::new(&[
        "alpha", "beta", "v_star", "x_vx", "y_vy", "outcome", "tau_star",
    ]);
    csv.row(&[
        num(a.alpha),
        num(a.beta),
        num(rep.v_star),
        num(rep.x_vx),
        num(rep.y_vy),
        label.into(),
        num(tau_star),
    ]);
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.write(
        "cooke",
        json!({"alpha": a.alpha, "beta": a.beta}),
        json!({}),
        to_value(&rep),
    )?;
    let mut s = String::new();
    kv(&mut s, "V*", format!("{:.6}", rep.v_star));
    kv(&mut s, "x*Vx+y*Vy", format!("{:.6}", rep.x_vx + rep.y_vy));
    kv(&mut s, "outcome", label);
    if tau_star.is_finite() {
        kv(&mut s, "tau*", format!("{tau_star:.4}"));
    }
    Ok(s)
}

fn run_chart(a: &ChartArgs, exec: Execution) -> CliResult<String> {
    match a.kind {
        ChartKind::Curves => chart_curves(a, exec),
        ChartKind::Surface => chart_surface(a, exec),
    }
}

fn chart_curves(a: &ChartArgs, exec: Execution) -> CliResult<String> {
    let sweep = match a.fix {
        Fixed::Alpha => Sweep::Alpha(a.value),
        Fixed::Beta => Sweep::Beta(a.value),
    };
    let fam = critical_curve_family(sweep, Axis::new(a.from, a.to, a.points), a.n_max, exec)?;
    let mut csv = Csv::new(&["param", "branch", "n", "tau"]);
    for p in &fam.points {
        csv.row(&[
            num(p.param),
            p.branch.as_str().into(),
            p.n.to_string(),
            num(p.tau),
        ]);
    }
    let varying = sweep.varying_name();
    let fixed = if varying == "alpha" { "beta" } else { "alpha" };
    let mut plot = Plot::new(
        &format!("Critical delays, {fixed}={}", a.value),
        varying,
        "tau",
    );
    for branch in [Branch::Plus, Branch::Minus] {
        for n in 0..=a.n_max {
            let pts: Vec<(f64, f64)> = fam
                .points
                .iter()
                .filter(|p| p.branch == branch && p.n == n)
                .map(|p| (p.param, p.tau))
                .collect();
            if pts.is_empty() {
                continue;
            }
            let (name, mark) = match branch {
                Branch::Plus => ("tau_1", Mark::Line),
                Branch::Minus => ("tau_2", Mark::Dashed),
            };
            plot.add(format!("{name}({n})"), pts, mark);
        }
    }
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "chart",
        json!({"kind": "curves", "fix": fixed, "value": a.value, "from": a.from, "to": a.to, "points": a.points, "n_max": a.n_max}),
        json!({"crossing_residual_max": resp_dde::scan::CURVE_RESIDUAL_TOL}),
        to_value(&fam),
    )?;
    let mut s = String::new();
    kv(&mut s, "points", fam.points.len());
    kv(&mut s, "ordering_violations", fam.ordering_violations.len());
    kv(&mut s, "failures", fam.failures.len());
    Ok(s)
}

fn chart_surface(a: &ChartArgs, exec: Execution) -> CliResult<String> {
    let surf = stability_surface(
        Axis::new(a.alpha_from, a.alpha_to, a.grid),
        Axis::new(a.beta_from, a.beta_to, a.grid),
        exec,
    )?;
    let mut csv = Csv::new(&["alpha", "beta", "tau_star"]);
    for p in &surf.points {
        csv.nums(&[p.alpha, p.beta, p.tau_star]);
    }
    let mut plot = Plot::new("First critical delay", "alpha", "tau*");
    for b in surf.beta_axis.values() {
        let pts: Vec<(f64, f64)> = surf
            .points
            .iter()
            .filter(|p| (p.beta - b).abs() < 1e-12)
            .map(|p| (p.alpha, p.tau_star))
            .collect();
        plot.add(format!("beta={b:.3}"), pts, Mark::Line);
    }
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "chart",
        json!({
            "kind": "surface",
            "alpha_from": a.alpha_from, "alpha_to": a.alpha_to,
            "beta_from": a.beta_from, "beta_to": a.beta_to,
            "grid": a.grid,
        }),
        json!({"crossing_residual_max": resp_dde::scan::CURVE_RESIDUAL_TOL}),
        to_value(&surf),
    )?;
    let mut s = String::new();
    kv(&mut s, "points", surf.points.len());
    kv(&mut s, "decreasing_in_alpha", surf.decreasing_in_alpha());
    kv(&mut s, "failures", surf.failures.len());
    Ok(s)
}

fn run_simulate(a: &SimulateArgs) -> CliResult<String> {
    let params = ModelParams::new(a.alpha, a.beta, a.tau)?;
    let history = HistorySpec::constant(a.x0, a.y0);
    let traj = simulate(params, history, a.tmax, a.step)?;
    let stats = oscillation_stats(&traj, a.window)?;
    let eq = equilibrium(a.alpha, a.beta)?;

    let mut csv = Csv::new(&["t", "x", "y", "V"]);
    for i in 0..traj.len() {
        csv.nums(&[traj.times[i], traj.xs[i], traj.ys[i], traj.ventilation[i]]);
    }
    let mut plot = Plot::new(
        &format!(
            "Trajectory, alpha={} beta={} tau={}",
            a.alpha, a.beta, a.tau
        ),
        "t",
        "concentration",
    );
    // thin long runs so the SVG stays small
    let stride = (traj.len() / 4000).max(1);
    let pick = |v: &[f64]| -> Vec<(f64, f64)> {
        (0..traj.len())
            .step_by(stride)
            .map(|i| (traj.times[i], v[i]))
            .collect()
    };
    plot.add("x", pick(&traj.xs), Mark::Line);
    plot.add("y", pick(&traj.ys), Mark::Line);

    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "simulate",
        json!({
            "alpha": a.alpha, "beta": a.beta, "tau": a.tau, "tmax": a.tmax,
            "step_target": a.step, "history": to_value(&history), "window": a.window,
        }),
        json!({"convergence_amplitude": CONVERGENCE_THRESHOLD}),
        json!({"equilibrium": to_value(&eq), "stats": to_value(&stats), "trajectory": to_value(&traj)}),
    )?;

    let last = traj.last();
    let mut s = String::new();
    kv(&mut s, "step", traj.step);
    kv(&mut s, "samples", traj.len());
    kv(&mut s, "final", format!("({:.6}, {:.6})", last.x, last.y));
    kv(
        &mut s,
        "equilibrium",
        format!("({:.6}, {:.6})", eq.x_star, eq.y_star),
    );
    kv(&mut s, "amplitude_x", format!("{:.6e}", stats.amplitude_x));
    kv(&mut s, "amplitude_y", format!("{:.6e}", stats.amplitude_y));
    match stats.period {
        Some(p) => kv(&mut s, "period", format!("{p:.4}")),
        None => kv(&mut s, "period", "none"),
    }
    kv(&mut s, "converged", stats.converged);
    Ok(s)
}

fn run_bifurcation(a: &BifurcationArgs, exec: Execution) -> CliResult<String> {
    let t_max = a
        .tmax
        .unwrap_or(if a.fast { FAST_SCAN_T_MAX } else { SCAN_T_MAX });
    let mut cfg = BifurcationConfig::new(a.alpha, a.beta, a.tau_from, a.tau_to, a.tau_step, t_max);
    cfg.h_target = a.step;
    cfg.execution = exec;
    let diag = bifurcation_diagram(&cfg)?;

    let mut csv = Csv::new(&["tau", "variable", "extremum"]);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in &diag.points {
        for &e in &p.extrema_x {
            csv.row(&[num(p.tau), "x".into(), num(e)]);
            xs.push((p.tau, e));
        }
        for &e in &p.extrema_y {
            csv.row(&[num(p.tau), "y".into(), num(e)]);
            ys.push((p.tau, e));
        }
    }
    let mut plot = Plot::new(
        &format!("Bifurcation diagram, alpha={} beta={}", a.alpha, a.beta),
        "tau",
        "trailing-window extrema",
    );
    plot.add("x", xs, Mark::Dots);
    plot.add("y", ys, Mark::Dots);

    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "bifurcation",
        to_value(&cfg),
        json!({"onset_spread": ONSET_SPREAD, "sustained_ratio": resp_dde::scan::SUSTAINED_RATIO}),
        to_value(&diag),
    )?;

    let mut s = String::new();
    kv(&mut s, "delays", diag.points.len());
    kv(&mut s, "t_max", t_max);
    match diag.onset(ONSET_SPREAD) {
        Some(t) => kv(&mut s, "onset", t),
        None => kv(&mut s, "onset", "none"),
    }
    if let Ok((_, k)) = coefficients_for(a.alpha, a.beta) {
        kv(
            &mut s,
            "tau*",
            format!("{:.4}", critical_delays(&k, 0).tau_star()),
        );
    }
    kv(&mut s, "failures", diag.failures.len());
    Ok(s)
}

fn run_hopf(a: &Pair) -> CliResult<String> {
    let h = hopf_quantities(a.alpha, a.beta)?;
    let mut csv = Csv::new(&["quantity", "value"]);
    for (name, v) in [
        ("omega_star", h.omega_star),
        ("tau_star", h.tau_star),
        ("lambda_prime_re", h.lambda_prime.re),
        ("lambda_prime_im", h.lambda_prime.im),
        ("c1_re", h.c1.re),
        ("c1_im", h.c1.im),
        ("mu2", h.mu2),
        ("beta2", h.beta2),
        ("t2", h.t2),
    ] {
        csv.row(&[name.into(), num(v)]);
    }
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.write(
        "hopf",
        json!({"alpha": a.alpha, "beta": a.beta}),
        json!({"eigenvector_residual_max": 1e-8}),
        to_value(&h),
    )?;
    let mut s = String::new();
    kv(&mut s, "omega*", format!("{:.6}", h.omega_star));
    kv(&mut s, "tau*", format!("{:.4}", h.tau_star));
    kv(&mut s, "c1", format!("{:.6e}{:+.6e}i", h.c1.re, h.c1.im));
    kv(&mut s, "mu2", format!("{:.6}", h.mu2));
    kv(&mut s, "beta2", format!("{:.6e}", h.beta2));
    kv(&mut s, "T2", format!("{:.6e}", h.t2));
    kv(
        &mut s,
        "direction",
        if h.is_supercritical() {
            "supercritical"
        } else {
            "subcritical"
        },
    );
    let _ = writeln!(s, "orbits_stable={}", h.beta2 < 0.0);
    Ok(s)
}

/// `a,b,c` or `lo:hi:step` (inclusive of `hi` up to rounding).
pub fn parse_list(name: &str, text: &str) -> CliResult<Vec<f64>> {
    let bad = |m: &str| CliError::Validation(format!("--{name}: {m}"));
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad(&format!("`{}` is not a number", s.trim())))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range must be lo:hi:step"));
        }
        let (lo, hi, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(bad("range needs lo <= hi and step > 0"));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| lo + i as f64 * step).collect())
    } else {
        let v: Vec<f64> = text.split(',').map(parse).collect::<CliResult<_>>()?;
        if v.is_empty() {
            return Err(bad("empty list"));
        }
        Ok(v)
    }
}

fn run_table(a: &TableArgs, exec: Execution) -> CliResult<String> {
    let alphas = parse_list("alphas", &a.alphas)?;
    let betas = parse_list("betas", &a.betas)?;
    let taus = parse_list("taus", &a.taus)?;
    let table = max_real_part_table(&alphas, &betas, &taus, exec)?;
    let mut csv = Csv::new(&["alpha", "beta", "tau", "max_re"]);
    for r in &table.rows {
        csv.nums(&[r.alpha, r.beta, r.tau, r.max_re]);
    }
    let mut plot = Plot::new("Largest real part", "tau", "max Re lambda");
    for &al in &alphas {
        for &be in &betas {
            let pts: Vec<(f64, f64)> = table
                .rows
                .iter()
                .filter(|r| r.alpha == al && r.beta == be)
                .map(|r| (r.tau, r.max_re))
                .collect();
            plot.add(format!("alpha={al} beta={be}"), pts, Mark::Line);
        }
    }
    let mut art = Artifacts::new(&a.outputs);
    art.csv = Some(csv.into_string());
    art.svg = Some(plot);
    art.write(
        "table",
        json!({"alphas": alphas, "betas": betas, "taus": taus}),
        to_value(&RootSearch {
            execution: Execution::Sequential,
            ..RootSearch::default()
        }),
        to_value(&table),
    )?;
    let mut s = String::new();
    for r in &table.rows {
        let _ = writeln!(
            s,
            "alpha={} beta={} tau={} max_re={:.6e}{}",
            r.alpha,
            r.beta,
            r.tau,
            r.max_re,
            if r.certified { "" } else { " (uncertified)" }
        );
    }
    kv(&mut s, "failures", table.failures.len());
    Ok(s)
}
