//! Characteristic roots by seeded Newton refinement.
//!
//! Seeds come from a rectangular grid in the upper half plane and from the
//! `tau = 0` quadratic roots continued in `tau`. After every round the box is
//! widened; the search stops once two consecutive widenings fail to move the
//! rightmost root. An argument-principle count over the region that can hold
//! roots to the right of the current maximum decides `certified`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{char_derivative, char_value, coefficients_for, crossing_frequency, CharCoefficients};
use crate::error::{require_non_negative, Error, Result};
use crate::exec::Execution;

/// Tunables of the root search. Defaults follow the documented search box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSearch {
    pub re_min: f64,
    pub re_max: f64,
    /// Upper edge of the imaginary window, as a multiple of `omega*`.
    pub im_max_factor: f64,
    pub re_points: usize,
    pub im_points: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub dedupe_tol: f64,
    /// Residual a refined root must reach to be kept.
    pub accept_residual: f64,
    /// Continuation step for the `tau = 0` roots.
    pub continuation_step: f64,
    pub max_widenings: usize,
    pub execution: Execution,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self {
            re_min: -2.0,
            re_max: 0.5,
            im_max_factor: 4.0,
            re_points: 51,
            im_points: 24,
            newton_tol: 1e-12,
            max_iter: 100,
            dedupe_tol: 1e-8,
            accept_residual: 1e-10,
            continuation_step: 0.25,
            max_widenings: 6,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub tau: f64,
    /// Sorted by real part (descending), then imaginary part (descending).
    pub roots: Vec<Complex64>,
    pub max_real: f64,
    /// `|Delta(root, tau)|`, aligned with `roots`.
    pub residuals: Vec<f64>,
    /// Seeds whose Newton iteration stalled, diverged or missed the residual bar.
    pub failed: usize,
    /// True when an argument-principle count confirms that no root to the
    /// right of `max_real - margin` was missed.
    pub certified: bool,
}

impl SpectrumResult {
    pub fn rightmost(&self) -> Complex64 {
        self.roots[0]
    }

    /// The `k` roots of smallest modulus, sorted by modulus.
    pub fn smallest_modulus(&self, k: usize) -> Vec<Complex64> {
        let mut v = self.roots.clone();
        v.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(b.im.total_cmp(&a.im)));
        v.truncate(k);
        v
    }
}

fn newton(
    mut lambda: Complex64,
    tau: f64,
    k: &CharCoefficients,
    cfg: &RootSearch,
) -> Option<Complex64> {
    for _ in 0..cfg.max_iter {
        // e^{-lambda tau} overflows far in the left half plane
        if !(lambda.re * tau > -600.0) || lambda.norm() > 1e6 {
            return None;
        }
        let f = char_value(lambda, tau, k);
        let df = char_derivative(lambda, tau, k);
        if df.norm() == 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        lambda -= step;
        if step.norm() <= 1e-15 * lambda.norm().max(1e-3) || f.norm() < cfg.newton_tol * 1e-3 {
            // one more step to settle at machine precision
            let f = char_value(lambda, tau, k);
            let df = char_derivative(lambda, tau, k);
            if df.norm() > 0.0 {
                lambda -= f / df;
            }
            break;
        }
    }
    let r = char_value(lambda, tau, k).norm();
    (lambda.is_finite() && r < cfg.newton_tol.max(cfg.accept_residual)).then_some(lambda)
}

/// Roots of `tau = 0`: `lambda^2 + (A + B) lambda + (C + D) = 0`.
fn quadratic_roots(k: &CharCoefficients) -> [Complex64; 2] {
    let p = k.a + k.b;
    let q = k.c + k.d;
    let disc = Complex64::new(p * p - 4.0 * q, 0.0).sqrt();
    let r1 = (-p + disc) * 0.5;
    // the other root via Vieta keeps full precision for real roots
    let r2 = if disc.im == 0.0 && r1.norm() > 0.0 {
        Complex64::new(q, 0.0) / r1
    } else {
        (-p - disc) * 0.5
    };
    [r1, r2]
}

fn continued_roots(k: &CharCoefficients, tau: f64, cfg: &RootSearch) -> Vec<Complex64> {
    let steps = (tau / cfg.continuation_step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    for start in quadratic_roots(k) {
        let mut lambda = start;
        let mut ok = true;
        for s in 1..=steps {
            let t = tau * s as f64 / steps as f64;
            match newton(lambda, t, k, cfg) {
                Some(l) => lambda = l,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(lambda);
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct SearchBox {
    re_min: f64,
    re_max: f64,
    im_max: f64,
}

impl SearchBox {
    fn seeds(&self, cfg: &RootSearch, tau: f64) -> Vec<Complex64> {
        // imaginary spacing must resolve roots roughly 2 pi / tau apart
        let im_points = if tau > 0.0 {
            let needed = (self.im_max / (std::f64::consts::PI / (2.0 * tau))).ceil() as usize + 1;
            cfg.im_points.max(needed).min(4096)
        } else {
            cfg.im_points
        };
        let re_points = cfg.re_points.max(2);
        let mut out = Vec::with_capacity(re_points * im_points);
        for i in 0..re_points {
            let re = self.re_min + (self.re_max - self.re_min) * i as f64 / (re_points - 1) as f64;
            for j in 0..im_points {
                let im = self.im_max * j as f64 / (im_points.max(2) - 1) as f64;
                out.push(Complex64::new(re, im));
            }
        }
        out
    }
}

/// Snap near-real roots onto the real axis, keep the upper half plane,
/// dedupe and sort.
fn canonicalize(
    raw: impl IntoIterator<Item = Complex64>,
    tau: f64,
    k: &CharCoefficients,
    cfg: &RootSearch,
) -> Vec<Complex64> {
    let mut upper: Vec<Complex64> = Vec::new();
    for mut r in raw {
        if r.im.abs() < 1e-9 * r.norm().max(1.0) {
            r.im = 0.0;
            if let Some(real) = newton(r, tau, k, cfg) {
                r = Complex64::new(real.re, 0.0);
            }
        }
        if r.im < 0.0 {
            r = r.conj();
        }
        upper.push(r);
    }
    upper.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let mut unique: Vec<Complex64> = Vec::new();
    for r in upper {
        if unique.iter().all(|u| (*u - r).norm() > cfg.dedupe_tol) {
            unique.push(r);
        }
    }
    unique
}

fn with_conjugates(upper: &[Complex64]) -> Vec<Complex64> {
    let mut all = Vec::with_capacity(upper.len() * 2);
    for &r in upper {
        all.push(r);
        if r.im != 0.0 {
            all.push(r.conj());
        }
    }
    all.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    all
}

/// Upper bound on `|lambda|` for any root with `Re lambda >= s`:
/// `|lambda|^2 <= (A + B e^{-s tau}) |lambda| + (C + D e^{-s tau})`.
fn modulus_bound(k: &CharCoefficients, tau: f64, s: f64) -> f64 {
    let g = (-s * tau).exp().max(1.0);
    let p = k.a + k.b * g;
    let q = k.c + k.d * g;
    0.5 * (p + (p * p + 4.0 * q).sqrt())
}

/// Number of roots of `Delta(., tau)` inside `[re_lo, re_hi] x [-im_hi, im_hi]`
/// by the argument principle. `None` if the contour passes too close to a root.
pub fn count_roots_in_rect(
    k: &CharCoefficients,
    tau: f64,
    re_lo: f64,
    re_hi: f64,
    im_hi: f64,
) -> Option<i64> {
    let corners = [
        Complex64::new(re_lo, -im_hi),
        Complex64::new(re_hi, -im_hi),
        Complex64::new(re_hi, im_hi),
        Complex64::new(re_lo, im_hi),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += edge_winding(k, tau, corners[i], corners[(i + 1) % 4])?;
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    ((turns - rounded).abs() < 1e-3).then_some(rounded as i64)
}

fn edge_winding(k: &CharCoefficients, tau: f64, a: Complex64, b: Complex64) -> Option<f64> {
    let mut total = 0.0;
    // explicit stack of (start, end, f(start), f(end), depth)
    let fa = char_value(a, tau, k);
    let fb = char_value(b, tau, k);
    let mut stack = vec![(a, b, fa, fb, 0u32)];
    while let Some((p, q, fp, fq, depth)) = stack.pop() {
        if fp.norm() < 1e-300 || fq.norm() < 1e-300 {
            return None;
        }
        let d = (fq / fp).arg();
        if (d.abs() > 0.5 || depth < 6) && depth < 40 {
            let m = (p + q) * 0.5;
            let fm = char_value(m, tau, k);
            stack.push((m, q, fm, fq, depth + 1));
            stack.push((p, m, fp, fm, depth + 1));
        } else if d.abs() > 0.5 {
            return None;
        } else {
            total += d;
        }
    }
    Some(total)
}

/// All characteristic roots found by the seeded search (at least `count` when
/// that many exist in reach), including the rightmost one.
pub fn characteristic_roots(
    alpha: f64,
    beta: f64,
    tau: f64,
    count: usize,
) -> Result<SpectrumResult> {
    let (_, k) = coefficients_for(alpha, beta)?;
    characteristic_roots_with(&k, tau, count, &RootSearch::default())
}

pub fn characteristic_roots_with(
    k: &CharCoefficients,
    tau: f64,
    count: usize,
    cfg: &RootSearch,
) -> Result<SpectrumResult> {
    require_non_negative("tau", tau)?;
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            value: 0.0,
            reason: "must be >= 1",
        });
    }

    if tau == 0.0 {
        let roots = with_conjugates(&canonicalize(quadratic_roots(k), 0.0, k, cfg));
        return Ok(finish(roots, 0, true, tau, k));
    }

    let omega = crossing_frequency(k);
    let mut bx = SearchBox {
        re_min: cfg.re_min,
        re_max: cfg.re_max,
        im_max: cfg.im_max_factor * omega,
    };

    let refine = |seeds: &[Complex64]| -> (Vec<Complex64>, usize) {
        let refined = cfg.execution.map(seeds, |&s| newton(s, tau, k, cfg));
        let failed = refined.iter().filter(|r| r.is_none()).count();
        (refined.into_iter().flatten().collect(), failed)
    };

    let mut found: Vec<Complex64> = continued_roots(k, tau, cfg);
    let (first, mut failed) = refine(&bx.seeds(cfg, tau));
    found.extend(first);
    let mut upper = canonicalize(found, tau, k, cfg);

    let mut stale_rounds = 0;
    let mut widenings = 0;
    while widenings < cfg.max_widenings && (stale_rounds < 2 || upper.len() < count) {
        let best = upper.first().map_or(f64::NEG_INFINITY, |r| r.re);
        bx = SearchBox {
            re_min: bx.re_min * 2.0,
            re_max: bx.re_max * 2.0,
            im_max: bx.im_max * 2.0,
        };
        let (more, f) = refine(&bx.seeds(cfg, tau));
        failed += f;
        let before = upper.len();
        upper = canonicalize(upper.into_iter().chain(more), tau, k, cfg);
        let new_best = upper.first().map_or(f64::NEG_INFINITY, |r| r.re);
        if new_best > best + cfg.dedupe_tol || (upper.len() < count && upper.len() > before) {
            stale_rounds = 0;
        } else {
            stale_rounds += 1;
        }
        widenings += 1;
    }

    if upper.is_empty() {
        return Err(Error::NoRoots { failed });
    }

    let mut certified = certify(&upper, tau, k);
    if !certified {
        // dense reseeding of the region that could hide a rightmost root
        let s = upper[0].re - 0.05;
        let r = modulus_bound(k, tau, s);
        let dense = SearchBox {
            re_min: s,
            re_max: r,
            im_max: r,
        };
        let dense_cfg = RootSearch {
            re_points: cfg.re_points * 4,
            im_points: cfg.im_points * 4,
            ..*cfg
        };
        let (more, f) = refine(&dense.seeds(&dense_cfg, tau));
        failed += f;
        upper = canonicalize(upper.into_iter().chain(more), tau, k, cfg);
        certified = certify(&upper, tau, k);
    }

    Ok(finish(with_conjugates(&upper), failed, certified, tau, k))
}

fn certify(upper: &[Complex64], tau: f64, k: &CharCoefficients) -> bool {
    let best = upper[0].re;
    for margin in [0.05, 0.0371, 0.0613] {
        let s = best - margin;
        let r = modulus_bound(k, tau, s) * 1.05 + 1e-3;
        let inside = upper
            .iter()
            .filter(|z| z.re > s && z.re < r)
            .map(|z| if z.im == 0.0 { 1 } else { 2 })
            .sum::<i64>();
        if let Some(n) = count_roots_in_rect(k, tau, s, r, r) {
            return n == inside;
        }
    }
    false
}

fn finish(
    roots: Vec<Complex64>,
    failed: usize,
    certified: bool,
    tau: f64,
    k: &CharCoefficients,
) -> SpectrumResult {
    let residuals = roots
        .iter()
        .map(|&r| char_value(r, tau, k).norm())
        .collect();
    SpectrumResult {
        tau,
        max_real: roots[0].re,
        roots,
        residuals,
        failed,
        certified,
    }
}

/// Real part of the rightmost characteristic root.
pub fn max_real_part(alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    Ok(characteristic_roots(alpha, beta, tau, 1)?.max_real)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::critical_delays;

    fn coeffs(a: f64, b: f64) -> CharCoefficients {
        coefficients_for(a, b).unwrap().1
    }

    #[test]
    fn tau_zero_is_the_quadratic() {
        let k = coeffs(0.5, 0.8);
        let res = characteristic_roots_with(&k, 0.0, 5, &RootSearch::default()).unwrap();
        assert_eq!(res.roots.len(), 2);
        let p = k.a + k.b;
        let q = k.c + k.d;
        let disc = Complex64::new(p * p - 4.0 * q, 0.0).sqrt();
        let oracle = [(-p + disc) / 2.0, (-p - disc) / 2.0];
        for r in &res.roots {
            assert!(r.re < 0.0);
            let best = oracle
                .iter()
                .map(|o| (o - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10);
        }
    }

    #[test]
    fn default_pair_endpoints() {
        let k = coeffs(0.5, 0.8);
        let cfg = RootSearch::default();
        let r31 = characteristic_roots_with(&k, 31.0, 1, &cfg).unwrap();
        assert!((r31.max_real - 0.0000925033).abs() < 1e-5);
        assert!(r31.certified);
        let r25 = characteristic_roots_with(&k, 25.0, 1, &cfg).unwrap();
        assert!((r25.max_real - -0.00386067).abs() < 1e-5);
    }

    #[test]
    fn crossing_root_on_the_axis() {
        let k = coeffs(0.5, 0.8);
        let set = critical_delays(&k, 0);
        let res = characteristic_roots_with(&k, set.tau_star(), 1, &RootSearch::default()).unwrap();
        assert!(res.max_real.abs() < 1e-6);
        assert!((res.rightmost().im.abs() - set.omega_star).abs() < 1e-6);
    }

    #[test]
    fn roots_are_conjugate_closed_and_accurate() {
        let k = coeffs(0.3, 0.9);
        let res = characteristic_roots_with(&k, 40.0, 10, &RootSearch::default()).unwrap();
        assert!(res.roots.len() >= 10);
        for (r, res_v) in res.roots.iter().zip(&res.residuals) {
            assert!(*res_v < 1e-10);
            if r.im != 0.0 {
                assert!(res.roots.iter().any(|s| (*s - r.conj()).norm() < 1e-12));
            }
        }
        for i in 0..res.roots.len() {
            for j in i + 1..res.roots.len() {
                assert!((res.roots[i] - res.roots[j]).norm() > 1e-8);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let k = coeffs(0.6, 0.6);
        let par = characteristic_roots_with(&k, 25.0, 4, &RootSearch::default()).unwrap();
        let seq = characteristic_roots_with(
            &k,
            25.0,
            4,
            &RootSearch {
                execution: Execution::Sequential,
                ..RootSearch::default()
            },
        )
        .unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn argument_principle_counts_quadratic_roots() {
        let k = coeffs(0.5, 0.8);
        // tau = 0: both roots lie in the box
        assert_eq!(count_roots_in_rect(&k, 0.0, -1.0, 1.0, 1.0), Some(2));
        assert_eq!(count_roots_in_rect(&k, 0.0, 0.01, 1.0, 1.0), Some(0));
    }

    #[test]
    fn smallest_modulus_sorted() {
        let k = coeffs(0.5, 0.8);
        let res = characteristic_roots_with(&k, 30.0, 6, &RootSearch::default()).unwrap();
        let small = res.smallest_modulus(6);
        for w in small.windows(2) {
            assert!(w[0].norm() <= w[1].norm());
        }
    }

    #[test]
    fn rejects_negative_delay_and_zero_count() {
        assert!(characteristic_roots(0.5, 0.8, -1.0, 1).is_err());
        assert!(characteristic_roots(0.5, 0.8, 1.0, 0).is_err());
    }
}
