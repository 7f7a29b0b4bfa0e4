//! Linear stability of the positive equilibrium.
//!
//! Linearizing about `(x*, y*)` gives `u' + A1 u + B1 u(t - tau) = 0` and the
//! characteristic quasi-polynomial
//!
//! ```text
//! Delta(lambda, tau) = lambda^2 + (A + B e^{-lambda tau}) lambda + (C + D e^{-lambda tau})
//! ```
//!
//! Purely imaginary roots `i omega` exist only at the single crossing frequency
//! `omega*` (the positive root of `-Y^2 + M Y + N`, `Y = omega^2`), and they
//! occur on the discrete family of critical delays returned by
//! [`critical_delays`].

mod roots;

use std::f64::consts::TAU as TWO_PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{equilibrium, Equilibrium};
use crate::error::{require_positive, Result};
use crate::model::ventilation_gradient;

pub use roots::{
    characteristic_roots, characteristic_roots_with, count_roots_in_rect, max_real_part,
    RootSearch, SpectrumResult,
};

/// Non-delayed (`a1`) and delayed (`b1`) coefficient matrices of the linearization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPair {
    pub a1: Matrix2<f64>,
    pub b1: Matrix2<f64>,
}

impl LinearPair {
    /// `det(lambda I + A1 + B1 e^{-tau lambda})`, straight from the matrices.
    pub fn char_determinant(&self, lambda: Complex64, tau: f64) -> Complex64 {
        let e = (-lambda * tau).exp();
        let m = |i: usize, j: usize| {
            let diag = if i == j {
                lambda
            } else {
                Complex64::new(0.0, 0.0)
            };
            diag + self.a1[(i, j)] + self.b1[(i, j)] * e
        };
        m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)
    }
}

/// `exp((y* - 100) / 20)`, the common exponential factor of every coefficient.
fn exp_factor(eq: &Equilibrium) -> f64 {
    ((eq.y_star - 100.0) / 20.0).exp()
}

pub fn linearize(alpha: f64, beta: f64, eq: &Equilibrium) -> LinearPair {
    let (x, y) = (eq.x_star, eq.y_star);
    let e = exp_factor(eq);
    let a1 = Matrix2::new(
        7.0 / 50.0 * alpha * x * e,
        0.0,
        0.0,
        7.0 / 50.0 * beta * x * e,
    );
    let b1 = Matrix2::new(
        7.0 / 50.0 * alpha * x * e,
        7.0 * alpha * x * x * e / 1000.0,
        7.0 / 50.0 * beta * e * y,
        7.0 * beta * x * e * y / 1000.0,
    );
    LinearPair { a1, b1 }
}

/// Coefficients of the characteristic quasi-polynomial plus the derived
/// `M = -A^2 + B^2 + 2C` and `N = D^2 - C^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub m: f64,
    pub n: f64,
}

impl CharCoefficients {
    pub fn from_abcd(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self {
            a,
            b,
            c,
            d,
            m: -a * a + b * b + 2.0 * c,
            n: -c * c + d * d,
        }
    }

    /// `Phi(Y) = -Y^2 + M Y + N`.
    pub fn phi(&self, y: f64) -> f64 {
        -y * y + self.m * y + self.n
    }
}

pub fn char_coeffs(alpha: f64, beta: f64, eq: &Equilibrium) -> CharCoefficients {
    let (x, y) = (eq.x_star, eq.y_star);
    let e = exp_factor(eq);
    let e2 = e * e;
    let a = 7.0 / 50.0 * alpha * x * e + 7.0 / 50.0 * beta * x * e;
    let b = 7.0 / 50.0 * alpha * x * e + 7.0 * beta * x * e * y / 1000.0;
    let c = 49.0 * alpha * beta * x * x * e2 / 2500.0;
    let d = c + 49.0 * alpha * beta * x * x * e2 * y / 50000.0;
    let coeffs = CharCoefficients::from_abcd(a, b, c, d);
    debug_assert!(coeffs.a > 0.0 && coeffs.b > 0.0 && coeffs.c > 0.0 && coeffs.d > 0.0);
    debug_assert!(coeffs.n > 0.0);
    coeffs
}

/// Equilibrium and coefficients in one step.
pub fn coefficients_for(alpha: f64, beta: f64) -> Result<(Equilibrium, CharCoefficients)> {
    let eq = equilibrium(alpha, beta)?;
    Ok((eq, char_coeffs(alpha, beta, &eq)))
}

#[inline]
pub fn char_value(lambda: Complex64, tau: f64, k: &CharCoefficients) -> Complex64 {
    let e = (-lambda * tau).exp();
    lambda * lambda + (k.a + k.b * e) * lambda + (k.c + k.d * e)
}

/// `dDelta/dlambda = 2 lambda + A + B e^{-lambda tau} - tau e^{-lambda tau} (B lambda + D)`.
#[inline]
pub fn char_derivative(lambda: Complex64, tau: f64, k: &CharCoefficients) -> Complex64 {
    let e = (-lambda * tau).exp();
    2.0 * lambda + k.a + k.b * e - tau * e * (k.b * lambda + k.d)
}

/// The unique `omega* > 0` with `Phi(omega*^2) = 0`.
pub fn crossing_frequency(k: &CharCoefficients) -> f64 {
    let y = 0.5 * (k.m + (k.m * k.m + 4.0 * k.n).sqrt());
    y.sqrt()
}

/// Which of the two closed-form curve families a critical delay belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `tau_1(n) = (theta + 2 pi n) / omega*`: genuine crossings.
    Plus,
    /// `tau_2(n) = (2 pi n - theta) / omega*`: the mirrored family drawn
    /// alongside `tau_1` in stability charts. These are not roots of `Delta`.
    Minus,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoint {
    pub branch: Branch,
    pub n: u32,
    pub tau: f64,
    /// Max-abs residual of the real/imaginary crossing equations.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingSet {
    pub omega_star: f64,
    /// Phase `theta = omega* tau_1(0)` in `[0, 2 pi)`.
    pub theta: f64,
    /// Sorted ascending; the first entry is `tau*(0)`.
    pub points: Vec<CrossingPoint>,
}

impl CrossingSet {
    /// The first critical delay `tau*(0)`.
    pub fn tau_star(&self) -> f64 {
        self.points[0].tau
    }

    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }
}

/// `(sin(tau omega), cos(tau omega))` solving
///
/// ```text
/// C - omega^2 = -B omega sin - D cos
/// A omega     =  D sin - B omega cos
/// ```
pub fn crossing_phase(k: &CharCoefficients, omega: f64) -> (f64, f64) {
    let den = k.b * k.b * omega * omega + k.d * k.d;
    let s = (k.a * k.d * omega - k.b * omega * (k.c - omega * omega)) / den;
    let c = (-k.a * k.b * omega * omega - k.d * (k.c - omega * omega)) / den;
    (s, c)
}

/// Max-abs residual of the real/imaginary crossing equations at `(omega, tau)`.
pub fn crossing_residual(k: &CharCoefficients, omega: f64, tau: f64) -> f64 {
    let (s, c) = (tau * omega).sin_cos();
    let re = (k.c - omega * omega) + k.b * omega * s + k.d * c;
    let im = k.a * omega - k.d * s + k.b * omega * c;
    re.abs().max(im.abs())
}

fn principal_phase(k: &CharCoefficients, omega: f64) -> f64 {
    let (s, c) = crossing_phase(k, omega);
    s.atan2(c).rem_euclid(TWO_PI)
}

/// Critical delays `tau_1(n)`, `n = 0..=n_max`, at which `+-i omega*` are roots.
pub fn critical_delays(k: &CharCoefficients, n_max: u32) -> CrossingSet {
    let omega = crossing_frequency(k);
    let theta = principal_phase(k, omega);
    let points = (0..=n_max)
        .map(|n| {
            let tau = (theta + TWO_PI * f64::from(n)) / omega;
            CrossingPoint {
                branch: Branch::Plus,
                n,
                tau,
                residual: crossing_residual(k, omega, tau),
            }
        })
        .collect();
    CrossingSet {
        omega_star: omega,
        theta,
        points,
    }
}

/// The mirrored curve family `tau_2(n) = (2 pi n - theta) / omega*`,
/// `n = 1..=n_max`, with the crossing residual each point actually has.
pub fn mirror_delays(k: &CharCoefficients, n_max: u32) -> Vec<CrossingPoint> {
    let omega = crossing_frequency(k);
    let theta = principal_phase(k, omega);
    (1..=n_max)
        .map(|n| {
            let tau = (TWO_PI * f64::from(n) - theta) / omega;
            CrossingPoint {
                branch: Branch::Minus,
                n,
                tau,
                residual: crossing_residual(k, omega, tau),
            }
        })
        .collect()
}

/// `Re[(dlambda/dtau)^-1]` at `lambda = i omega` on a critical curve:
/// `(N + omega^4) / (omega^2 (B^2 omega^2 + D^2))`.
pub fn transversality(k: &CharCoefficients, omega: f64) -> f64 {
    let w2 = omega * omega;
    (k.n + w2 * w2) / (w2 * (k.b * k.b * w2 + k.d * k.d))
}

/// `(dlambda/dtau)^-1` at a root `lambda` of `Delta(., tau)`, in the reduced form
/// `-(AD - BC + B lambda^2 + 2 D lambda) / (lambda (A lambda + C + lambda^2)(B lambda + D)) - tau / lambda`.
pub fn inverse_root_velocity(k: &CharCoefficients, lambda: Complex64, tau: f64) -> Complex64 {
    let num = k.a * k.d - k.b * k.c + k.b * lambda * lambda + 2.0 * k.d * lambda;
    let den = lambda * (k.a * lambda + k.c + lambda * lambda) * (k.b * lambda + k.d);
    -num / den - tau / lambda
}

/// `dlambda/dtau` at a root, the inverse of [`inverse_root_velocity`].
pub fn root_velocity(k: &CharCoefficients, lambda: Complex64, tau: f64) -> Complex64 {
    inverse_root_velocity(k, lambda, tau).inv()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CookeOutcome {
    /// `V* >= x* V_x* + y* V_y*`: stable for every `tau >= 0`.
    DelayIndependentStable,
    /// `V* < x* V_x* + y* V_y*`: stable on `[0, tau*)`, unstable beyond.
    FiniteCriticalDelay { tau_star: f64 },
}

/// The quantities compared by the stability dichotomy, kept for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CookeReport {
    pub v_star: f64,
    pub x_vx: f64,
    pub y_vy: f64,
    pub outcome: CookeOutcome,
}

pub fn cooke_dichotomy(alpha: f64, beta: f64) -> Result<CookeReport> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    let (eq, k) = coefficients_for(alpha, beta)?;
    let v_star = eq.ventilation();
    let (vx, vy) = ventilation_gradient(eq.x_star, eq.y_star);
    let x_vx = eq.x_star * vx;
    let y_vy = eq.y_star * vy;
    let outcome = if v_star >= x_vx + y_vy {
        CookeOutcome::DelayIndependentStable
    } else {
        CookeOutcome::FiniteCriticalDelay {
            tau_star: critical_delays(&k, 0).tau_star(),
        }
    };
    Ok(CookeReport {
        v_star,
        x_vx,
        y_vy,
        outcome,
    })
}
