//! Center-manifold normal form at the first critical delay.
//!
//! Time is rescaled so the delay is 1 and `u(t) = (x, y)(tau t) - (x*, y*)`:
//!
//! ```text
//! u'(t) = -tau (A1 u(t) + B1 u(t - 1)) + f(u_t)
//! ```
//!
//! With `g(u, v) = e^{v/20} (1 + u / x*)` and `p, r` the current and `u, v` the
//! delayed coordinates, the full right-hand side is
//! `-tau [(g - 1) + p g / x*]` and `-tau [(g - 1) + r g / y*]`; `f` is what remains
//! after removing the linear part. Its quadratic and cubic Taylor terms feed the
//! `g20, g11, g02, g21` coefficients, and from those the first Lyapunov
//! coefficient `c1(0)` and the direction/stability/period quantities
//! `mu2, beta2, T2`.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibrium::Equilibrium;
use crate::error::{require_positive, Error, Result};
use crate::spectrum::{
    char_coeffs, char_value, coefficients_for, critical_delays, linearize, root_velocity,
    LinearPair,
};

type C = Complex64;
/// A complex 2-vector.
pub type CVec2 = [C; 2];

const I: C = C::new(0.0, 1.0);

/// Largest tolerated `|Delta(i omega, tau)|` for a crossing pair.
pub const CROSSING_TOL: f64 = 1e-8;
const NORMALIZER_MIN: f64 = 1e-12;
const CONDITION_MAX: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfResult {
    pub omega_star: f64,
    pub tau_star: f64,
    /// Second component of `q(0) = (1, c)`.
    pub c: C,
    /// Second component of the adjoint vector `(1, c*)`.
    pub c_star: C,
    /// `D-bar`, scaling the adjoint so that `<q*, q> = 1`.
    pub normalizer: C,
    pub g20: C,
    pub g11: C,
    pub g02: C,
    pub g21: C,
    pub e1: CVec2,
    pub e2: CVec2,
    /// `dlambda/dtau` at `(i omega*, tau*)`.
    pub lambda_prime: C,
    pub c1: C,
    pub mu2: f64,
    pub beta2: f64,
    pub t2: f64,
}

impl HopfResult {
    /// `mu2 > 0`: the periodic orbits exist for `tau > tau*`.
    pub fn is_supercritical(&self) -> bool {
        self.mu2 > 0.0
    }

    /// `mu2` measured in the original (unscaled) delay, `mu2 / tau*`.
    pub fn mu2_unscaled(&self) -> f64 {
        self.mu2 / self.tau_star
    }

    /// Leading-order peak-to-peak amplitude of `x` at `tau = tau* + delta`,
    /// `4 sqrt(delta tau* / mu2)`. `None` on the side without periodic orbits.
    pub fn predicted_amplitude_x(&self, delta: f64) -> Option<f64> {
        let r2 = delta / self.mu2_unscaled();
        (r2 > 0.0).then(|| 4.0 * r2.sqrt())
    }

    /// Same for `y`, scaled by `|c|`.
    pub fn predicted_amplitude_y(&self, delta: f64) -> Option<f64> {
        self.predicted_amplitude_x(delta).map(|a| a * self.c.norm())
    }
}

/// Values of a (complex) history segment at `theta = 0` and `theta = -1`,
/// the only points the nonlinearity reads.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub now: CVec2,
    pub delayed: CVec2,
}

impl Sample {
    fn conj(self) -> Self {
        Self {
            now: [self.now[0].conj(), self.now[1].conj()],
            delayed: [self.delayed[0].conj(), self.delayed[1].conj()],
        }
    }
}

/// Taylor coefficients of the nonlinearity about the equilibrium.
#[derive(Clone, Copy, Debug)]
struct Nonlinearity {
    x: f64,
    y: f64,
    tau: f64,
}

/// Symmetrized product of two linear functionals, `(a1 b2 + b1 a2) / 2`.
fn sym2(a: (C, C), b: (C, C)) -> C {
    0.5 * (a.0 * b.1 + a.1 * b.0)
}

/// Symmetrized product of three linear functionals.
fn sym3(a: (C, C, C), b: (C, C, C), c: (C, C, C)) -> C {
    (a.0 * b.1 * c.2
        + a.0 * b.2 * c.1
        + a.1 * b.0 * c.2
        + a.1 * b.2 * c.0
        + a.2 * b.0 * c.1
        + a.2 * b.1 * c.0)
        / 6.0
}

impl Nonlinearity {
    /// Symmetric bilinear form with `quad(phi, phi)` the quadratic part of `f`.
    fn quad(&self, s: &Sample, t: &Sample) -> CVec2 {
        let (x, y) = (self.x, self.y);
        let [p, r] = s.now;
        let [u, v] = s.delayed;
        let [pp, rr] = t.now;
        let [uu, vv] = t.delayed;
        let uv = sym2((u, uu), (v, vv));
        let vv2 = v * vv;
        let pu = sym2((p, pp), (u, uu));
        let pv = sym2((p, pp), (v, vv));
        let ru = sym2((r, rr), (u, uu));
        let rv = sym2((r, rr), (v, vv));
        let common = uv / (20.0 * x) + vv2 / 800.0;
        [
            -self.tau * (common + pu / (x * x) + pv / (20.0 * x)),
            -self.tau * (common + ru / (x * y) + rv / (20.0 * y)),
        ]
    }

    /// Symmetric trilinear form with `cubic(phi, phi, phi)` the cubic part of `f`.
    fn cubic(&self, a: &Sample, b: &Sample, c: &Sample) -> CVec2 {
        let (x, y) = (self.x, self.y);
        let pick = |i: usize| -> (C, C, C) {
            let get = |s: &Sample| match i {
                0 => s.now[0],
                1 => s.now[1],
                2 => s.delayed[0],
                _ => s.delayed[1],
            };
            (get(a), get(b), get(c))
        };
        let (p, r, u, v) = (pick(0), pick(1), pick(2), pick(3));
        let common = sym3(u, v, v) / (800.0 * x) + sym3(v, v, v) / 48000.0;
        [
            -self.tau * (common + sym3(p, u, v) / (20.0 * x * x) + sym3(p, v, v) / (800.0 * x)),
            -self.tau * (common + sym3(r, u, v) / (20.0 * x * y) + sym3(r, v, v) / (800.0 * y)),
        ]
    }

    /// The complete nonlinear remainder at a real state, used as an oracle.
    #[cfg(test)]
    fn exact(&self, now: [f64; 2], delayed: [f64; 2]) -> [f64; 2] {
        let (x, y) = (self.x, self.y);
        let [p, r] = now;
        let [u, v] = delayed;
        let g = (v / 20.0).exp() * (1.0 + u / x);
        let full = [
            -self.tau * ((g - 1.0) + p * g / x),
            -self.tau * ((g - 1.0) + r * g / y),
        ];
        let lin = [
            -self.tau * (u / x + v / 20.0 + p / x),
            -self.tau * (u / x + v / 20.0 + r / y),
        ];
        [full[0] - lin[0], full[1] - lin[1]]
    }
}

fn cmat(m: &Matrix2<f64>) -> Matrix2<C> {
    m.map(|v| C::new(v, 0.0))
}

fn dot(a: &CVec2, b: &CVec2) -> C {
    a[0] * b[0] + a[1] * b[1]
}

fn scale(k: C, v: &CVec2) -> CVec2 {
    [k * v[0], k * v[1]]
}

fn add(a: &CVec2, b: &CVec2) -> CVec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn conj2(v: &CVec2) -> CVec2 {
    [v[0].conj(), v[1].conj()]
}

fn mat_vec(m: &Matrix2<C>, v: &CVec2) -> CVec2 {
    [
        m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
        m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
    ]
}

/// `i omega I + A1 + B1 e^{-i omega tau}`, which annihilates `q(0)`.
pub fn eigen_matrix(lp: &LinearPair, omega: f64, tau: f64) -> Matrix2<C> {
    let e = (-I * omega * tau).exp();
    Matrix2::identity() * (I * omega) + cmat(&lp.a1) + cmat(&lp.b1) * e
}

/// `-i omega I + A1^T + B1^T e^{i omega tau}`, which annihilates `(1, c*)`.
pub fn adjoint_matrix(lp: &LinearPair, omega: f64, tau: f64) -> Matrix2<C> {
    let e = (I * omega * tau).exp();
    Matrix2::identity() * (-I * omega) + cmat(&lp.a1.transpose()) + cmat(&lp.b1.transpose()) * e
}

fn check_crossing(alpha: f64, beta: f64, eq: &Equilibrium, omega: f64, tau: f64) -> Result<()> {
    let k = char_coeffs(alpha, beta, eq);
    let residual = char_value(C::new(0.0, omega), tau, &k).norm();
    if residual < CROSSING_TOL {
        Ok(())
    } else {
        Err(Error::NotACrossing {
            omega,
            tau,
            residual,
        })
    }
}

/// `c` with `q(0) = (1, c)` and `c*` with adjoint vector `(1, c*)`.
///
/// `c` is read off the second row of the eigen-system; the first row gives the
/// same value on a genuine crossing.
pub fn eigenvectors(
    alpha: f64,
    beta: f64,
    eq: &Equilibrium,
    omega: f64,
    tau: f64,
) -> Result<(C, C)> {
    check_crossing(alpha, beta, eq, omega, tau)?;
    let lp = linearize(alpha, beta, eq);
    let m = eigen_matrix(&lp, omega, tau);
    let c = -m[(1, 0)] / m[(1, 1)];
    let ma = adjoint_matrix(&lp, omega, tau);
    let c_star = -ma[(0, 0)] / ma[(0, 1)];
    Ok((c, c_star))
}

/// Bilinear form
/// `<psi, phi> = conj(psi(0)) . phi(0) - tau * int_{-1}^{0} conj(psi(xi + 1)) B1 phi(xi) dxi`
/// by composite Gauss-Legendre quadrature. `psi` lives on `[0, 1]`, `phi` on `[-1, 0]`.
pub fn bilinear_form(
    psi: impl Fn(f64) -> CVec2,
    phi: impl Fn(f64) -> CVec2,
    b1: &Matrix2<f64>,
    tau: f64,
) -> C {
    // 5-point Gauss-Legendre on each panel
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let b1c = cmat(b1);
    let panels = 64;
    let h = 1.0 / panels as f64;
    let mut integral = C::new(0.0, 0.0);
    for k in 0..panels {
        let mid = -1.0 + (k as f64 + 0.5) * h;
        for (node, w) in NODES.iter().zip(WEIGHTS) {
            let xi = mid + 0.5 * h * node;
            let lhs = conj2(&psi(xi + 1.0));
            integral += 0.5 * h * w * dot(&lhs, &mat_vec(&b1c, &phi(xi)));
        }
    }
    dot(&conj2(&psi(0.0)), &phi(0.0)) - tau * integral
}

/// `D-bar = 1 / (conj(v) . q0 - tau e^{-i omega tau} conj(v) . B1 q0)` with
/// `v = (1, c*)` and `q0 = (1, c)`, the closed form of `<(1, c*) e^{i omega tau s}, q> `.
pub fn normalizer(
    alpha: f64,
    beta: f64,
    eq: &Equilibrium,
    c: C,
    c_star: C,
    omega: f64,
    tau: f64,
) -> Result<C> {
    let lp = linearize(alpha, beta, eq);
    let q0 = [C::new(1.0, 0.0), c];
    let vb = conj2(&[C::new(1.0, 0.0), c_star]);
    let e = (-I * omega * tau).exp();
    let den = dot(&vb, &q0) - tau * e * dot(&vb, &mat_vec(&cmat(&lp.b1), &q0));
    if den.norm() < NORMALIZER_MIN {
        return Err(Error::DegenerateNormalizer(den.norm()));
    }
    Ok(den.inv())
}

/// Everything the coefficient formulas need at one crossing.
#[derive(Clone, Copy, Debug)]
pub struct EigenData {
    pub omega: f64,
    pub tau: f64,
    pub lp: LinearPair,
    /// `q(0) = (1, c)`.
    pub q0: CVec2,
    /// `conj(q*(0)) = D-bar (1, conj(c*))`, the row applied to `f`.
    pub q_star_bar0: CVec2,
    f: Nonlinearity,
}

impl EigenData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        eq: &Equilibrium,
        omega: f64,
        tau: f64,
        c: C,
        c_star: C,
        normalizer: C,
    ) -> Self {
        Self {
            omega,
            tau,
            lp: linearize(alpha, beta, eq),
            q0: [C::new(1.0, 0.0), c],
            q_star_bar0: scale(normalizer, &[C::new(1.0, 0.0), c_star.conj()]),
            f: Nonlinearity {
                x: eq.x_star,
                y: eq.y_star,
                tau,
            },
        }
    }

    /// `q(theta) = q0 e^{i omega tau theta}`, `theta` in `[-1, 0]`.
    pub fn q(&self, theta: f64) -> CVec2 {
        scale((I * self.omega * self.tau * theta).exp(), &self.q0)
    }

    /// `q*(s) = D (1, c*) e^{i omega tau s}`, `s` in `[0, 1]`.
    pub fn q_star(&self, s: f64) -> CVec2 {
        scale(
            (I * self.omega * self.tau * s).exp(),
            &conj2(&self.q_star_bar0),
        )
    }

    fn sample_q(&self) -> Sample {
        Sample {
            now: self.q(0.0),
            delayed: self.q(-1.0),
        }
    }

    fn project(&self, v: &CVec2) -> C {
        dot(&self.q_star_bar0, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GCoefficients {
    pub g20: C,
    pub g11: C,
    pub g02: C,
    pub g21: C,
}

fn sample_of(w: impl Fn(f64) -> CVec2) -> Sample {
    Sample {
        now: w(0.0),
        delayed: w(-1.0),
    }
}

/// `g20 = 2 q*-bar(0) B(q, q)`, `g11 = 2 q*-bar(0) B(q, q-bar)`, `g02 = 2 q*-bar(0) B(q-bar, q-bar)`.
pub fn quadratic_g(data: &EigenData) -> (C, C, C) {
    let q = data.sample_q();
    let qb = q.conj();
    let g20 = 2.0 * data.project(&data.f.quad(&q, &q));
    let g11 = 2.0 * data.project(&data.f.quad(&q, &qb));
    let g02 = 2.0 * data.project(&data.f.quad(&qb, &qb));
    (g20, g11, g02)
}

/// All four coefficients given the center-manifold terms `W20`, `W11`
/// (only their values at `theta = 0` and `theta = -1` are used).
pub fn g_coefficients(
    data: &EigenData,
    w20: impl Fn(f64) -> CVec2,
    w11: impl Fn(f64) -> CVec2,
) -> GCoefficients {
    let (g20, g11, g02) = quadratic_g(data);
    let q = data.sample_q();
    let qb = q.conj();
    let s20 = sample_of(w20);
    let s11 = sample_of(w11);
    let two_q_w11 = scale(C::new(2.0, 0.0), &data.f.quad(&q, &s11));
    let qb_w20 = data.f.quad(&qb, &s20);
    let cubic = scale(C::new(3.0, 0.0), &data.f.cubic(&q, &q, &qb));
    let g21 = 2.0 * data.project(&add(&add(&two_q_w11, &qb_w20), &cubic));
    GCoefficients { g20, g11, g02, g21 }
}

fn condition_estimate(m: &Matrix2<C>) -> (f64, f64) {
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
    // for 2x2, ||M^-1||_F = ||M||_F / |det|
    let fro2: f64 = m.iter().map(|v| v.norm_sqr()).sum();
    (det, if det > 0.0 { fro2 / det } else { f64::INFINITY })
}

fn direct_solve(m: &Matrix2<C>, rhs: &CVec2, what: &'static str) -> Result<CVec2> {
    let (det, condition) = condition_estimate(m);
    if !(condition < CONDITION_MAX) {
        return Err(Error::Singular {
            what,
            det,
            condition,
        });
    }
    let sol = m
        .lu()
        .solve(&Vector2::new(rhs[0], rhs[1]))
        .ok_or(Error::Singular {
            what,
            det,
            condition,
        })?;
    Ok([sol[0], sol[1]])
}

/// Cramer's rule (determinant ratios) for a 2x2 system.
pub fn cramer_solve(m: &Matrix2<C>, rhs: &CVec2) -> CVec2 {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    [
        (rhs[0] * m[(1, 1)] - m[(0, 1)] * rhs[1]) / det,
        (m[(0, 0)] * rhs[1] - rhs[0] * m[(1, 0)]) / det,
    ]
}

/// System matrix and right-hand side for `E1`:
/// `tau (2 i omega I + A1 + B1 e^{-2 i omega tau}) E1 = 2 B(q, q)`.
pub fn e1_system(data: &EigenData) -> (Matrix2<C>, CVec2) {
    let (omega, tau) = (data.omega, data.tau);
    let m = (Matrix2::identity() * (2.0 * I * omega)
        + cmat(&data.lp.a1)
        + cmat(&data.lp.b1) * (-2.0 * I * omega * tau).exp())
        * C::new(tau, 0.0);
    let q = data.sample_q();
    (m, scale(C::new(2.0, 0.0), &data.f.quad(&q, &q)))
}

/// System for `E2`: `tau (A1 + B1) E2 = 2 B(q, q-bar)`. Both sides are real.
pub fn e2_system(data: &EigenData) -> (Matrix2<C>, CVec2) {
    let m = cmat(&((data.lp.a1 + data.lp.b1) * data.tau));
    let q = data.sample_q();
    let rhs = scale(C::new(2.0, 0.0), &data.f.quad(&q, &q.conj()));
    (m, rhs)
}

/// `(E1, E2)` by direct LU solves.
pub fn e_vectors(data: &EigenData) -> Result<(CVec2, CVec2)> {
    let (m1, r1) = e1_system(data);
    let (m2, r2) = e2_system(data);
    Ok((direct_solve(&m1, &r1, "E1")?, direct_solve(&m2, &r2, "E2")?))
}

/// `W20(theta)` and `W11(theta)` on `[-1, 0]`.
pub fn center_manifold_terms(
    data: &EigenData,
    g20: C,
    g11: C,
    g02: C,
    e1: CVec2,
    e2: CVec2,
) -> (impl Fn(f64) -> CVec2, impl Fn(f64) -> CVec2) {
    let wt = data.omega * data.tau;
    let q0 = data.q0;
    let q0b = conj2(&q0);
    let w20 = move |theta: f64| {
        let a = scale(I * g20 / wt * (I * wt * theta).exp(), &q0);
        let b = scale(I * g02.conj() / (3.0 * wt) * (-I * wt * theta).exp(), &q0b);
        add(&add(&a, &b), &scale((2.0 * I * wt * theta).exp(), &e1))
    };
    let w11 = move |theta: f64| {
        let a = scale(-I * g11 / wt * (I * wt * theta).exp(), &q0);
        let b = scale(I * g11.conj() / wt * (-I * wt * theta).exp(), &q0b);
        add(&add(&a, &b), &e2)
    };
    (w20, w11)
}

/// `c1(0) = i / (2 omega tau) (g20 g11 - 2 |g11|^2 - |g02|^2 / 3) + g21 / 2`.
pub fn first_lyapunov(g: &GCoefficients, omega: f64, tau: f64) -> C {
    I / (2.0 * omega * tau) * (g.g20 * g.g11 - 2.0 * g.g11.norm_sqr() - g.g02.norm_sqr() / 3.0)
        + g.g21 / 2.0
}

/// Full pipeline at the first critical delay `tau*(0)`.
pub fn hopf_quantities(alpha: f64, beta: f64) -> Result<HopfResult> {
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    let (eq, k) = coefficients_for(alpha, beta)?;
    let set = critical_delays(&k, 0);
    let (omega, tau) = (set.omega_star, set.tau_star());

    let (c, c_star) = eigenvectors(alpha, beta, &eq, omega, tau)?;
    let nz = normalizer(alpha, beta, &eq, c, c_star, omega, tau)?;
    let data = EigenData::new(alpha, beta, &eq, omega, tau, c, c_star, nz);

    let (g20, g11, g02) = quadratic_g(&data);
    let (e1, e2) = e_vectors(&data)?;
    let (w20, w11) = center_manifold_terms(&data, g20, g11, g02, e1, e2);
    let g = g_coefficients(&data, w20, w11);
    let c1 = first_lyapunov(&g, omega, tau);

    let lambda_prime = root_velocity(&k, C::new(0.0, omega), tau);
    let mu2 = -c1.re / lambda_prime.re;
    let beta2 = 2.0 * c1.re;
    let t2 = -(c1.im + mu2 * lambda_prime.im) / (omega * tau);

    Ok(HopfResult {
        omega_star: omega,
        tau_star: tau,
        c,
        c_star,
        normalizer: nz,
        g20: g.g20,
        g11: g.g11,
        g02: g.g02,
        g21: g.g21,
        e1,
        e2,
        lambda_prime,
        c1,
        mu2,
        beta2,
        t2,
    })
}
