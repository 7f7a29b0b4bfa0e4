//! Analysis toolkit for the two-state delayed respiratory control model
//!
//! ```text
//! dx/dt = 1 - alpha * V(x(t - tau), y(t - tau)) * x(t)
//! dy/dt = 1 - beta  * V(x(t - tau), y(t - tau)) * y(t)
//! V(x, y) = 0.14 * exp(-0.05 * (100 - y)) * x
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters, ventilation function, right-hand side, coordinate transform
//! - [`equilibrium`]: Lambert-W closed form for the unique positive fixed point
//! - [`spectrum`]: characteristic quasi-polynomial, crossing frequency, critical delays,
//!   transversality and characteristic roots
//! - [`hopf`]: center-manifold normal form at the first critical delay
//! - [`integrator`]: method-of-steps RK4 simulation with Hermite history
//! - [`scan`]: bifurcation diagrams, stability charts and max-real-part tables
//!
//! Independent work items in [`scan`] and in the root search run on rayon when the
//! `parallel` feature is enabled; [`Execution::Sequential`] forces the serial path.

// `!(a < b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod equilibrium;
pub mod error;
pub mod exec;
pub mod hopf;
pub mod integrator;
pub mod model;
pub mod scan;
pub mod spectrum;

pub use error::{Error, Result};
pub use exec::Execution;
