//! Simulator and metrology toolkit for a sealed-chamber pneumatic force
//! sensor.
//!
//! A piston compresses a sealed air chamber; the chamber pressure, read by a
//! linear differential transducer, measures the applied force. This crate
//! covers the full workflow around that principle:
//!
//! - [`model`]: physical types and the pure pressure/force/volume/voltage
//!   conversions.
//! - [`dynamics`]: the nonlinear pressure and motion equations with
//!   Coulomb and viscous friction (Karnopp stiction), hard stops, a
//!   fixed-step RK4 integrator, and force-input profiles.
//! - [`dimensioning`]: force/pressure/diameter sizing and the ideal-gas
//!   laws.
//! - [`calibration`]: load schedules, dataset synthesis through the
//!   simulator, and the six-series dataset CSV format.
//! - [`metrology`]: error metrics, the eight-component
//!   uncertainty budget, least-squares interpolation, and class assignment.
//! - [`cli`]: the `simulate`, `dimension`, `synth`, and `analyze`
//!   subcommands.
//!
//! Start with the `examples/` directory: each file is a runnable walkthrough
//! of one capability.

pub mod calibration;
pub mod cli;
pub mod config;
pub mod dimensioning;
pub mod dynamics;
pub mod error;
pub mod metrology;
pub mod model;

pub use error::{Error, Result};
