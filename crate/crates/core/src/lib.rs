//! Simulation of an ultra-dispersive prism made of coherently driven atomic
//! vapor.
//!
//! A control beam with a Gaussian transverse profile dresses a Λ medium; the
//! resulting electromagnetically induced transparency gives a probe beam a
//! refractive index that is steep in frequency and graded across the control
//! beam. The probe is then deflected by an angle that depends strongly on its
//! two-photon detuning. The crate models this with
//!
//! * [`physics`]: closed-form complex susceptibility and index gradients,
//! * [`ray`]: paraxial ray tracing through the graded slab,
//! * [`wave`]: split-step and angular-spectrum scalar wave propagation,
//! * [`experiment`]: detuning sweeps, dispersion and resolution figures,
//! * [`config`] and [`commands`]: the command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod parallel;
pub mod physics;
pub mod ray;
pub mod wave;

pub use config::{parse_config, RunConfig};
pub use error::{PrismError, Result};
pub use experiment::{default_scene, Scene, SweepRow};
pub use parallel::Execution;
pub use physics::{ControlField, Detuning, MediumParams, Susceptibility};
