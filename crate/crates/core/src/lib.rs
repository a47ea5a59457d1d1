//! Discrete-time simulation and signal-timing control of an isolated,
//! two-phase, four-approach intersection.
//!
//! The crate is split into:
//!
//! - [`sim`]: arrival generation, the per-tick queueing engine and density
//!   normalisation.
//! - [`controllers`]: six timing strategies, from a constant split to the
//!   exhaustive and window-restricted delay searches.
//! - [`fuzzy`]: membership functions, the 625-entry rule base and its
//!   offline builder.
//! - [`scenario`]: scenario files, whole-day runs and report export.
//!
//! Density and fuzzy arithmetic is generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix it to `f64` for everyday use.

pub mod config;
pub mod controllers;
pub mod error;
pub mod fuzzy;
pub mod rng;
pub mod scalar;
pub mod scenario;
pub mod sim;

pub use config::{IntersectionConfig, PhasePlan, Signal, NUM_LANES, NUM_STREETS};
pub use controllers::{ControllerDecision, ControllerKind, SensorFrame};
pub use error::{Error, Result};
pub use fuzzy::{DensityLevel, RuleBase};
pub use scalar::Scalar;
pub use scenario::{RunReport, Scenario};
pub use sim::{Intent, SimResult, VehicleRecord};

/// Per-street densities in `[0, 3]`.
pub type Densities = [f64; NUM_STREETS];
/// Membership weights of one street over the five density levels.
pub type Memberships = fuzzy::Memberships<f64>;
/// Single-precision variant of [`Memberships`].
pub type Memberships32 = fuzzy::Memberships<f32>;
