//! Microscopic queueing simulation of one signalised intersection.

mod arrivals;
mod density;
mod engine;
mod horizon;

pub use arrivals::{
    assign_intents, build_stream, generate_arrivals, uniform_arrivals, Intent, TurnFractions, VehicleRecord,
};
pub use density::{compute_density, raw_density};
pub use engine::{Intersection, StreetState};
pub use horizon::{drained_delay, horizon_delay, run_horizon, SimResult};
