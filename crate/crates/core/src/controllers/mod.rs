//! Signal-timing strategies. Each returns a [`ControllerDecision`] holding the
//! plan applied to every cycle that starts in the coming period.

mod pretimed;
mod queue;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{PhasePlan, NUM_STREETS};
use crate::error::Error;

pub use pretimed::{fixed_time, pretimed, proportional_plan, segmental_pretimed};
pub use queue::{estimate_queue, QueueEstimate};
pub use search::{
    fuzzy_decide, fuzzy_window, fuzzyreal_optimize, realtime_optimize, search_window, Forecast, Prediction,
    SearchOutcome, FUZZY_WINDOW_S,
};

/// Sensor counts delivered at the end of a data-submission period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorFrame {
    pub period_index: usize,
    /// Vehicles over each entry sensor.
    pub fir: [u32; NUM_STREETS],
    /// Vehicles over each stop-line sensor.
    pub for_: [u32; NUM_STREETS],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllerDecision {
    pub plan: PhasePlan,
    /// Delay predicted for the chosen plan, for searching controllers.
    pub predicted_delay: Option<u64>,
    pub candidates_evaluated: u32,
    /// Fuzzy estimate the decision started from, if any.
    pub initial_green: Option<u32>,
}

impl ControllerDecision {
    pub(crate) fn fixed(plan: PhasePlan) -> Self {
        Self { plan, predicted_delay: None, candidates_evaluated: 1, initial_green: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Fixed,
    Pretimed,
    Segmental,
    Fuzzy,
    Realtime,
    FuzzyReal,
}

impl ControllerKind {
    /// Report order.
    pub const ALL: [ControllerKind; 6] = [
        ControllerKind::Fixed,
        ControllerKind::Pretimed,
        ControllerKind::Segmental,
        ControllerKind::Fuzzy,
        ControllerKind::Realtime,
        ControllerKind::FuzzyReal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ControllerKind::Fixed => "fixed",
            ControllerKind::Pretimed => "pretimed",
            ControllerKind::Segmental => "segmental",
            ControllerKind::Fuzzy => "fuzzy",
            ControllerKind::Realtime => "realtime",
            ControllerKind::FuzzyReal => "fuzzyreal",
        }
    }

    pub fn needs_rulebase(self) -> bool {
        matches!(self, ControllerKind::Fuzzy | ControllerKind::FuzzyReal)
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControllerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Config(format!("unknown controller `{s}`")))
    }
}
