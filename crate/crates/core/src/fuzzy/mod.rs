//! Density fuzzification, the 625-rule base and rule-base construction.

mod builder;
mod membership;
mod rulebase;

pub use builder::{build_rulebase, build_state, level_demand, BuildOptions, StateSpread};
pub use membership::{fuzzify, infer_green, DensityLevel, Memberships, LEVEL_HALF_WIDTH, NUM_LEVELS};
pub use rulebase::{BuildMeta, LevelTuple, RuleBase, NUM_RULES};
