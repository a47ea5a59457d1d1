use serde::{Deserialize, Serialize};

use crate::config::{IntersectionConfig, NUM_LANES, NUM_STREETS};
use crate::controllers::{search_window, Prediction};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, label};
use crate::sim::{build_stream, generate_arrivals, Intersection, TurnFractions};

use super::rulebase::{BuildMeta, LevelTuple, RuleBase, NUM_RULES};

pub const BUILDER_VERSION: &str = concat!("signalsim-", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub repetitions: u32,
    pub base_seed: u64,
    pub turns: [TurnFractions; NUM_STREETS],
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { repetitions: 100, base_seed: 0, turns: [TurnFractions::STRAIGHT; NUM_STREETS] }
    }
}

/// Distribution of per-repetition optimal greens for one level tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpread {
    pub levels: [f64; NUM_STREETS],
    /// Stored green: rounded mean of the optima.
    pub green: u32,
    /// Most frequent optimum (smallest on ties).
    pub mode: u32,
    pub min: u32,
    pub max: u32,
    /// Share of optima within ±2 s of the mode.
    pub within_two_of_mode: f64,
    pub optima: Vec<u32>,
}

impl StateSpread {
    fn from_optima(levels: LevelTuple, optima: Vec<u32>, config: &IntersectionConfig) -> Self {
        let mut counts = std::collections::BTreeMap::<u32, u32>::new();
        for &g in &optima {
            *counts.entry(g).or_default() += 1;
        }
        let mode = counts.iter().rev().max_by_key(|(_, &c)| c).map(|(&g, _)| g).unwrap_or(0);
        let near = optima.iter().filter(|&&g| g.abs_diff(mode) <= 2).count();
        let mean = optima.iter().map(|&g| f64::from(g)).sum::<f64>() / optima.len() as f64;
        Self {
            levels: levels.map(|l| l.value()),
            green: config.clamp_green(mean.round() as i64),
            mode,
            min: optima.iter().copied().min().unwrap_or(0),
            max: optima.iter().copied().max().unwrap_or(0),
            within_two_of_mode: near as f64 / optima.len() as f64,
            optima,
        }
    }
}

/// Vehicles per period that read as a level's midpoint density on an
/// empty street.
pub fn level_demand(config: &IntersectionConfig, level: f64) -> u32 {
    (level / NUM_LANES as f64 * f64::from(config.street_capacity_per_period)).round() as u32
}

/// Optimal greens for one level tuple over independently seeded arrival
/// realisations.
pub fn build_state(config: &IntersectionConfig, levels: LevelTuple, opts: &BuildOptions) -> Result<StateSpread> {
    if opts.repetitions == 0 {
        return Err(Error::Config("at least one repetition is required".into()));
    }
    let period = u64::from(config.period_s);
    let demand = levels.map(|l| level_demand(config, l.value()));
    let state = RuleBase::index_of(levels) as u64;
    let mut optima = Vec::with_capacity(opts.repetitions as usize);
    for rep in 0..u64::from(opts.repetitions) {
        let seed = derive_seed(opts.base_seed, &[label::BUILDER, state, rep]);
        let per_street = (0..NUM_STREETS)
            .map(|s| generate_arrivals(demand[s], 0, period, derive_seed(seed, &[label::ARRIVALS, s as u64])))
            .collect::<Result<Vec<_>>>()?;
        let stream = build_stream(&per_street, &opts.turns, derive_seed(seed, &[label::INTENTS]))?;
        let engine = Intersection::new(config, stream);
        optima.push(
            search_window(config, &Prediction::from_engine(engine), config.min_green_s..=config.max_green_s)?.green1,
        );
    }
    Ok(StateSpread::from_optima(levels, optima, config))
}

/// Builds all 625 rules. `progress` sees each state as it completes.
pub fn build_rulebase(
    config: &IntersectionConfig,
    opts: &BuildOptions,
    mut progress: impl FnMut(usize, &StateSpread),
) -> Result<(RuleBase, Vec<StateSpread>)> {
    config.validate()?;
    let mut rb = RuleBase::default();
    let mut spreads = Vec::with_capacity(NUM_RULES);
    for (i, t) in RuleBase::tuples().enumerate() {
        let spread = build_state(config, t, opts)?;
        rb.insert(t, spread.green);
        progress(i, &spread);
        spreads.push(spread);
    }
    rb.meta = Some(BuildMeta {
        base_seed: opts.base_seed,
        repetitions: opts.repetitions,
        builder_version: BUILDER_VERSION.into(),
    });
    Ok((rb, spreads))
}
