use std::ops::RangeInclusive;

use crate::config::{IntersectionConfig, PhasePlan, NUM_STREETS};
use crate::error::{Error, Result};
use crate::fuzzy::{infer_green, RuleBase};
use crate::rng::{derive_seed, label};
use crate::sim::{build_stream, compute_density, uniform_arrivals, Intersection, TurnFractions};

use super::{ControllerDecision, SensorFrame};

/// Seconds either side of the fuzzy estimate searched by the hybrid controller.
pub const FUZZY_WINDOW_S: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub green1: u32,
    pub delay: u64,
    pub candidates: u32,
}

/// What a searching controller knows at a period boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forecast {
    /// Counts from the period just ended; its `period_index` is the period
    /// being planned.
    pub frame: SensorFrame,
    /// Vehicles between the sensors at the boundary.
    pub queue: [u32; NUM_STREETS],
    pub turns: [TurnFractions; NUM_STREETS],
    /// Plan of the cycle in progress at the boundary, if the boundary falls
    /// mid-cycle. It stays in force until that cycle ends.
    pub running_plan: Option<PhasePlan>,
    /// Seed for the turn intents of predicted vehicles.
    pub seed: u64,
}

impl Forecast {
    /// Forecast for a period starting on a cycle boundary.
    pub fn new(frame: SensorFrame, queue: [u32; NUM_STREETS], turns: [TurnFractions; NUM_STREETS], seed: u64) -> Self {
        Self { frame, queue, turns, running_plan: None, seed }
    }
}

/// Predicted traffic over one period, ready to score candidate plans.
///
/// The period opens with `queue` vehicles waiting and `fir` arrivals per
/// street spread at a uniform rate. Every candidate sees the same vehicles.
#[derive(Debug, Clone)]
pub struct Prediction {
    engine: Intersection,
    /// Cycle offset at which the period starts.
    start_offset: u32,
    running_plan: Option<PhasePlan>,
}

impl Prediction {
    pub fn new(config: &IntersectionConfig, forecast: &Forecast) -> Result<Self> {
        let period = u64::from(config.period_s);
        let per_street: Vec<Vec<u64>> = forecast.frame.fir.iter().map(|&n| uniform_arrivals(n, 0, period)).collect();
        let stream = build_stream(&per_street, &forecast.turns, derive_seed(forecast.seed, &[label::INTENTS]))?;
        let mut engine = Intersection::new(config, stream);

        let waiting: Vec<Vec<u64>> = forecast.queue.iter().map(|&q| vec![0; q as usize]).collect();
        let waiting = build_stream(&waiting, &forecast.turns, derive_seed(forecast.seed, &[label::PREDICTION]))?;
        for s in 0..NUM_STREETS {
            let intents: Vec<_> = waiting.iter().filter(|v| usize::from(v.street) == s).map(|v| v.intent).collect();
            engine.preload(s, &intents, 0);
        }
        let start = forecast.frame.period_index as u64 * period;
        let start_offset = (start % u64::from(config.cycle_length_s)) as u32;
        let running_plan = forecast.running_plan.filter(|_| start_offset != 0);
        Ok(Self { engine, start_offset, running_plan })
    }

    /// Predicts from an explicit intersection state, starting on a cycle boundary.
    pub fn from_engine(engine: Intersection) -> Self {
        Self { engine, start_offset: 0, running_plan: None }
    }

    pub fn engine(&self) -> &Intersection {
        &self.engine
    }

    /// Delay of all predicted vehicles when `plan` governs every cycle that
    /// starts in the period and beyond, draining for up to `drain_limit_s`.
    pub fn delay(&self, config: &IntersectionConfig, plan: &PhasePlan) -> u64 {
        let cycle = config.cycle_length_s;
        let horizon = u64::from(config.period_s);
        let limit = horizon + u64::from(config.drain_limit_s);
        let lead = u64::from((cycle - self.start_offset) % cycle);
        let new: Vec<_> = (0..cycle).map(|o| plan.signals_at(o)).collect();
        let old: Vec<_> = match self.running_plan {
            Some(p) => (0..cycle).map(|o| p.signals_at(o)).collect(),
            None => new.clone(),
        };
        let mut engine = self.engine.clone();
        for t in 0..limit {
            if t >= horizon && engine.is_idle() {
                break;
            }
            let offset = ((u64::from(self.start_offset) + t) % u64::from(cycle)) as usize;
            let signals = if t < lead { &old[offset] } else { &new[offset] };
            engine.step(signals, t);
        }
        engine.total_delay()
    }
}

/// Scores every phase-1 green in `greens` and returns the least-delay one.
/// Ties go to the smaller green.
pub fn search_window(
    config: &IntersectionConfig,
    prediction: &Prediction,
    greens: RangeInclusive<u32>,
) -> Result<SearchOutcome> {
    let mut best: Option<SearchOutcome> = None;
    let mut candidates = 0;
    for g in greens {
        let delay = prediction.delay(config, &config.plan(g)?);
        candidates += 1;
        if best.is_none_or(|b| delay < b.delay) {
            best = Some(SearchOutcome { green1: g, delay, candidates: 0 });
        }
    }
    let mut best = best.ok_or_else(|| Error::Config("empty green search range".into()))?;
    best.candidates = candidates;
    Ok(best)
}

fn decision(config: &IntersectionConfig, out: SearchOutcome, initial_green: Option<u32>) -> Result<ControllerDecision> {
    Ok(ControllerDecision {
        plan: config.plan(out.green1)?,
        predicted_delay: Some(out.delay),
        candidates_evaluated: out.candidates,
        initial_green,
    })
}

/// Exhaustive search over every feasible phase-1 green.
pub fn realtime_optimize(config: &IntersectionConfig, forecast: &Forecast) -> Result<ControllerDecision> {
    config.validate()?;
    let prediction = Prediction::new(config, forecast)?;
    let out = search_window(config, &prediction, config.min_green_s..=config.max_green_s)?;
    decision(config, out, None)
}

fn fuzzy_green(config: &IntersectionConfig, forecast: &Forecast, rulebase: Option<&RuleBase>) -> Result<u32> {
    let rulebase = rulebase.ok_or(Error::MissingRuleBase)?;
    let densities: [f64; NUM_STREETS] = compute_density(&forecast.queue, &forecast.frame.fir, config)?;
    infer_green(&densities, rulebase, config)
}

/// Rule-base lookup only.
pub fn fuzzy_decide(
    config: &IntersectionConfig,
    forecast: &Forecast,
    rulebase: Option<&RuleBase>,
) -> Result<ControllerDecision> {
    let g0 = fuzzy_green(config, forecast, rulebase)?;
    Ok(ControllerDecision { initial_green: Some(g0), ..ControllerDecision::fixed(config.plan(g0)?) })
}

/// Greens searched around a fuzzy estimate, clipped to the bounds.
pub fn fuzzy_window(config: &IntersectionConfig, g0: u32) -> RangeInclusive<u32> {
    let lo = g0.saturating_sub(FUZZY_WINDOW_S).max(config.min_green_s);
    let hi = (g0 + FUZZY_WINDOW_S).min(config.max_green_s);
    lo..=hi
}

/// Fuzzy estimate refined by searching the greens within
/// [`FUZZY_WINDOW_S`] of it.
pub fn fuzzyreal_optimize(
    config: &IntersectionConfig,
    forecast: &Forecast,
    rulebase: Option<&RuleBase>,
) -> Result<ControllerDecision> {
    config.validate()?;
    let g0 = fuzzy_green(config, forecast, rulebase)?;
    let prediction = Prediction::new(config, forecast)?;
    let out = search_window(config, &prediction, fuzzy_window(config, g0))?;
    decision(config, out, Some(g0))
}
