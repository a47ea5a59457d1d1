use serde::{Deserialize, Serialize};

use crate::config::{IntersectionConfig, PhasePlan, NUM_STREETS};
use crate::error::{Error, Result};

use super::arrivals::VehicleRecord;
use super::engine::Intersection;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimResult {
    /// Queue length of each street after every tick.
    pub queue_series: [Vec<u32>; NUM_STREETS],
    /// Total queue over all streets after every tick.
    pub sqs_series: Vec<u32>,
    /// Vehicle-seconds per street (area under its queue curve).
    pub delay_per_street: [u64; NUM_STREETS],
    pub total_delay: u64,
    pub max_sqs: u32,
    pub vehicles_processed: u64,
    /// Ticks each street spent in the critical state.
    pub critical_ticks: [u64; NUM_STREETS],
    pub vehicles: Vec<VehicleRecord>,
}

/// Signals for `tick` given one plan per cycle, cycle 0 starting at tick 0.
fn plan_for(config: &IntersectionConfig, schedule: &[PhasePlan], tick: u64) -> (PhasePlan, u32) {
    let c = u64::from(config.cycle_length_s);
    (schedule[(tick / c) as usize], (tick % c) as u32)
}

fn check_schedule(config: &IntersectionConfig, schedule: &[PhasePlan], horizon: u64) -> Result<()> {
    let covered = schedule.len() as u64 * u64::from(config.cycle_length_s);
    if covered < horizon {
        return Err(Error::ScheduleTooShort { covered, horizon });
    }
    if let Some(p) = schedule.iter().find(|p| p.cycle_length_s() != config.cycle_length_s) {
        return Err(Error::Config(format!("plan {p:?} does not fill a {} s cycle", config.cycle_length_s)));
    }
    Ok(())
}

/// Runs `engine` over ticks `0..horizon`, one plan per cycle, recording
/// the queue series.
pub fn run_horizon(
    config: &IntersectionConfig,
    mut engine: Intersection,
    schedule: &[PhasePlan],
    horizon: u64,
) -> Result<SimResult> {
    check_schedule(config, schedule, horizon)?;
    let n = horizon as usize;
    let mut queue_series: [Vec<u32>; NUM_STREETS] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut sqs_series = Vec::with_capacity(n);
    let mut critical_ticks = [0u64; NUM_STREETS];
    for t in 0..horizon {
        let (plan, offset) = plan_for(config, schedule, t);
        engine.step(&plan.signals_at(offset), t);
        let mut sqs = 0;
        for (s, st) in engine.streets().iter().enumerate() {
            queue_series[s].push(st.queue_len);
            critical_ticks[s] += u64::from(st.critical);
            sqs += st.queue_len;
        }
        sqs_series.push(sqs);
    }
    let delay_per_street = std::array::from_fn(|s| engine.streets()[s].delay_accum);
    let vehicles_processed = engine.streets().iter().map(|s| s.departed_total).sum();
    Ok(SimResult {
        queue_series,
        max_sqs: sqs_series.iter().copied().max().unwrap_or(0),
        sqs_series,
        delay_per_street,
        total_delay: delay_per_street.iter().sum(),
        vehicles_processed,
        critical_ticks,
        vehicles: engine.into_vehicles(),
    })
}

/// Total delay of `engine` over `0..horizon` under one repeated plan. No
/// series are recorded.
pub fn horizon_delay(config: &IntersectionConfig, engine: Intersection, plan: &PhasePlan, horizon: u64) -> u64 {
    drained_delay(config, engine, plan, horizon, 0)
}

/// Like [`horizon_delay`], but keeps the plan running past `horizon` until
/// every vehicle has left or `drain_limit` further ticks have elapsed.
pub fn drained_delay(
    config: &IntersectionConfig,
    mut engine: Intersection,
    plan: &PhasePlan,
    horizon: u64,
    drain_limit: u64,
) -> u64 {
    let cycle = config.cycle_length_s;
    let signals: Vec<_> = (0..cycle).map(|o| plan.signals_at(o)).collect();
    for t in 0..horizon {
        engine.step(&signals[(t % u64::from(cycle)) as usize], t);
    }
    for t in horizon..horizon + drain_limit {
        if engine.is_idle() {
            break;
        }
        engine.step(&signals[(t % u64::from(cycle)) as usize], t);
    }
    engine.total_delay()
}
