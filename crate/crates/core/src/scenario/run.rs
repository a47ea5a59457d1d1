use std::time::Instant;

use crate::config::{IntersectionConfig, PhasePlan, NUM_STREETS};
use crate::controllers::{
    estimate_queue, fixed_time, fuzzy_decide, fuzzyreal_optimize, pretimed, realtime_optimize, segmental_pretimed,
    ControllerDecision, ControllerKind, Forecast, SensorFrame,
};
use crate::error::{Error, Result};
use crate::fuzzy::RuleBase;
use crate::rng::{derive_seed, label};
use crate::sim::{build_stream, generate_arrivals, Intersection, SimResult, VehicleRecord};

use super::file::Scenario;
use super::report::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Periods per segment for the segmental controller.
    pub segment_len: usize,
    /// Overrides the scenario's master seed.
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { segment_len: 4, seed: None }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub report: RunReport,
    pub result: SimResult,
    pub decisions: Vec<ControllerDecision>,
}

/// The day's vehicles: per-period normal arrivals for every street, merged
/// and given turn intents. Depends only on the scenario and `seed`.
pub fn arrival_stream(config: &IntersectionConfig, scenario: &Scenario, seed: u64) -> Result<Vec<VehicleRecord>> {
    let period = u64::from(config.period_s);
    let mut per_street: Vec<Vec<u64>> = vec![Vec::new(); NUM_STREETS];
    for (s, ticks) in per_street.iter_mut().enumerate() {
        for (k, &flow) in scenario.flows[s].iter().enumerate() {
            let stream_seed = derive_seed(seed, &[label::ARRIVALS, s as u64, k as u64]);
            ticks.extend(generate_arrivals(flow, k as u64 * period, period, stream_seed)?);
        }
    }
    build_stream(&per_street, &scenario.turns, derive_seed(seed, &[label::INTENTS]))
}

pub fn run_scenario(
    config: &IntersectionConfig,
    scenario: &Scenario,
    kind: ControllerKind,
    rulebase: Option<&RuleBase>,
    opts: &RunOptions,
) -> Result<ScenarioRun> {
    let seed = opts.seed.unwrap_or(scenario.master_seed);
    let stream = arrival_stream(config, scenario, seed)?;
    run_with_stream(config, scenario, kind, rulebase, opts, stream)
}

/// Runs one controller over the whole scenario on a given arrival stream.
///
/// At each period boundary the controller sees the previous period's sensor
/// counts and the queue estimate from all counts so far. Period 0 has no
/// sensor history and is primed with the scenario's own first-period flows.
pub fn run_with_stream(
    config: &IntersectionConfig,
    scenario: &Scenario,
    kind: ControllerKind,
    rulebase: Option<&RuleBase>,
    opts: &RunOptions,
    stream: Vec<VehicleRecord>,
) -> Result<ScenarioRun> {
    config.validate()?;
    scenario.validate()?;
    if scenario.period_s != config.period_s {
        return Err(Error::Config(format!(
            "scenario period {} s differs from the configured {} s",
            scenario.period_s, config.period_s
        )));
    }
    if kind.needs_rulebase() && rulebase.is_none() {
        return Err(Error::MissingRuleBase);
    }
    let started = Instant::now();
    let seed = opts.seed.unwrap_or(scenario.master_seed);
    let periods = scenario.num_periods();
    let period = u64::from(config.period_s);
    let cycle = u64::from(config.cycle_length_s);

    let static_plans: Option<Vec<ControllerDecision>> = match kind {
        ControllerKind::Fixed => Some(vec![fixed_time(config); periods]),
        ControllerKind::Pretimed => Some(vec![pretimed(config, &scenario.mean_flows(0..periods)); periods]),
        ControllerKind::Segmental => {
            let seg = segmental_pretimed(config, &scenario.flows, opts.segment_len)?;
            Some((0..periods).map(|k| seg[k / opts.segment_len]).collect())
        }
        _ => None,
    };

    let mut engine = Intersection::new(config, stream);
    let mut schedule: Vec<PhasePlan> = Vec::new();
    let mut fir_hist: [Vec<u32>; NUM_STREETS] = Default::default();
    let mut for_hist: [Vec<u32>; NUM_STREETS] = Default::default();
    let mut decisions = Vec::with_capacity(periods);
    let mut per_period_delay = Vec::with_capacity(periods);
    let n = periods * period as usize;
    let mut queue_series: [Vec<u32>; NUM_STREETS] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut sqs_series = Vec::with_capacity(n);
    let mut critical_ticks = [0u64; NUM_STREETS];

    for k in 0..periods {
        let frame = match k {
            0 => SensorFrame { period_index: 0, fir: std::array::from_fn(|s| scenario.flows[s][0]), for_: [0; 4] },
            _ => SensorFrame {
                period_index: k,
                fir: std::array::from_fn(|s| fir_hist[s][k - 1]),
                for_: std::array::from_fn(|s| for_hist[s][k - 1]),
            },
        };
        let queue = estimate_queue(&fir_hist, &for_hist)?.queue;
        let forecast = Forecast {
            frame,
            queue,
            turns: scenario.turns,
            running_plan: schedule.get((k as u64 * period / cycle) as usize).copied(),
            seed: derive_seed(seed, &[label::PREDICTION, k as u64]),
        };
        let decision = match (&static_plans, kind) {
            (Some(plans), _) => plans[k],
            (None, ControllerKind::Fuzzy) => fuzzy_decide(config, &forecast, rulebase)?,
            (None, ControllerKind::Realtime) => realtime_optimize(config, &forecast)?,
            (None, ControllerKind::FuzzyReal) => fuzzyreal_optimize(config, &forecast, rulebase)?,
            (None, _) => unreachable!("static controllers are planned up front"),
        };
        for _ in config.cycles_starting_in_period(k) {
            schedule.push(decision.plan);
        }
        decisions.push(decision);

        let delay_before = engine.total_delay();
        for t in k as u64 * period..(k as u64 + 1) * period {
            let plan = schedule[(t / cycle) as usize];
            engine.step(&plan.signals_at((t % cycle) as u32), t);
            let mut sqs = 0;
            for (s, st) in engine.streets().iter().enumerate() {
                queue_series[s].push(st.queue_len);
                critical_ticks[s] += u64::from(st.critical);
                sqs += st.queue_len;
            }
            sqs_series.push(sqs);
        }
        per_period_delay.push(engine.total_delay() - delay_before);
        let (fir, for_) = engine.close_period();
        for s in 0..NUM_STREETS {
            fir_hist[s].push(fir[s]);
            for_hist[s].push(for_[s]);
        }
    }

    let delay_per_street: [u64; NUM_STREETS] = std::array::from_fn(|s| engine.streets()[s].delay_accum);
    let vehicles_processed = engine.streets().iter().map(|s| s.departed_total).sum();
    let result = SimResult {
        queue_series,
        max_sqs: sqs_series.iter().copied().max().unwrap_or(0),
        sqs_series,
        delay_per_street,
        total_delay: delay_per_street.iter().sum(),
        vehicles_processed,
        critical_ticks,
        vehicles: engine.into_vehicles(),
    };
    let report = RunReport {
        controller: kind.name().to_owned(),
        total_delay: result.total_delay,
        per_period_delay,
        max_sqs: result.max_sqs,
        delay_per_street,
        candidates_evaluated: decisions.iter().map(|d| u64::from(d.candidates_evaluated)).sum(),
        greens: decisions.iter().map(|d| d.plan.green1_s).collect(),
        vehicles_processed,
        critical_ticks,
        sqs_series: result.sqs_series.clone(),
        wall_clock: started.elapsed(),
    };
    Ok(ScenarioRun { report, result, decisions })
}
