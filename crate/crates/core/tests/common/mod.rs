//! Test-side reference model of the intersection.
//!
//! Written from the behavioural rules alone, with its own data layout and
//! signal timing, so that agreement with the library is meaningful.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signalsim::controllers::{Forecast, Prediction, SensorFrame};
use signalsim::sim::TurnFractions;
use signalsim::{Intent, IntersectionConfig, VehicleRecord};

#[derive(Debug, Clone, Copy)]
pub struct RefVehicle {
    pub street: usize,
    pub intent: Intent,
    /// Tick the vehicle crosses the entry sensor.
    pub entry: u64,
    /// Already waiting at tick 0, ahead of anything arriving at tick 0.
    pub preloaded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefOutcome {
    /// Sum over vehicles of (exit or end) minus queue-join tick.
    pub delay: u64,
    /// Sum over ticks of the number of queued vehicles.
    pub area: u64,
    pub departed: u64,
    pub still_queued: u64,
    pub ticks_run: u64,
}

/// True when phase `phase` (0 or 1) shows green at `t` seconds into the
/// day, for a plan with phase-1 green `g1`.
pub fn ref_green(cfg: &IntersectionConfig, g1: u32, phase: usize, t: u64) -> bool {
    let c = u64::from(cfg.cycle_length_s);
    let y = u64::from(cfg.yellow_s);
    let g1 = u64::from(g1);
    let g2 = c - 2 * y - g1;
    let pos = t % c;
    if phase == 0 {
        pos < g1
    } else {
        pos >= g1 + y && pos < g1 + y + g2
    }
}

/// Simulates `vehicles` under a constant plan until `horizon`, then keeps
/// going until the intersection empties or `horizon + drain` ticks pass.
/// `start_offset` is the cycle position of tick 0.
pub fn ref_simulate(
    cfg: &IntersectionConfig,
    vehicles: &[RefVehicle],
    g1: u32,
    horizon: u64,
    drain: u64,
) -> RefOutcome {
    ref_simulate_from(cfg, vehicles, g1, horizon, drain, 0)
}

pub fn ref_simulate_from(
    cfg: &IntersectionConfig,
    vehicles: &[RefVehicle],
    g1: u32,
    horizon: u64,
    drain: u64,
    start_offset: u64,
) -> RefOutcome {
    let headway = u64::from(cfg.saturation_headway_ticks);
    let ff = u64::from(cfg.free_flow_ticks);
    // lanes[street][lane] holds vehicle indices, front first.
    let mut lanes: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); 3]; 4];
    let mut last_release: Vec<Vec<Option<u64>>> = vec![vec![None; 3]; 4];
    let mut join_tick = vec![None::<u64>; vehicles.len()];
    let mut exit_tick = vec![None::<u64>; vehicles.len()];

    let shortest = |lanes: &Vec<Vec<usize>>| {
        let mut best = 1;
        for l in [0, 2] {
            if lanes[l].len() < lanes[best].len() {
                best = l;
            }
        }
        best
    };

    // Join order: preloaded first in input order, then by join tick, street.
    let mut order: Vec<usize> = (0..vehicles.len()).collect();
    order.sort_by_key(|&i| {
        let v = &vehicles[i];
        if v.preloaded {
            (0, 0, 0, i)
        } else {
            (1, v.entry + ff, v.street, i)
        }
    });
    let mut next = 0;
    let mut area = 0u64;
    let limit = horizon + drain;
    let mut t = 0;
    while t < limit {
        if t >= horizon && next == order.len() && lanes.iter().all(|s| s.iter().all(Vec::is_empty)) {
            break;
        }
        while next < order.len() {
            let i = order[next];
            let v = &vehicles[i];
            if !v.preloaded && v.entry + ff > t {
                break;
            }
            let lane = match v.intent {
                Intent::Left => 0,
                Intent::Right => 2,
                Intent::Straight => shortest(&lanes[v.street]),
            };
            lanes[v.street][lane].push(i);
            join_tick[i] = Some(t);
            next += 1;
        }
        for s in 0..4 {
            if !ref_green(cfg, g1, s % 2, t + start_offset) {
                continue;
            }
            let heads: Vec<Option<Intent>> = (0..3).map(|l| lanes[s][l].first().map(|&i| vehicles[i].intent)).collect();
            let mut leaving = Vec::new();
            for l in 0..3 {
                let Some(me) = heads[l] else { continue };
                if last_release[s][l].is_some_and(|r| t < r + headway) {
                    continue;
                }
                let left = if l == 0 { None } else { heads[l - 1] };
                let ok = match me {
                    Intent::Straight => true,
                    Intent::Right => left != Some(Intent::Right),
                    Intent::Left => left.is_none() || left == Some(Intent::Left),
                };
                if ok {
                    leaving.push(l);
                }
            }
            for l in leaving {
                let i = lanes[s][l].remove(0);
                exit_tick[i] = Some(t);
                last_release[s][l] = Some(t);
            }
        }
        area += lanes.iter().flatten().map(|q| q.len() as u64).sum::<u64>();
        t += 1;
    }
    let mut delay = 0;
    let mut departed = 0;
    let mut still_queued = 0;
    for i in 0..vehicles.len() {
        match (join_tick[i], exit_tick[i]) {
            (Some(j), Some(e)) => {
                delay += e - j;
                departed += 1;
            }
            (Some(j), None) => {
                delay += t - j;
                still_queued += 1;
            }
            _ => {}
        }
    }
    RefOutcome { delay, area, departed, still_queued, ticks_run: t }
}

/// Converts engine records (stream first, preloaded after) into reference vehicles.
pub fn from_records(records: &[VehicleRecord], n_stream: usize) -> Vec<RefVehicle> {
    let mut out: Vec<RefVehicle> = records[n_stream..]
        .iter()
        .map(|r| RefVehicle { street: r.street as usize, intent: r.intent, entry: r.entry_tick, preloaded: true })
        .collect();
    out.extend(records[..n_stream].iter().map(|r| RefVehicle {
        street: r.street as usize,
        intent: r.intent,
        entry: r.entry_tick,
        preloaded: false,
    }));
    out
}

/// One-period decision problem drawn from `seed`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub forecast: Forecast,
}

pub fn instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fir = std::array::from_fn(|_| rng.random_range(0..=1300));
    let queue = std::array::from_fn(|_| rng.random_range(0..=40));
    let turns = std::array::from_fn(|_| {
        let left: u32 = rng.random_range(0..=30);
        TurnFractions::new(f64::from(left), f64::from(rng.random_range(0..=30u32))).unwrap()
    });
    let frame = SensorFrame { period_index: 0, fir, for_: [0; 4] };
    Instance { forecast: Forecast::new(frame, queue, turns, seed ^ 0x5eed) }
}

/// The vehicles a controller would predict for `inst`, as reference vehicles.
pub fn predicted_vehicles(cfg: &IntersectionConfig, inst: &Instance) -> Vec<RefVehicle> {
    let p = Prediction::new(cfg, &inst.forecast).unwrap();
    let n_stream: u32 = inst.forecast.frame.fir.iter().sum();
    from_records(&p.engine().clone().into_vehicles(), n_stream as usize)
}

/// Exhaustive minimum over all phase-1 greens; ties go to the smaller green.
pub fn ref_argmin(
    cfg: &IntersectionConfig,
    vehicles: &[RefVehicle],
    greens: std::ops::RangeInclusive<u32>,
) -> (u32, u64) {
    let horizon = u64::from(cfg.period_s);
    let drain = u64::from(cfg.drain_limit_s);
    let mut best = (0, u64::MAX);
    for g in greens {
        let d = ref_simulate(cfg, vehicles, g, horizon, drain).delay;
        if d < best.1 {
            best = (g, d);
        }
    }
    best
}
