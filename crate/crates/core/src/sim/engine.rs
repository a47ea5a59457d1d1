use std::collections::VecDeque;

use crate::config::{IntersectionConfig, Signal, NUM_LANES, NUM_STREETS};

use super::arrivals::{Intent, VehicleRecord};

/// Per-street counters, mirroring what the entry and stop-line sensors see.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreetState {
    pub queue_len: u32,
    /// Vehicle-seconds accumulated while queued.
    pub delay_accum: u64,
    pub critical: bool,
    /// Vehicles over the entry sensor this period.
    pub in_count: u32,
    /// Vehicles over the stop-line sensor this period.
    pub out_count: u32,
    /// Vehicles that have joined the queue since the run began.
    pub joined_total: u64,
    pub departed_total: u64,
}

#[derive(Debug, Clone, Default)]
struct Lane {
    queue: VecDeque<u32>,
    next_release: u64,
}

/// Mutable state of one intersection run.
///
/// Vehicles are supplied up front, sorted by entry tick. Each [`step`]
/// processes one tick: sensor crossings, queue joins, then departures.
///
/// [`step`]: Intersection::step
#[derive(Debug, Clone)]
pub struct Intersection {
    headway: u64,
    free_flow: u64,
    critical_queue: u32,
    streets: [StreetState; NUM_STREETS],
    lanes: [[Lane; NUM_LANES]; NUM_STREETS],
    vehicles: Vec<VehicleRecord>,
    /// Index of the first vehicle not yet over the entry sensor.
    sensed: usize,
    /// Index of the first vehicle not yet in a queue.
    joined: usize,
    /// Vehicles placed in queue before the run; stored after `vehicles`.
    preloaded: Vec<VehicleRecord>,
}

impl Intersection {
    /// `vehicles` must be sorted by entry tick and carry ids `0..len`.
    pub fn new(config: &IntersectionConfig, vehicles: Vec<VehicleRecord>) -> Self {
        debug_assert!(vehicles.windows(2).all(|w| w[0].entry_tick <= w[1].entry_tick));
        debug_assert!(vehicles.iter().enumerate().all(|(i, v)| v.id as usize == i));
        Self {
            headway: u64::from(config.saturation_headway_ticks),
            free_flow: u64::from(config.free_flow_ticks),
            critical_queue: config.critical_queue(),
            streets: Default::default(),
            lanes: Default::default(),
            vehicles,
            sensed: 0,
            joined: 0,
            preloaded: Vec::new(),
        }
    }

    /// Places vehicles already between the sensors at the back of the queues
    /// at `tick`. They count as joined but not as sensed this period.
    pub fn preload(&mut self, street: usize, intents: &[Intent], tick: u64) {
        for &intent in intents {
            let id = (self.vehicles.len() + self.preloaded.len()) as u32;
            let lane = self.choose_lane(street, intent);
            self.lanes[street][lane].queue.push_back(id);
            self.preloaded.push(VehicleRecord {
                id,
                street: street as u8,
                lane: Some(lane as u8),
                entry_tick: tick,
                intent,
                queue_tick: Some(tick),
                exit_tick: None,
            });
            let st = &mut self.streets[street];
            st.queue_len += 1;
            st.joined_total += 1;
        }
        self.refresh_critical(street);
    }

    pub fn streets(&self) -> &[StreetState; NUM_STREETS] {
        &self.streets
    }

    pub fn queue_len(&self, street: usize) -> u32 {
        self.streets[street].queue_len
    }

    pub fn total_queue(&self) -> u32 {
        self.streets.iter().map(|s| s.queue_len).sum()
    }

    /// True once every supplied vehicle has joined and left its queue.
    pub fn is_idle(&self) -> bool {
        self.joined == self.vehicles.len() && self.total_queue() == 0
    }

    pub fn total_delay(&self) -> u64 {
        self.streets.iter().map(|s| s.delay_accum).sum()
    }

    /// Lane queue lengths of one street, leftmost first.
    pub fn lane_lengths(&self, street: usize) -> [usize; NUM_LANES] {
        std::array::from_fn(|l| self.lanes[street][l].queue.len())
    }

    /// Per-street sensor counts for the period just ended; resets them.
    pub fn close_period(&mut self) -> ([u32; NUM_STREETS], [u32; NUM_STREETS]) {
        let fir = std::array::from_fn(|s| std::mem::take(&mut self.streets[s].in_count));
        let for_ = std::array::from_fn(|s| std::mem::take(&mut self.streets[s].out_count));
        (fir, for_)
    }

    /// Consumes the engine, returning stream vehicles followed by preloaded ones.
    pub fn into_vehicles(mut self) -> Vec<VehicleRecord> {
        self.vehicles.append(&mut self.preloaded);
        self.vehicles
    }

    fn record_mut(&mut self, id: u32) -> &mut VehicleRecord {
        let n = self.vehicles.len();
        let i = id as usize;
        if i < n {
            &mut self.vehicles[i]
        } else {
            &mut self.preloaded[i - n]
        }
    }

    fn record(&self, id: u32) -> &VehicleRecord {
        let n = self.vehicles.len();
        let i = id as usize;
        if i < n {
            &self.vehicles[i]
        } else {
            &self.preloaded[i - n]
        }
    }

    fn choose_lane(&self, street: usize, intent: Intent) -> usize {
        match intent {
            Intent::Left => 0,
            Intent::Right => NUM_LANES - 1,
            // Ties prefer the middle lane, then the left.
            Intent::Straight => [1, 0, 2].into_iter().min_by_key(|&l| self.lanes[street][l].queue.len()).unwrap(),
        }
    }

    fn refresh_critical(&mut self, street: usize) {
        let st = &mut self.streets[street];
        st.critical = st.queue_len > self.critical_queue;
    }

    /// Advances one tick under the given per-street signals.
    pub fn step(&mut self, signals: &[Signal; NUM_STREETS], tick: u64) {
        while let Some(v) = self.vehicles.get(self.sensed) {
            if v.entry_tick > tick {
                break;
            }
            let s = usize::from(v.street);
            self.streets[s].in_count += 1;
            self.sensed += 1;
        }

        while let Some(v) = self.vehicles.get(self.joined) {
            if v.entry_tick + self.free_flow > tick {
                break;
            }
            let (id, s, intent, lane) = (v.id, usize::from(v.street), v.intent, v.lane);
            let lane = lane.map(usize::from).unwrap_or_else(|| self.choose_lane(s, intent));
            self.lanes[s][lane].queue.push_back(id);
            let rec = &mut self.vehicles[self.joined];
            rec.lane = Some(lane as u8);
            rec.queue_tick = Some(tick);
            let st = &mut self.streets[s];
            st.queue_len += 1;
            st.joined_total += 1;
            self.joined += 1;
        }

        for (s, &signal) in signals.iter().enumerate() {
            if signal == Signal::Green && self.streets[s].queue_len > 0 {
                self.release(s, tick);
            }
            let st = &mut self.streets[s];
            st.delay_accum += u64::from(st.queue_len);
            self.refresh_critical(s);
        }
    }

    fn release(&mut self, s: usize, tick: u64) {
        let heads: [Option<Intent>; NUM_LANES] =
            std::array::from_fn(|l| self.lanes[s][l].queue.front().map(|&id| self.record(id).intent));
        for l in 0..NUM_LANES {
            let Some(intent) = heads[l] else { continue };
            if self.lanes[s][l].next_release > tick || !may_depart(intent, l, &heads) {
                continue;
            }
            let lane = &mut self.lanes[s][l];
            let id = lane.queue.pop_front().unwrap();
            lane.next_release = tick + self.headway;
            self.record_mut(id).exit_tick = Some(tick);
            let st = &mut self.streets[s];
            st.queue_len -= 1;
            st.out_count += 1;
            st.departed_total += 1;
        }
    }
}

/// Head-of-lane priority: straight vehicles always go; a right turner yields
/// to a right turner at the head of the lane on its left; a left turner needs
/// that lane empty or also turning left.
fn may_depart(intent: Intent, lane: usize, heads: &[Option<Intent>; NUM_LANES]) -> bool {
    let left_head = if lane == 0 { None } else { heads[lane - 1] };
    match intent {
        Intent::Straight => true,
        Intent::Right => left_head != Some(Intent::Right),
        Intent::Left => matches!(left_head, None | Some(Intent::Left)),
    }
}
