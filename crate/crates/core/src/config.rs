//! Static intersection geometry and signal constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_STREETS: usize = 4;
pub const NUM_LANES: usize = 3;
pub const NUM_PHASES: usize = 2;

/// Phase index (0 or 1) serving each street. Streets 1 and 3 move in the
/// first phase, streets 2 and 4 in the second.
pub const STREET_PHASE: [usize; NUM_STREETS] = [0, 1, 0, 1];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionConfig {
    pub cycle_length_s: u32,
    /// Yellow interval after each green. Also absorbs start-up lost time.
    pub yellow_s: u32,
    pub sensor_gap_m: f64,
    pub vehicle_space_m: f64,
    /// Ticks between successive departures from one lane.
    pub saturation_headway_ticks: u32,
    /// Vehicles per data-submission period per street at saturation.
    pub street_capacity_per_period: u32,
    pub period_s: u32,
    pub min_green_s: u32,
    pub max_green_s: u32,
    /// Ticks from the entry sensor to the back of the stop-line queue.
    pub free_flow_ticks: u32,
    /// When scoring a candidate plan, ticks the prediction may run past the
    /// period so vehicles still queued at its end are charged until they
    /// leave. Zero scores the period alone.
    pub drain_limit_s: u32,
}

impl Default for IntersectionConfig {
    fn default() -> Self {
        let cycle_length_s = 120;
        let yellow_s = 4;
        let period_s = 900;
        let saturation_headway_ticks = 2;
        Self {
            cycle_length_s,
            yellow_s,
            sensor_gap_m: 150.0,
            vehicle_space_m: 6.0,
            saturation_headway_ticks,
            street_capacity_per_period: NUM_LANES as u32 * period_s / saturation_headway_ticks,
            period_s,
            min_green_s: 5,
            max_green_s: cycle_length_s - 2 * yellow_s,
            free_flow_ticks: 0,
            drain_limit_s: 3600,
        }
    }
}

impl IntersectionConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.cycle_length_s <= 2 * self.yellow_s {
            return fail(format!(
                "cycle {} s leaves no green after two {} s yellows",
                self.cycle_length_s, self.yellow_s
            ));
        }
        if self.min_green_s < 1 {
            return fail("min_green_s must be at least 1".into());
        }
        if self.min_green_s > self.max_green_s {
            return fail(format!("min_green_s {} exceeds max_green_s {}", self.min_green_s, self.max_green_s));
        }
        if self.max_green_s > self.green_total() {
            return fail(format!(
                "max_green_s {} exceeds the {} s of green available per cycle",
                self.max_green_s,
                self.green_total()
            ));
        }
        if self.saturation_headway_ticks == 0 {
            return fail("saturation_headway_ticks must be positive".into());
        }
        if self.street_capacity_per_period == 0 {
            return fail("street capacity per period must be positive".into());
        }
        if self.period_s == 0 {
            return fail("period_s must be positive".into());
        }
        // Written so NaN fails too.
        if self.vehicle_space_m.is_nan()
            || self.vehicle_space_m <= 0.0
            || self.sensor_gap_m.is_nan()
            || self.sensor_gap_m < 0.0
        {
            return fail("vehicle spacing must be positive and the sensor gap non-negative".into());
        }
        Ok(())
    }

    /// Green seconds shared by both phases in one cycle.
    pub fn green_total(&self) -> u32 {
        self.cycle_length_s - 2 * self.yellow_s
    }

    /// Signal cycles per data-submission period (7.5 with defaults).
    pub fn cycles_per_period(&self) -> f64 {
        f64::from(self.period_s) / f64::from(self.cycle_length_s)
    }

    /// Queued vehicles per lane that fill the space between the sensors.
    pub fn critical_queue_per_lane(&self) -> u32 {
        (self.sensor_gap_m / self.vehicle_space_m).floor() as u32
    }

    /// A street is critical when its queue exceeds this many vehicles.
    pub fn critical_queue(&self) -> u32 {
        NUM_LANES as u32 * self.critical_queue_per_lane()
    }

    /// Number of candidate phase-1 greens in the search range.
    pub fn green_candidates(&self) -> u32 {
        self.max_green_s - self.min_green_s + 1
    }

    pub fn clamp_green(&self, green1: i64) -> u32 {
        green1.clamp(i64::from(self.min_green_s), i64::from(self.max_green_s)) as u32
    }

    /// Plan giving `green1_s` to the first phase and the remainder to the second.
    pub fn plan(&self, green1_s: u32) -> Result<PhasePlan> {
        if green1_s < self.min_green_s || green1_s > self.max_green_s {
            return Err(Error::Config(format!(
                "phase-1 green {green1_s} s outside [{}, {}]",
                self.min_green_s, self.max_green_s
            )));
        }
        Ok(PhasePlan { green1_s, green2_s: self.green_total() - green1_s, yellow_s: self.yellow_s })
    }

    /// Even split of the available green.
    pub fn even_plan(&self) -> PhasePlan {
        let g = self.clamp_green(i64::from(self.green_total() / 2));
        PhasePlan { green1_s: g, green2_s: self.green_total() - g, yellow_s: self.yellow_s }
    }

    /// Index of the first cycle starting at or after `tick`.
    pub fn first_cycle_at_or_after(&self, tick: u64) -> u64 {
        tick.div_ceil(u64::from(self.cycle_length_s))
    }

    /// Cycles whose start tick falls in period `k` (8 or 7 with defaults).
    pub fn cycles_starting_in_period(&self, k: usize) -> std::ops::Range<u64> {
        let p = u64::from(self.period_s);
        self.first_cycle_at_or_after(k as u64 * p)..self.first_cycle_at_or_after((k as u64 + 1) * p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePlan {
    pub green1_s: u32,
    pub green2_s: u32,
    pub yellow_s: u32,
}

impl PhasePlan {
    pub fn cycle_length_s(&self) -> u32 {
        self.green1_s + self.green2_s + 2 * self.yellow_s
    }

    /// Signal seen by each street `offset` seconds into the cycle.
    ///
    /// Layout: phase-1 green, yellow, phase-2 green, yellow.
    pub fn signals_at(&self, offset: u32) -> [Signal; NUM_STREETS] {
        let y1 = self.green1_s;
        let g2 = y1 + self.yellow_s;
        let y2 = g2 + self.green2_s;
        let phase = |p: usize| match p {
            0 if offset < y1 => Signal::Green,
            0 if offset < g2 => Signal::Yellow,
            1 if (g2..y2).contains(&offset) => Signal::Green,
            1 if offset >= y2 => Signal::Yellow,
            _ => Signal::Red,
        };
        let p = [phase(0), phase(1)];
        std::array::from_fn(|s| p[STREET_PHASE[s]])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signal {
    Green,
    Yellow,
    Red,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_consistent() {
        let c = IntersectionConfig::default();
        c.validate().unwrap();
        assert_eq!(c.street_capacity_per_period, 1350);
        assert_eq!(c.cycles_per_period(), 7.5);
        assert_eq!(c.critical_queue_per_lane(), 25);
        assert_eq!(c.critical_queue(), 75);
        assert_eq!(c.green_candidates(), 108);
        assert_eq!(c.even_plan(), PhasePlan { green1_s: 56, green2_s: 56, yellow_s: 4 });
    }

    #[test]
    fn plan_fills_cycle() {
        let c = IntersectionConfig::default();
        for g in c.min_green_s..=c.max_green_s {
            assert_eq!(c.plan(g).unwrap().cycle_length_s(), c.cycle_length_s);
        }
        assert!(c.plan(4).is_err());
        assert!(c.plan(113).is_err());
    }

    #[test]
    fn rejects_inverted_bounds() {
        let c = IntersectionConfig { min_green_s: 60, max_green_s: 50, ..Default::default() };
        assert!(c.validate().is_err());
        let c = IntersectionConfig { max_green_s: 113, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn signal_layout() {
        let p = PhasePlan { green1_s: 10, green2_s: 20, yellow_s: 4 };
        use Signal::*;
        assert_eq!(p.signals_at(0), [Green, Red, Green, Red]);
        assert_eq!(p.signals_at(9), [Green, Red, Green, Red]);
        assert_eq!(p.signals_at(10), [Yellow, Red, Yellow, Red]);
        assert_eq!(p.signals_at(14), [Red, Green, Red, Green]);
        assert_eq!(p.signals_at(33), [Red, Green, Red, Green]);
        assert_eq!(p.signals_at(34), [Red, Yellow, Red, Yellow]);
        assert_eq!(p.signals_at(37), [Red, Yellow, Red, Yellow]);
    }

    #[test]
    fn cycles_alternate_eight_and_seven() {
        let c = IntersectionConfig::default();
        assert_eq!(c.cycles_starting_in_period(0), 0..8);
        assert_eq!(c.cycles_starting_in_period(1), 8..15);
        assert_eq!(c.cycles_starting_in_period(2), 15..23);
    }
}
