use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::NUM_LANES;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Intent {
    Straight,
    Left,
    Right,
}

/// Percentages of a street's vehicles turning left and right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnFractions {
    pub left_pct: f64,
    pub right_pct: f64,
}

impl TurnFractions {
    pub const STRAIGHT: Self = Self { left_pct: 0.0, right_pct: 0.0 };

    pub fn new(left_pct: f64, right_pct: f64) -> Result<Self> {
        let t = Self { left_pct, right_pct };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.left_pct) || !ok(self.right_pct) {
            return Err(Error::Scenario(format!(
                "turn percentages must be non-negative, got left {} right {}",
                self.left_pct, self.right_pct
            )));
        }
        if self.left_pct + self.right_pct > 100.0 {
            return Err(Error::Scenario(format!("turn percentages sum to {} (> 100)", self.left_pct + self.right_pct)));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> Intent {
        let u = rng.random::<f64>() * 100.0;
        if u < self.left_pct {
            Intent::Left
        } else if u < self.left_pct + self.right_pct {
            Intent::Right
        } else {
            Intent::Straight
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VehicleRecord {
    pub id: u32,
    /// Zero-based street index.
    pub street: u8,
    /// Zero-based lane, leftmost first. `None` until the vehicle joins a
    /// queue, for vehicles free to pick the shortest lane.
    pub lane: Option<u8>,
    /// Tick the vehicle crossed the entry sensor.
    pub entry_tick: u64,
    pub intent: Intent,
    /// Tick the vehicle joined the stop-line queue.
    pub queue_tick: Option<u64>,
    pub exit_tick: Option<u64>,
}

impl VehicleRecord {
    /// Ticks spent queued, once departed.
    pub fn waiting_ticks(&self) -> Option<u64> {
        Some(self.exit_tick? - self.queue_tick?)
    }
}

/// Entry ticks for `flow_count` vehicles inside
/// `[period_start, period_start + period_len)`, drawn from a normal
/// distribution centred on the period midpoint with σ = period/6, clipped to
/// the period and sorted.
pub fn generate_arrivals(flow_count: u32, period_start: u64, period_len: u64, seed: u64) -> Result<Vec<u64>> {
    if period_len == 0 {
        return Err(Error::Scenario("arrival period must be positive".into()));
    }
    let len = period_len as f64;
    let normal = Normal::new(period_start as f64 + len / 2.0, len / 6.0).expect("finite sigma");
    let last = period_start + period_len - 1;
    let mut rng = rng::stream(seed);
    let mut ticks: Vec<u64> = (0..flow_count)
        .map(|_| {
            let x: f64 = normal.sample(&mut rng);
            (x.floor().max(0.0) as u64).clamp(period_start, last)
        })
        .collect();
    ticks.sort_unstable();
    Ok(ticks)
}

/// `flow_count` entry ticks spread at a uniform rate over the period.
pub fn uniform_arrivals(flow_count: u32, period_start: u64, period_len: u64) -> Vec<u64> {
    let n = u64::from(flow_count);
    (0..n).map(|i| period_start + ((2 * i + 1) * period_len) / (2 * n)).collect()
}

/// Draws an intent for each vehicle and fixes the lane of turning vehicles:
/// left turners use the leftmost lane, right turners the rightmost, straight
/// vehicles pick the shortest queue on arrival.
pub fn assign_intents(vehicles: &mut [VehicleRecord], fractions: &[TurnFractions], seed: u64) -> Result<()> {
    for f in fractions {
        f.validate()?;
    }
    let mut rng = rng::stream(seed);
    for v in vehicles.iter_mut() {
        let f = fractions
            .get(usize::from(v.street))
            .ok_or_else(|| Error::Scenario(format!("no turn fractions for street {}", v.street + 1)))?;
        v.intent = f.sample(&mut rng);
        v.lane = match v.intent {
            Intent::Left => Some(0),
            Intent::Right => Some(NUM_LANES as u8 - 1),
            Intent::Straight => None,
        };
    }
    Ok(())
}

/// Merges per-street entry ticks into one stream ordered by entry tick (ties
/// by street), with ids assigned in that order and intents drawn from `seed`.
pub fn build_stream(per_street: &[Vec<u64>], fractions: &[TurnFractions], seed: u64) -> Result<Vec<VehicleRecord>> {
    let mut vehicles: Vec<VehicleRecord> = per_street
        .iter()
        .enumerate()
        .flat_map(|(s, ticks)| {
            ticks.iter().map(move |&t| VehicleRecord {
                id: 0,
                street: s as u8,
                lane: None,
                entry_tick: t,
                intent: Intent::Straight,
                queue_tick: None,
                exit_tick: None,
            })
        })
        .collect();
    vehicles.sort_by_key(|v| (v.entry_tick, v.street));
    for (i, v) in vehicles.iter_mut().enumerate() {
        v.id = i as u32;
    }
    assign_intents(&mut vehicles, fractions, seed)?;
    Ok(vehicles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stubs(n: usize) -> Vec<VehicleRecord> {
        build_stream(&[vec![0; n]], &[TurnFractions::STRAIGHT], 0).unwrap()
    }

    #[test]
    fn zero_flow_is_empty() {
        assert!(generate_arrivals(0, 0, 900, 1).unwrap().is_empty());
    }

    #[test]
    fn count_and_range_are_exact() {
        for seed in 0..20 {
            let t = generate_arrivals(30, 1800, 900, seed).unwrap();
            assert_eq!(t.len(), 30);
            assert!(t.iter().all(|&x| (1800..2700).contains(&x)));
            assert!(t.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn same_seed_same_ticks() {
        let a = generate_arrivals(500, 0, 900, 42).unwrap();
        let b = generate_arrivals(500, 0, 900, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_arrivals(500, 0, 900, 43).unwrap());
    }

    #[test]
    fn arrivals_concentrate_mid_period() {
        let t = generate_arrivals(20_000, 0, 900, 3).unwrap();
        let mean = t.iter().sum::<u64>() as f64 / t.len() as f64;
        assert!((mean - 449.5).abs() < 3.0, "mean {mean}");
        // within ±1σ (150 ticks) of the midpoint: ~68%
        let inside = t.iter().filter(|&&x| (300..600).contains(&x)).count() as f64 / t.len() as f64;
        assert!((inside - 0.6827).abs() < 0.02, "{inside}");
    }

    #[test]
    fn zero_period_rejected() {
        assert!(generate_arrivals(3, 0, 0, 0).is_err());
    }

    #[test]
    fn uniform_spacing() {
        assert_eq!(uniform_arrivals(3, 0, 900), vec![150, 450, 750]);
        assert!(uniform_arrivals(0, 0, 900).is_empty());
        let t = uniform_arrivals(2000, 900, 900);
        assert!(t.iter().all(|&x| (900..1800).contains(&x)));
    }

    #[test]
    fn degenerate_fractions() {
        let mut v = stubs(200);
        assign_intents(&mut v, &[TurnFractions::STRAIGHT], 9).unwrap();
        assert!(v.iter().all(|v| v.intent == Intent::Straight && v.lane.is_none()));
        assign_intents(&mut v, &[TurnFractions::new(100.0, 0.0).unwrap()], 9).unwrap();
        assert!(v.iter().all(|v| v.intent == Intent::Left && v.lane == Some(0)));
        assign_intents(&mut v, &[TurnFractions::new(0.0, 100.0).unwrap()], 9).unwrap();
        assert!(v.iter().all(|v| v.intent == Intent::Right && v.lane == Some(2)));
    }

    #[test]
    fn shares_follow_fractions() {
        let mut v = stubs(10_000);
        assign_intents(&mut v, &[TurnFractions::new(25.0, 25.0).unwrap()], 11).unwrap();
        let share = |i: Intent| v.iter().filter(|v| v.intent == i).count() as f64 / 100.0;
        assert!((share(Intent::Left) - 25.0).abs() <= 2.0);
        assert!((share(Intent::Right) - 25.0).abs() <= 2.0);
        assert!((share(Intent::Straight) - 50.0).abs() <= 2.0);
    }

    #[test]
    fn invalid_fractions_rejected() {
        assert!(TurnFractions::new(60.0, 50.0).is_err());
        assert!(TurnFractions::new(-1.0, 0.0).is_err());
        let mut v = stubs(3);
        let bad = TurnFractions { left_pct: 70.0, right_pct: 40.0 };
        assert!(assign_intents(&mut v, &[bad], 0).is_err());
    }

    #[test]
    fn stream_is_ordered_and_deterministic() {
        let per = vec![vec![5, 9], vec![1, 5], vec![], vec![7]];
        let f = [TurnFractions::new(20.0, 20.0).unwrap(); 4];
        let s = build_stream(&per, &f, 4).unwrap();
        let keys: Vec<_> = s.iter().map(|v| (v.entry_tick, v.street)).collect();
        assert_eq!(keys, vec![(1, 1), (5, 0), (5, 1), (7, 3), (9, 0)]);
        assert_eq!(s, build_stream(&per, &f, 4).unwrap());
    }
}
