mod common;

use proptest::prelude::*;
use signalsim::sim::{build_stream, generate_arrivals, run_horizon, Intersection, TurnFractions};
use signalsim::{IntersectionConfig, PhasePlan, VehicleRecord};

fn stream(flows: [u32; 4], left: f64, right: f64, seed: u64, horizon: u64) -> Vec<VehicleRecord> {
    let per_street: Vec<Vec<u64>> =
        (0..4).map(|s| generate_arrivals(flows[s], 0, horizon, seed.wrapping_add(s as u64)).unwrap()).collect();
    build_stream(&per_street, &[TurnFractions::new(left, right).unwrap(); 4], seed).unwrap()
}

fn plans(cfg: &IntersectionConfig, greens: &[u32], cycles: usize) -> Vec<PhasePlan> {
    (0..cycles).map(|i| cfg.plan(greens[i % greens.len()]).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On every tick each joined vehicle is either queued or gone, and the
    /// sensor counters agree with the vehicle records.
    #[test]
    fn conservation_holds_every_tick(
        flows in prop::array::uniform4(0u32..500),
        left in 0.0f64..40.0,
        right in 0.0f64..40.0,
        greens in prop::collection::vec(5u32..=112, 1..4),
        ff in 0u32..6,
        seed in any::<u64>(),
    ) {
        let cfg = IntersectionConfig { free_flow_ticks: ff, ..IntersectionConfig::default() };
        let vehicles = stream(flows, left, right, seed, 360);
        let schedule = plans(&cfg, &greens, 4);
        let mut engine = Intersection::new(&cfg, vehicles.clone());
        for t in 0..480u64 {
            let plan = schedule[(t / 120) as usize];
            engine.step(&plan.signals_at((t % 120) as u32), t);
            for s in 0..4 {
                let arrived = vehicles.iter().filter(|v| v.street as usize == s && v.entry_tick + u64::from(ff) <= t).count() as u64;
                let st = &engine.streets()[s];
                prop_assert_eq!(st.joined_total, arrived);
                prop_assert_eq!(st.joined_total, u64::from(st.queue_len) + st.departed_total);
                prop_assert_eq!(st.critical, st.queue_len > cfg.critical_queue());
                let sensed = vehicles.iter().filter(|v| v.street as usize == s && v.entry_tick <= t).count() as u64;
                prop_assert_eq!(u64::from(st.in_count), sensed);
                prop_assert_eq!(u64::from(st.out_count), st.departed_total);
            }
        }
    }

    /// Area under the queue curve equals the per-vehicle waiting sum.
    #[test]
    fn delay_identity(
        flows in prop::array::uniform4(0u32..700),
        left in 0.0f64..40.0,
        right in 0.0f64..40.0,
        greens in prop::collection::vec(5u32..=112, 1..5),
        ff in 0u32..15,
        seed in any::<u64>(),
    ) {
        let cfg = IntersectionConfig { free_flow_ticks: ff, ..IntersectionConfig::default() };
        let vehicles = stream(flows, left, right, seed, 900);
        let res = run_horizon(&cfg, Intersection::new(&cfg, vehicles), &plans(&cfg, &greens, 8), 900).unwrap();
        let ff = u64::from(ff);
        let waited: u64 = res.vehicles.iter()
            .filter(|v| v.entry_tick + ff < 900)
            .map(|v| v.exit_tick.unwrap_or(900) - v.entry_tick - ff)
            .sum();
        prop_assert_eq!(res.total_delay, waited);
        let area: u64 = res.sqs_series.iter().map(|&q| u64::from(q)).sum();
        prop_assert_eq!(res.total_delay, area);
        for v in res.vehicles.iter().filter(|v| v.exit_tick.is_some()) {
            let exit = v.exit_tick.unwrap();
            let phase = cfg.plan(greens[(exit / 120) as usize % greens.len()]).unwrap();
            let sig = phase.signals_at((exit % 120) as u32)[v.street as usize];
            prop_assert_eq!(sig, signalsim::Signal::Green);
            prop_assert!(exit >= v.queue_tick.unwrap());
        }
    }

    /// Identical inputs give identical results, down to every record.
    #[test]
    fn runs_are_deterministic(
        flows in prop::array::uniform4(0u32..600),
        g in 5u32..=112,
        seed in any::<u64>(),
    ) {
        let cfg = IntersectionConfig::default();
        let schedule = vec![cfg.plan(g).unwrap(); 8];
        let a = run_horizon(&cfg, Intersection::new(&cfg, stream(flows, 20.0, 10.0, seed, 900)), &schedule, 900).unwrap();
        let b = run_horizon(&cfg, Intersection::new(&cfg, stream(flows, 20.0, 10.0, seed, 900)), &schedule, 900).unwrap();
        prop_assert_eq!(a, b);
    }

    /// The library agrees with the reference model for any single plan.
    #[test]
    fn engine_matches_reference_model(
        flows in prop::array::uniform4(0u32..800),
        g in 5u32..=112,
        seed in any::<u64>(),
    ) {
        let cfg = IntersectionConfig::default();
        let vehicles = stream(flows, 25.0, 25.0, seed, 900);
        let refs: Vec<common::RefVehicle> = vehicles.iter()
            .map(|v| common::RefVehicle { street: v.street as usize, intent: v.intent, entry: v.entry_tick, preloaded: false })
            .collect();
        let res = run_horizon(&cfg, Intersection::new(&cfg, vehicles), &[cfg.plan(g).unwrap(); 8], 900).unwrap();
        let theirs = common::ref_simulate(&cfg, &refs, g, 900, 0);
        prop_assert_eq!(res.total_delay, theirs.delay);
        prop_assert_eq!(res.vehicles_processed, theirs.departed);
    }
}
