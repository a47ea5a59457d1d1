use crate::config::{IntersectionConfig, PhasePlan, NUM_STREETS, STREET_PHASE};
use crate::error::{Error, Result};

use super::ControllerDecision;

/// Even split, every cycle, regardless of traffic.
pub fn fixed_time(config: &IntersectionConfig) -> ControllerDecision {
    ControllerDecision::fixed(config.even_plan())
}

/// Phase-1 green proportional to its share of mean demand. Falls back to the
/// even split when there is no demand.
pub fn proportional_plan(config: &IntersectionConfig, mean_flows: &[f64; NUM_STREETS]) -> PhasePlan {
    let total: f64 = mean_flows.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return config.even_plan();
    }
    let phase1: f64 = mean_flows.iter().zip(STREET_PHASE).filter(|(_, p)| *p == 0).map(|(f, _)| f).sum();
    let g = (phase1 / total * f64::from(config.green_total())).round() as i64;
    let g = config.clamp_green(g);
    PhasePlan { green1_s: g, green2_s: config.green_total() - g, yellow_s: config.yellow_s }
}

/// One static split for the whole day from whole-day mean flows.
pub fn pretimed(config: &IntersectionConfig, daily_mean_flows: &[f64; NUM_STREETS]) -> ControllerDecision {
    ControllerDecision::fixed(proportional_plan(config, daily_mean_flows))
}

/// Proportional split per segment of `segment_len` periods; the last segment
/// may be shorter. Returns one decision per segment.
pub fn segmental_pretimed(
    config: &IntersectionConfig,
    flows: &[Vec<u32>; NUM_STREETS],
    segment_len: usize,
) -> Result<Vec<ControllerDecision>> {
    if segment_len == 0 {
        return Err(Error::Config("segment length must be at least one period".into()));
    }
    let periods = flows[0].len();
    Ok((0..periods)
        .step_by(segment_len)
        .map(|start| {
            let end = (start + segment_len).min(periods);
            let mean = std::array::from_fn(|s| {
                flows[s][start..end].iter().map(|&x| f64::from(x)).sum::<f64>() / (end - start) as f64
            });
            pretimed(config, &mean)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_is_even() {
        let d = fixed_time(&IntersectionConfig::default());
        assert_eq!((d.plan.green1_s, d.plan.green2_s), (56, 56));
        assert_eq!(d.candidates_evaluated, 1);
    }

    #[test]
    fn proportional_rule() {
        let c = IntersectionConfig::default();
        assert_eq!(pretimed(&c, &[300.0; 4]).plan.green1_s, 56);
        // 75% of demand on the first phase: round(0.75 * 112)
        assert_eq!(pretimed(&c, &[450.0, 150.0, 450.0, 150.0]).plan.green1_s, 84);
        assert_eq!(pretimed(&c, &[0.0; 4]).plan.green1_s, 56);
        // all demand on one phase clamps to the bound
        assert_eq!(pretimed(&c, &[10.0, 0.0, 0.0, 0.0]).plan.green1_s, 112);
        assert_eq!(pretimed(&c, &[0.0, 10.0, 0.0, 0.0]).plan.green1_s, 5);
    }

    #[test]
    fn segments() {
        let c = IntersectionConfig::default();
        let uniform: [Vec<u32>; 4] = std::array::from_fn(|_| vec![200; 8]);
        let d = segmental_pretimed(&c, &uniform, 4).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|x| x.plan.green1_s == 56));

        // first hour: 70% of demand on phase 1; second hour balanced
        let mut f: [Vec<u32>; 4] = std::array::from_fn(|_| vec![300; 8]);
        for s in [0, 2] {
            f[s][..4].fill(350);
        }
        for s in [1, 3] {
            f[s][..4].fill(150);
        }
        let d = segmental_pretimed(&c, &f, 4).unwrap();
        assert_eq!(d[0].plan.green1_s, 78);
        assert_eq!(d[1].plan.green1_s, 56);

        let one = segmental_pretimed(&c, &f, 8).unwrap();
        let daily = std::array::from_fn(|s| f[s].iter().map(|&x| f64::from(x)).sum::<f64>() / 8.0);
        assert_eq!(one, vec![pretimed(&c, &daily)]);
        assert!(segmental_pretimed(&c, &f, 0).is_err());
    }
}
