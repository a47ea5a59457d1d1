use serde::{Deserialize, Serialize};

use crate::config::{IntersectionConfig, NUM_STREETS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::rulebase::RuleBase;

pub const NUM_LEVELS: usize = 5;

/// Half the base width of each triangular membership function.
pub const LEVEL_HALF_WIDTH: f64 = 0.6;

/// Membership weights over the five density levels.
pub type Memberships<T> = [T; NUM_LEVELS];

/// One of five equal-width density bands over `[0, 3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DensityLevel(u8);

impl DensityLevel {
    pub const ALL: [DensityLevel; NUM_LEVELS] =
        [DensityLevel(0), DensityLevel(1), DensityLevel(2), DensityLevel(3), DensityLevel(4)];

    const VALUES: [f64; NUM_LEVELS] = [0.3, 0.9, 1.5, 2.1, 2.7];

    pub fn from_index(i: usize) -> Option<Self> {
        (i < NUM_LEVELS).then_some(DensityLevel(i as u8))
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    /// Midpoint of the band.
    pub fn value(self) -> f64 {
        Self::VALUES[self.index()]
    }

    /// Band bounds; the first band is closed below, all are closed above.
    pub fn interval(self) -> (f64, f64) {
        let lo = self.value() - LEVEL_HALF_WIDTH / 2.0;
        (lo.max(0.0), self.value() + LEVEL_HALF_WIDTH / 2.0)
    }

    /// Band containing `density` (clamped to `[0, 3]`).
    pub fn classify(density: f64) -> Self {
        let d = density.clamp(0.0, 3.0);
        let i = Self::ALL.iter().position(|l| d <= l.interval().1 + 1e-12).unwrap_or(NUM_LEVELS - 1);
        DensityLevel(i as u8)
    }

    /// Level whose midpoint equals `v` to within `1e-9`.
    pub fn from_value(v: f64) -> Option<Self> {
        Self::VALUES.iter().position(|&c| (c - v).abs() < 1e-9).map(|i| DensityLevel(i as u8))
    }
}

/// Triangular memberships centred on the level midpoints, shouldered at
/// both ends. At most two weights are nonzero and they sum to one.
pub fn fuzzify<T: Scalar>(density: T) -> Memberships<T> {
    let lo = T::lit(DensityLevel::VALUES[0]);
    let hi = T::lit(DensityLevel::VALUES[NUM_LEVELS - 1]);
    let d = density.max(T::zero()).min(T::lit(3.0));
    let mut w = [T::zero(); NUM_LEVELS];
    if d <= lo {
        w[0] = T::one();
        return w;
    }
    if d >= hi {
        w[NUM_LEVELS - 1] = T::one();
        return w;
    }
    let half = T::lit(LEVEL_HALF_WIDTH);
    for (wi, &c) in w.iter_mut().zip(DensityLevel::VALUES.iter()) {
        let x = T::one() - (d - T::lit(c)).abs() / half;
        if x > T::zero() {
            *wi = x;
        }
    }
    let sum = w.iter().fold(T::zero(), |a, &b| a + b);
    w.map(|x| x / sum)
}

/// Weighted-average defuzzification over all rules fired by the four
/// street densities, rounded to whole seconds and clamped to the green
/// bounds.
pub fn infer_green<T: Scalar>(
    densities: &[T; NUM_STREETS],
    rulebase: &RuleBase,
    config: &IntersectionConfig,
) -> Result<u32> {
    let m: [Memberships<T>; NUM_STREETS] = densities.map(fuzzify);
    let active: [Vec<(usize, T)>; NUM_STREETS] = std::array::from_fn(|s| {
        m[s].iter().enumerate().filter(|(_, w)| **w > T::zero()).map(|(i, w)| (i, *w)).collect()
    });
    let mut num = T::zero();
    let mut den = T::zero();
    for &(a, wa) in &active[0] {
        for &(b, wb) in &active[1] {
            for &(c, wc) in &active[2] {
                for &(d, wd) in &active[3] {
                    let levels = [a, b, c, d].map(|i| DensityLevel::ALL[i]);
                    if let Some(g) = rulebase.get(levels) {
                        let w = wa * wb * wc * wd;
                        num = num + w * T::from_u32(g).unwrap();
                        den = den + w;
                    }
                }
            }
        }
    }
    if den <= T::zero() {
        return Err(Error::RuleBase(format!("no rule covers densities {densities:?}")));
    }
    let g = (num / den).round().to_i64().unwrap();
    Ok(config.clamp_green(g))
}
