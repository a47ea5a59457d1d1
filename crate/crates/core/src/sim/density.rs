use crate::config::{IntersectionConfig, NUM_LANES, NUM_STREETS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `(cycles_per_period · queue + entered) / capacity`, the unscaled density.
pub fn raw_density<T: Scalar>(queue: T, entered: T, capacity: T, cycles_per_period: T) -> Result<T> {
    if capacity <= T::zero() {
        return Err(Error::Config("street capacity must be positive".into()));
    }
    Ok((cycles_per_period * queue + entered) / capacity)
}

/// Per-street density scaled so a saturated street reads one unit per lane,
/// clamped to `[0, lanes]`.
pub fn compute_density<T: Scalar>(
    queue: &[u32; NUM_STREETS],
    entered: &[u32; NUM_STREETS],
    config: &IntersectionConfig,
) -> Result<[T; NUM_STREETS]> {
    let cap = T::from_u32(config.street_capacity_per_period).unwrap();
    let cpp = T::lit(config.cycles_per_period());
    let lanes = T::from_usize(NUM_LANES).unwrap();
    let mut out = [T::zero(); NUM_STREETS];
    for s in 0..NUM_STREETS {
        let raw = raw_density(T::from_u32(queue[s]).unwrap(), T::from_u32(entered[s]).unwrap(), cap, cpp)?;
        out[s] = (raw * lanes).max(T::zero()).min(lanes);
    }
    Ok(out)
}
