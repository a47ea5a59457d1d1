use crate::config::NUM_STREETS;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueueEstimate {
    pub queue: [u32; NUM_STREETS],
    /// Set where more vehicles left than entered, i.e. the sensors disagree.
    pub inconsistent: [bool; NUM_STREETS],
}

/// Vehicles between the entry and stop-line sensors: total entered minus
/// total exited, clamped at zero.
pub fn estimate_queue(fir: &[Vec<u32>; NUM_STREETS], for_: &[Vec<u32>; NUM_STREETS]) -> Result<QueueEstimate> {
    let mut est = QueueEstimate::default();
    for s in 0..NUM_STREETS {
        if fir[s].len() != for_[s].len() {
            return Err(Error::HistoryMismatch { street: s + 1, fir: fir[s].len(), for_: for_[s].len() });
        }
        let entered: i64 = fir[s].iter().map(|&x| i64::from(x)).sum();
        let exited: i64 = for_[s].iter().map(|&x| i64::from(x)).sum();
        let q = entered - exited;
        est.inconsistent[s] = q < 0;
        est.queue[s] = q.max(0) as u32;
    }
    Ok(est)
}
