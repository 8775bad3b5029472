use super::{passage_time, FrogError, FrogMask, PassageSample};
use crate::walkfield::{Site, WalkField};

/// Truncation policy: start at `initial` (default `4 |x|_1 + 64`) and double
/// on `NotReached` until `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HorizonPolicy {
    pub initial: Option<u64>,
    pub cap: u64,
}

impl HorizonPolicy {
    pub const DEFAULT_CAP: u64 = 1 << 20;

    pub fn adaptive(cap: u64) -> Self {
        HorizonPolicy { initial: None, cap }
    }

    /// Single attempt at exactly `horizon`.
    pub fn fixed(horizon: u64) -> Self {
        HorizonPolicy {
            initial: Some(horizon),
            cap: horizon,
        }
    }

    pub fn start(&self, distance: u32) -> u64 {
        self.initial
            .unwrap_or(4 * distance as u64 + 64)
            .min(self.cap)
    }
}

impl Default for HorizonPolicy {
    fn default() -> Self {
        Self::adaptive(Self::DEFAULT_CAP)
    }
}

pub fn passage_time_adaptive(
    field: &WalkField,
    source: Site,
    destination: Site,
    mask: &FrogMask,
    policy: &HorizonPolicy,
) -> Result<PassageSample, FrogError> {
    let mut horizon = policy.start(source.l1_dist(&destination));
    loop {
        match passage_time(field, source, destination, mask, horizon) {
            Err(FrogError::NotReached { .. }) if horizon < policy.cap => {
                horizon = horizon.saturating_mul(2).min(policy.cap);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_start() {
        assert_eq!(HorizonPolicy::default().start(10), 104);
        assert_eq!(HorizonPolicy::adaptive(50).start(10), 50);
        assert_eq!(HorizonPolicy::fixed(7).start(100), 7);
    }

    #[test]
    fn doubling_is_stable() {
        let f = WalkField::new(11, 3, 2).unwrap();
        let o = Site::origin(2);
        let x = Site::new(&[6, 2]);
        let a = passage_time_adaptive(&f, o, x, &FrogMask::empty(), &HorizonPolicy::adaptive(1 << 16))
            .unwrap();
        let b = passage_time(&f, o, x, &FrogMask::empty(), 2 * (a.value + 1)).unwrap();
        assert_eq!(a, b);
        let tight = passage_time(&f, o, x, &FrogMask::empty(), a.value).unwrap();
        assert_eq!(a, tight);
        assert!(passage_time(&f, o, x, &FrogMask::empty(), a.value - 1)
            .unwrap_err()
            .is_not_reached());
    }
}
