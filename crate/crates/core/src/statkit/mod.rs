//! Estimators and experiment analytics: moments with bootstrap intervals,
//! tail curves, variance-scaling tables, path-length statistics and the
//! spatial-average variance gap.

mod fmgap;
mod paths;
mod scaling;

use serde::Serialize;
use thiserror::Error;

use crate::frogcore::FrogError;
use crate::walkfield::keyed::{absorb, derive_seed, KeyedRng};

pub use fmgap::{fm_gap_report, fm_gap_sample, fm_variance_gap, FmGapConfig, FmGapReport, FmGapSample};
pub use paths::{path_length_stats, path_record_stats, PathLengthStats, PathRecord};
pub use scaling::{sample_passage, scaling_row, scaling_table, ScalingConfig, ScalingRow, ScalingTable};

const BOOTSTRAP_TAG: u64 = 0x424f_4f54_5354_5250;

/// Two-sided standard normal quantile for 95%.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatError {
    #[error("need at least {needed} samples, got {got}")]
    Underfull { needed: usize, got: usize },
    #[error("non-finite sample value {0}")]
    NonFinite(f64),
    #[error("thresholds must be sorted ascending")]
    UnsortedThresholds,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Frog(#[from] FrogError),
}

/// Where a sample set came from; enough to regenerate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct SampleMeta {
    pub dim: usize,
    /// Target displacement `x`.
    pub target: Vec<i32>,
    pub replica_start: u64,
    pub replica_end: u64,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    pub label: String,
    pub values: Vec<f64>,
    pub meta: SampleMeta,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, values: Vec<f64>, meta: SampleMeta) -> Result<Self, StatError> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(StatError::NonFinite(bad));
        }
        Ok(SampleSet {
            label: label.into(),
            values,
            meta,
        })
    }

    /// Bootstrap stream for this set.
    pub fn bootstrap_seed(&self) -> u64 {
        let mut h = derive_seed(BOOTSTRAP_TAG, self.meta.master_seed, self.meta.replica_start);
        h = absorb(h, self.meta.replica_end);
        for b in self.label.bytes() {
            h = absorb(h, b as u64);
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn scaled(&self, k: f64) -> Interval {
        let (a, b) = (self.lo * k, self.hi * k);
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapOptions {
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl BootstrapOptions {
    pub fn with_seed(seed: u64) -> Self {
        BootstrapOptions {
            resamples: 1000,
            level: 0.95,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub mean_ci: Interval,
    pub var_ci: Interval,
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased variance; 0 for fewer than two values.
pub fn variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    ss / (values.len() - 1) as f64
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Percentile bootstrap: `stat` receives resampled indices into `0..n`.
pub fn bootstrap_interval<F>(n: usize, opts: &BootstrapOptions, mut stat: F) -> Interval
where
    F: FnMut(&[usize]) -> f64,
{
    let mut rng = KeyedRng::new(opts.seed);
    let mut idx = vec![0usize; n];
    let mut stats = Vec::with_capacity(opts.resamples);
    for _ in 0..opts.resamples {
        for slot in idx.iter_mut() {
            *slot = rng.below(n as u64) as usize;
        }
        stats.push(stat(&idx));
    }
    stats.sort_by(f64::total_cmp);
    let tail = (1.0 - opts.level) / 2.0;
    Interval {
        lo: quantile_sorted(&stats, tail),
        hi: quantile_sorted(&stats, 1.0 - tail),
    }
}

pub fn moments_with(values: &[f64], opts: &BootstrapOptions) -> Result<Moments, StatError> {
    if values.len() < 2 {
        return Err(StatError::Underfull {
            needed: 2,
            got: values.len(),
        });
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(StatError::NonFinite(bad));
    }
    let resampled = |idx: &[usize], buf: &mut Vec<f64>| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| values[i]));
    };
    let mut buf = Vec::with_capacity(values.len());
    let mean_ci = bootstrap_interval(values.len(), opts, |idx| {
        resampled(idx, &mut buf);
        mean(&buf)
    });
    let var_ci = bootstrap_interval(values.len(), opts, |idx| {
        resampled(idx, &mut buf);
        variance(&buf)
    });
    Ok(Moments {
        count: values.len(),
        mean: mean(values),
        variance: variance(values),
        mean_ci,
        var_ci,
    })
}

/// Mean, unbiased variance and 95% bootstrap intervals (1000 resamples).
pub fn moments(samples: &SampleSet) -> Result<Moments, StatError> {
    moments_with(&samples.values, &BootstrapOptions::with_seed(samples.bootstrap_seed()))
}

pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> Interval {
    if trials == 0 {
        return Interval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The bounds are exactly 0 and 1 at the extremes; avoid rounding residue.
    Interval {
        lo: if successes == 0 { 0.0 } else { (center - half).max(0.0) },
        hi: if successes >= trials { 1.0 } else { (center + half).min(1.0) },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailPoint {
    pub threshold: f64,
    /// Empirical `P(X >= threshold)`.
    pub survival: f64,
    pub ci: Interval,
}

/// Empirical survival function at each threshold with Wilson 95% intervals.
pub fn tail_curve(values: &[f64], thresholds: &[f64]) -> Result<Vec<TailPoint>, StatError> {
    if values.is_empty() {
        return Err(StatError::Underfull { needed: 1, got: 0 });
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(StatError::UnsortedThresholds);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(thresholds
        .iter()
        .map(|&t| {
            let below = sorted.partition_point(|&v| v < t);
            let above = sorted.len() - below;
            TailPoint {
                threshold: t,
                survival: above as f64 / sorted.len() as f64,
                ci: wilson_interval(above, sorted.len(), Z95),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: Vec<f64>) -> SampleSet {
        SampleSet::new("t", values, SampleMeta::default()).unwrap()
    }

    #[test]
    fn small_moments() {
        let m = moments(&set(vec![1.0, 2.0, 3.0])).unwrap();
        assert_eq!(m.mean, 2.0);
        assert_eq!(m.variance, 1.0);
        assert!(m.mean_ci.contains(m.mean));
        let c = moments(&set(vec![4.0; 10])).unwrap();
        assert_eq!(c.variance, 0.0);
        assert_eq!(c.var_ci, Interval { lo: 0.0, hi: 0.0 });
        assert!(matches!(
            moments(&set(vec![1.0])),
            Err(StatError::Underfull { .. })
        ));
    }

    #[test]
    fn rejects_nan() {
        assert!(SampleSet::new("x", vec![1.0, f64::NAN], SampleMeta::default()).is_err());
    }

    #[test]
    fn tails() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let t = tail_curve(&v, &[0.0, 2.5, 9.0]).unwrap();
        assert_eq!(t[0].survival, 1.0);
        assert_eq!(t[1].survival, 0.5);
        assert_eq!(t[2].survival, 0.0);
        assert!(t[2].ci.hi > 0.0);
        assert!(tail_curve(&v, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn wilson_matches_known_value() {
        // 5 of 10 at 95%: (0.2366, 0.7634)
        let w = wilson_interval(5, 10, Z95);
        assert!((w.lo - 0.236_593).abs() < 1e-5);
        assert!((w.hi - 0.763_407).abs() < 1e-5);
    }
}
