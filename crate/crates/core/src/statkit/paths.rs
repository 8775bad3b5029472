use serde::Serialize;

use super::StatError;
use crate::frogcore::PassageSample;

/// Genealogy-path lengths `l` (hop counts) normalized by `n`, and the
/// distribution of the maximal jump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathLengthStats {
    pub n: u32,
    pub count: usize,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    /// `max T / n` over the same samples.
    pub max_time_ratio: f64,
    /// `jump_histogram[k]` counts samples with maximal jump `k`.
    pub jump_histogram: Vec<u64>,
    /// `jump_survival[k]` is the empirical `P(max jump >= k)`.
    pub jump_survival: Vec<f64>,
}

/// The parts of a [`PassageSample`] the path statistics read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathRecord {
    pub value: u64,
    pub hops: usize,
    pub max_jump: u32,
}

impl From<&PassageSample> for PathRecord {
    fn from(s: &PassageSample) -> Self {
        PathRecord {
            value: s.value,
            hops: s.hops(),
            max_jump: s.max_jump,
        }
    }
}

pub fn path_length_stats(samples: &[PassageSample], n: u32) -> Result<PathLengthStats, StatError> {
    let records: Vec<PathRecord> = samples.iter().map(PathRecord::from).collect();
    path_record_stats(&records, n)
}

pub fn path_record_stats(samples: &[PathRecord], n: u32) -> Result<PathLengthStats, StatError> {
    if samples.is_empty() {
        return Err(StatError::Underfull { needed: 1, got: 0 });
    }
    if n == 0 {
        return Err(StatError::InvalidArgument("n must be positive".into()));
    }
    let nf = n as f64;
    let lens: Vec<f64> = samples.iter().map(|s| s.hops as f64 / nf).collect();
    let min_ratio = lens.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = lens.iter().copied().fold(0.0, f64::max);
    let mean_ratio = lens.iter().sum::<f64>() / lens.len() as f64;
    let max_time_ratio = samples.iter().map(|s| s.value).max().unwrap_or(0) as f64 / nf;
    let top = samples.iter().map(|s| s.max_jump).max().unwrap_or(0) as usize;
    let mut jump_histogram = vec![0u64; top + 1];
    for s in samples {
        jump_histogram[s.max_jump as usize] += 1;
    }
    let total = samples.len() as f64;
    let mut jump_survival = vec![0.0; top + 1];
    let mut above = 0u64;
    for k in (0..=top).rev() {
        above += jump_histogram[k];
        jump_survival[k] = above as f64 / total;
    }
    Ok(PathLengthStats {
        n,
        count: samples.len(),
        min_ratio,
        mean_ratio,
        max_ratio,
        max_time_ratio,
        jump_histogram,
        jump_survival,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statkit::sample_passage;
    use crate::frogcore::HorizonPolicy;
    use crate::walkfield::Site;

    #[test]
    fn bounds_hold() {
        let x = Site::new(&[12, 0]);
        let samples: Vec<_> = (0..20)
            .map(|r| sample_passage(3, r, x, &HorizonPolicy::default()).unwrap())
            .collect();
        let st = path_length_stats(&samples, 12).unwrap();
        assert!(st.min_ratio > 0.0);
        assert!(st.max_ratio <= st.max_time_ratio);
        assert_eq!(st.jump_survival[0], 1.0);
        assert_eq!(st.jump_histogram.iter().sum::<u64>(), 20);
        assert!(st.jump_survival.windows(2).all(|w| w[0] >= w[1]));
    }
}
