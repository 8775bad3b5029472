use serde::Serialize;

use super::{bootstrap_interval, variance, BootstrapOptions, Interval, StatError};
use crate::frogcore::{passage_time_adaptive, spatial_average, FrogError, FrogMask, HorizonPolicy};
use crate::sched::parallel_map;
use crate::walkfield::keyed::derive_seed;
use crate::walkfield::{Site, WalkField};

const FMGAP_TAG: u64 = 0x464d_4741_5000_0001;

#[derive(Debug, Clone, PartialEq)]
pub struct FmGapConfig {
    pub x: Site,
    pub replicas: u64,
    pub master_seed: u64,
    pub policy: HorizonPolicy,
}

/// `T(0, x)` and `F_m` on one replica.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FmGapSample {
    pub replica: u64,
    pub t: u64,
    /// `sum_{z in B(m)} T(z, z + x)`; `F_m` is this over `terms`.
    pub f_sum: u64,
    pub m: u32,
    pub terms: usize,
}

impl FmGapSample {
    pub fn f(&self) -> f64 {
        self.f_sum as f64 / self.terms as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FmGapReport {
    pub x: Vec<i32>,
    pub m: u32,
    pub terms: usize,
    pub replicas: usize,
    pub var_t: f64,
    pub var_f: f64,
    /// `var_t - var_f`
    pub gap: f64,
    pub gap_ci: Interval,
    /// `gap / |x|_1^{3/4}`
    pub gap_normalized: f64,
    pub sd_t: f64,
    pub sd_f: f64,
    /// Paired interval for `sd_t - sd_f`.
    pub sd_diff_ci: Interval,
    /// `sd_f <= sd_t` is not contradicted: the interval for `sd_t - sd_f`
    /// reaches 0 or above.
    pub sd_check: bool,
    pub samples: Vec<FmGapSample>,
}

/// `T(0, x)` and `F_m` on replica `replica`, sharing one field.
pub fn fm_gap_sample(
    master_seed: u64,
    replica: u64,
    x: Site,
    policy: &HorizonPolicy,
) -> Result<FmGapSample, FrogError> {
    let dim = x.dim();
    let field = WalkField::new(master_seed, replica, dim)?;
    let t = passage_time_adaptive(&field, Site::origin(dim), x, &FrogMask::empty(), policy)?.value;
    let f = spatial_average(&field, x, policy)?;
    Ok(FmGapSample {
        replica,
        t,
        f_sum: f.sum,
        m: f.m,
        terms: f.terms,
    })
}

/// Variances, their gap and the standard-deviation check over `samples`.
pub fn fm_gap_report(
    x: Site,
    master_seed: u64,
    samples: Vec<FmGapSample>,
) -> Result<FmGapReport, StatError> {
    if samples.len() < 2 {
        return Err(StatError::Underfull {
            needed: 2,
            got: samples.len(),
        });
    }
    let (m, terms) = (samples[0].m, samples[0].terms);
    let ts: Vec<f64> = samples.iter().map(|s| s.t as f64).collect();
    let fs: Vec<f64> = samples.iter().map(FmGapSample::f).collect();
    let var_t = variance(&ts);
    let var_f = variance(&fs);
    let opts = BootstrapOptions::with_seed(derive_seed(FMGAP_TAG, master_seed, x.l1() as u64));
    let mut bt = Vec::with_capacity(ts.len());
    let mut bf = Vec::with_capacity(fs.len());
    let mut pair = |idx: &[usize]| {
        bt.clear();
        bf.clear();
        bt.extend(idx.iter().map(|&i| ts[i]));
        bf.extend(idx.iter().map(|&i| fs[i]));
        (variance(&bt), variance(&bf))
    };
    let gap_ci = bootstrap_interval(ts.len(), &opts, |idx| {
        let (a, b) = pair(idx);
        a - b
    });
    let sd_diff_ci = bootstrap_interval(ts.len(), &opts, |idx| {
        let (a, b) = pair(idx);
        a.sqrt() - b.sqrt()
    });
    let gap = var_t - var_f;
    Ok(FmGapReport {
        x: x.coords().to_vec(),
        m,
        terms,
        replicas: samples.len(),
        var_t,
        var_f,
        gap,
        gap_ci,
        gap_normalized: gap / (x.l1() as f64).powf(0.75),
        sd_t: var_t.sqrt(),
        sd_f: var_f.sqrt(),
        sd_diff_ci,
        sd_check: sd_diff_ci.hi >= 0.0,
        samples,
    })
}

/// `Var T(0, x)` against `Var F_m` on coupled fields, replicas `0..replicas`.
pub fn fm_variance_gap(config: &FmGapConfig, workers: usize) -> Result<FmGapReport, StatError> {
    let results = parallel_map(config.replicas as usize, workers, |r| {
        fm_gap_sample(config.master_seed, r as u64, config.x, &config.policy)
    });
    let samples = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    fm_gap_report(config.x, config.master_seed, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_report() {
        let c = FmGapConfig {
            x: Site::new(&[4, 0]),
            replicas: 12,
            master_seed: 9,
            policy: HorizonPolicy::default(),
        };
        let a = fm_variance_gap(&c, 1).unwrap();
        let b = fm_variance_gap(&c, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.m, a.terms), (1, 9));
        assert!(a.samples.iter().all(|s| s.f_sum >= 4 * 9));
    }
}
