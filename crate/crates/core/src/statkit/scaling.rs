use serde::Serialize;

use super::{moments_with, BootstrapOptions, Interval, StatError};
use crate::frogcore::{passage_time_adaptive, FrogError, FrogMask, HorizonPolicy, PassageSample};
use crate::sched::parallel_map;
use crate::walkfield::keyed::derive_seed;
use crate::walkfield::{Site, WalkField};

const SCALING_TAG: u64 = 0x5343_414c_494e_4700;

/// `T(0, x)` on replica `replica` of the field with master seed `master_seed`.
pub fn sample_passage(
    master_seed: u64,
    replica: u64,
    x: Site,
    policy: &HorizonPolicy,
) -> Result<PassageSample, FrogError> {
    let field = WalkField::new(master_seed, replica, x.dim())?;
    passage_time_adaptive(&field, Site::origin(x.dim()), x, &FrogMask::empty(), policy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    pub dim: usize,
    pub grid: Vec<u32>,
    pub replicas: u64,
    pub master_seed: u64,
    /// Unit of the target: `x = n * direction`.
    pub direction: Site,
    pub policy: HorizonPolicy,
}

impl ScalingConfig {
    pub fn new(dim: usize, grid: Vec<u32>, replicas: u64, master_seed: u64) -> Self {
        ScalingConfig {
            dim,
            grid,
            replicas,
            master_seed,
            direction: Site::unit(dim, 0, 1),
            policy: HorizonPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub d: usize,
    pub n: u32,
    /// Replicas that resolved; censored ones are excluded.
    pub replicas: usize,
    pub censored: usize,
    pub mean: f64,
    pub var: f64,
    pub var_over_n: f64,
    pub var_logn_over_n: f64,
    pub kappa_hat: f64,
    pub mean_ci: Interval,
    pub var_ci: Interval,
}

impl ScalingRow {
    pub fn ci_mean(&self) -> f64 {
        self.mean_ci.half_width()
    }

    pub fn ci_var(&self) -> f64 {
        self.var_ci.half_width()
    }

    /// Bootstrap interval of `var / n`.
    pub fn var_over_n_ci(&self) -> Interval {
        self.var_ci.scaled(1.0 / self.n as f64)
    }
}

/// One row from the resolved passage times at `n`.
pub fn scaling_row(
    d: usize,
    n: u32,
    values: &[u64],
    censored: usize,
    master_seed: u64,
) -> Result<ScalingRow, StatError> {
    if n == 0 {
        return Err(StatError::InvalidArgument("n must be positive".into()));
    }
    if values.len() < 2 {
        return Err(StatError::Underfull {
            needed: 2,
            got: values.len(),
        });
    }
    let v: Vec<f64> = values.iter().map(|&t| t as f64).collect();
    let opts = BootstrapOptions::with_seed(derive_seed(
        SCALING_TAG,
        master_seed,
        ((d as u64) << 32) | n as u64,
    ));
    let mo = moments_with(&v, &opts)?;
    let (m, var) = (mo.mean, mo.variance);
    let nf = n as f64;
    Ok(ScalingRow {
        d,
        n,
        replicas: v.len(),
        censored,
        mean: m,
        var,
        var_over_n: var / nf,
        var_logn_over_n: var * nf.ln() / nf,
        kappa_hat: m / nf,
        mean_ci: mo.mean_ci,
        var_ci: mo.var_ci,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// `samples[i]` holds the resolved passages at `grid[i]`, by replica.
    pub samples: Vec<Vec<PassageSample>>,
    pub censored: usize,
}

/// Samples `T(0, n e)` for every `n` in the grid and replicas
/// `0..replicas`; replica `r` uses the same field at every `n`.
pub fn scaling_table(config: &ScalingConfig, workers: usize) -> Result<ScalingTable, StatError> {
    config.direction.ensure_dim(config.dim).map_err(FrogError::from)?;
    let per = config.replicas as usize;
    let tasks = config.grid.len() * per;
    let results = parallel_map(tasks, workers, |t| {
        let n = config.grid[t / per] as i32;
        let x = Site::new(
            &config
                .direction
                .coords()
                .iter()
                .map(|c| c * n)
                .collect::<Vec<_>>(),
        );
        sample_passage(config.master_seed, (t % per) as u64, x, &config.policy)
    });
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    let mut censored_total = 0;
    for (i, chunk) in results.chunks(per.max(1)).enumerate() {
        let mut ok = Vec::new();
        let mut censored = 0;
        for r in chunk {
            match r {
                Ok(s) => ok.push(s.clone()),
                Err(e) if e.is_not_reached() => censored += 1,
                Err(e) => return Err(e.clone().into()),
            }
        }
        let values: Vec<u64> = ok.iter().map(|s| s.value).collect();
        rows.push(scaling_row(
            config.dim,
            config.grid[i],
            &values,
            censored,
            config.master_seed,
        )?);
        samples.push(ok);
        censored_total += censored;
    }
    Ok(ScalingTable {
        rows,
        samples,
        censored: censored_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_row() {
        let c = ScalingConfig::new(2, vec![8], 10, 1);
        let a = scaling_table(&c, 1).unwrap();
        let b = scaling_table(&c, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 1);
        let r = &a.rows[0];
        assert_eq!(r.replicas, 10);
        assert!(r.mean >= 8.0 && r.var >= 0.0);
        assert_eq!(r.kappa_hat, r.mean / 8.0);
    }
}
