use froglab::frogcore::HorizonPolicy;
use froglab::statkit::{
    bootstrap_interval, fm_variance_gap, moments, moments_with, path_length_stats,
    quantile_sorted, sample_passage, scaling_table, tail_curve, wilson_interval, BootstrapOptions,
    FmGapConfig, SampleMeta, SampleSet, ScalingConfig, StatError, Z95,
};
use froglab::walkfield::Site;
use proptest::prelude::*;

fn set(values: Vec<f64>) -> SampleSet {
    SampleSet::new("t", values, SampleMeta::default()).unwrap()
}

fn passages(seed: u64, n: i32, replicas: u64) -> Vec<f64> {
    (0..replicas)
        .map(|r| {
            sample_passage(seed, r, Site::new(&[n, 0]), &HorizonPolicy::default())
                .unwrap()
                .value as f64
        })
        .collect()
}

#[test]
fn moments_examples() {
    let c = moments(&set(vec![4.0; 10])).unwrap();
    assert_eq!((c.mean, c.variance), (4.0, 0.0));
    assert_eq!((c.var_ci.lo, c.var_ci.hi), (0.0, 0.0));
    let m = moments(&set(vec![1.0, 2.0, 3.0])).unwrap();
    assert_eq!((m.mean, m.variance), (2.0, 1.0));
    assert!(m.mean_ci.contains(2.0));
    assert!(matches!(
        moments(&set(vec![1.0])),
        Err(StatError::Underfull { needed: 2, got: 1 })
    ));
    assert!(SampleSet::new("bad", vec![1.0, f64::NAN], SampleMeta::default()).is_err());
}

#[test]
fn quantiles_interpolate_linearly() {
    let s = [1.0, 2.0, 3.0, 4.0];
    assert_eq!(quantile_sorted(&s, 0.0), 1.0);
    assert_eq!(quantile_sorted(&s, 0.5), 2.5);
    assert_eq!(quantile_sorted(&s, 0.25), 1.75);
    assert_eq!(quantile_sorted(&s, 1.0), 4.0);
    assert_eq!(quantile_sorted(&[7.0], 0.3), 7.0);
}

#[test]
fn bootstrap_is_keyed_and_reproducible() {
    let v = passages(3, 8, 60);
    let a = moments_with(&v, &BootstrapOptions::with_seed(1)).unwrap();
    let b = moments_with(&v, &BootstrapOptions::with_seed(1)).unwrap();
    let c = moments_with(&v, &BootstrapOptions::with_seed(2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.var_ci, c.var_ci);
    assert!(a.mean_ci.contains(a.mean) && a.var_ci.contains(a.variance));
    // Resampling only one value gives a degenerate interval.
    let i = bootstrap_interval(5, &BootstrapOptions::with_seed(4), |idx| idx.len() as f64);
    assert_eq!((i.lo, i.hi), (5.0, 5.0));
}

#[test]
fn wilson_matches_closed_form() {
    let i = wilson_interval(30, 100, Z95);
    // Standard Wilson score bounds for 30/100 at 95%.
    assert!((i.lo - 0.2189).abs() < 1e-3 && (i.hi - 0.3958).abs() < 1e-3, "{i:?}");
    assert_eq!(wilson_interval(0, 0, Z95).hi, 1.0);
    assert_eq!(wilson_interval(0, 50, Z95).lo, 0.0);
}

#[test]
fn tail_curve_edges() {
    let v = [3.0, 5.0, 5.0, 9.0];
    let t = tail_curve(&v, &[0.0, 5.0, 9.5]).unwrap();
    assert_eq!(t[0].survival, 1.0);
    assert_eq!(t[1].survival, 0.75);
    assert_eq!(t[2].survival, 0.0);
    assert!(t.iter().all(|p| p.ci.contains(p.survival)));
    assert!(matches!(tail_curve(&v, &[2.0, 1.0]), Err(StatError::UnsortedThresholds)));
}

#[test]
fn passage_tail_at_twice_the_mean() {
    let v = passages(24, 24, 10_000);
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let t = tail_curve(&v, &[2.0 * m]).unwrap();
    assert!(t[0].survival < 0.01, "{}", t[0].survival);
}

#[test]
fn one_point_grid_is_reproducible() {
    let cfg = ScalingConfig::new(2, vec![8], 10, 5);
    let a = scaling_table(&cfg, 1).unwrap();
    let b = scaling_table(&cfg, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.len(), 1);
    let r = &a.rows[0];
    assert_eq!((r.n, r.replicas, r.censored), (8, 10, 0));
    let v: Vec<f64> = a.samples[0].iter().map(|s| s.value as f64).collect();
    assert_eq!(v, passages(5, 8, 10));
    assert_eq!(r.kappa_hat, r.mean / 8.0);
    assert!((r.var_logn_over_n - r.var * 8f64.ln() / 8.0).abs() < 1e-9);
    assert!(r.var >= 0.0);
}

#[test]
fn nested_subsamples_agree() {
    let mut agree = 0;
    let trials = 20;
    for seed in 0..trials {
        let v = passages(100 + seed, 8, 200);
        let half = moments_with(&v[..100], &BootstrapOptions::with_seed(seed)).unwrap();
        let full = moments_with(&v, &BootstrapOptions::with_seed(seed)).unwrap();
        assert!(full.mean_ci.half_width() < half.mean_ci.half_width());
        agree += half.mean_ci.overlaps(&full.mean_ci) as u32;
    }
    assert!(agree as f64 >= 0.95 * trials as f64, "{agree}/{trials}");
}

#[test]
fn path_stats_basic_bounds() {
    let cfg = ScalingConfig::new(2, vec![16], 50, 9);
    let t = scaling_table(&cfg, 1).unwrap();
    let s = path_length_stats(&t.samples[0], 16).unwrap();
    assert_eq!(s.count, 50);
    assert!(s.min_ratio > 0.0);
    assert!(s.min_ratio <= s.mean_ratio && s.mean_ratio <= s.max_ratio);
    assert!(s.max_ratio <= s.max_time_ratio);
    assert_eq!(s.jump_histogram.iter().sum::<u64>(), 50);
    assert_eq!(s.jump_survival[0], 1.0);
    assert!(s.jump_survival.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn fm_gap_is_reproducible() {
    let cfg = FmGapConfig {
        x: Site::new(&[16, 0]),
        replicas: 20,
        master_seed: 2,
        policy: HorizonPolicy::default(),
    };
    let a = fm_variance_gap(&cfg, 1).unwrap();
    let b = fm_variance_gap(&cfg, 2).unwrap();
    assert_eq!(a, b);
    assert_eq!((a.m, a.terms, a.replicas), (2, 25, 20));
    assert!((a.gap - (a.var_t - a.var_f)).abs() < 1e-9);
    assert!((a.gap_normalized - a.gap / 16f64.powf(0.75)).abs() < 1e-9);
    assert!(a.gap_ci.contains(a.gap));
    // Replica 0 of T agrees with a standalone passage computation.
    assert_eq!(a.samples[0].t as f64, passages(2, 16, 1)[0]);
}

proptest! {
    #[test]
    fn mean_and_variance_match_two_pass(v in prop::collection::vec(-1e3f64..1e3, 2..50)) {
        let m = moments_with(&v, &BootstrapOptions { resamples: 50, level: 0.9, seed: 1 }).unwrap();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        prop_assert!((m.mean - mean).abs() < 1e-9);
        prop_assert!((m.variance - var).abs() < 1e-6 * (1.0 + var));
        prop_assert!(m.var_ci.lo >= 0.0 && m.var_ci.lo <= m.var_ci.hi);
    }

    #[test]
    fn survival_is_non_increasing(v in prop::collection::vec(0f64..100.0, 1..60), mut t in prop::collection::vec(0f64..120.0, 1..10)) {
        t.sort_by(f64::total_cmp);
        let c = tail_curve(&v, &t).unwrap();
        prop_assert!(c.windows(2).all(|w| w[0].survival >= w[1].survival));
    }
}
