use froglab::walkfield::keyed::{stream_word, KeyedRng};
use froglab::walkfield::{
    hitting_time, walk_position, FaultHook, Hitting, LatticeBox, Site, Walk, WalkField, WalkKey,
};
use proptest::prelude::*;

/// Decodes step `j` of a keyed walk straight from the stream words.
fn replay_direction(key: &WalkKey, j: u64) -> u8 {
    let dim = key.site.dim();
    let dirs = 2 * dim as u64;
    let stream = key.stream_id();
    if dirs.is_power_of_two() {
        let bits = dirs.trailing_zeros() as u64;
        let per_word = 64 / bits;
        let word = stream_word(stream, j / per_word);
        ((word >> (bits * (j % per_word))) & (dirs - 1)) as u8
    } else {
        ((stream_word(stream, j) as u128 * dirs as u128) >> 64) as u8
    }
}

fn replay_positions(key: &WalkKey, steps: u64) -> Vec<Site> {
    let mut out = vec![key.site];
    let mut cur = key.site;
    for j in 0..steps {
        let axis = (replay_direction(key, j) / 2) as usize;
        let delta = if replay_direction(key, j).is_multiple_of(2) { 1 } else { -1 };
        cur = cur.with_coord(axis, cur.coord(axis) + delta);
        out.push(cur);
    }
    out
}

fn replay_hitting(key: &WalkKey, target: Site, horizon: u64) -> Option<u64> {
    replay_positions(key, horizon)
        .iter()
        .position(|p| *p == target)
        .map(|j| j as u64)
}

#[test]
fn position_zero_is_the_key_site() {
    for dim in 1..=4 {
        let site = Site::new(&vec![3; dim]);
        let key = WalkKey::new(9, 2, site);
        assert_eq!(walk_position(&key, 0), site);
    }
}

#[test]
fn hitting_own_site_is_zero() {
    let key = WalkKey::new(1, 0, Site::new(&[4, -4]));
    for h in [0, 1, 100] {
        assert_eq!(hitting_time(&key, key.site, h), Hitting::Hit(0));
    }
}

#[test]
fn hitting_matches_naive_replay() {
    let horizon = 10_000;
    let mut found = 0;
    for seed in 0..50 {
        let key = WalkKey::new(seed, 0, Site::origin(2));
        let target = Site::new(&[1, 1]);
        let want = replay_hitting(&key, target, horizon);
        assert_eq!(hitting_time(&key, target, horizon).time(), want, "seed {seed}");
        found += want.is_some() as u32;
    }
    assert!(found > 30);
}

#[test]
fn positions_match_naive_replay_in_all_dims() {
    for dim in 1..=4 {
        let key = WalkKey::new(77, 5, Site::origin(dim));
        let want = replay_positions(&key, 300);
        let mut walk = Walk::new(&key);
        for (j, w) in want.iter().enumerate() {
            assert_eq!(walk.position(), *w, "d={dim} j={j}");
            walk.advance();
        }
        assert_eq!(walk_position(&key, 300), want[300]);
    }
}

#[test]
fn direction_frequencies_are_uniform() {
    for dim in [1usize, 2, 3] {
        let key = WalkKey::new(2024, 0, Site::origin(dim));
        let n = 100_000u64;
        let k = 2 * dim;
        let mut counts = vec![0u64; k];
        let mut prev = key.site;
        for step in Walk::new(&key).take(n as usize) {
            let diff: Vec<i32> = step
                .position
                .coords()
                .iter()
                .zip(prev.coords())
                .map(|(a, b)| a - b)
                .collect();
            let axis = diff.iter().position(|c| *c != 0).unwrap();
            counts[2 * axis + (diff[axis] < 0) as usize] += 1;
            prev = step.position;
        }
        let p = 1.0 / k as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * p).abs() < 3.0 * sd, "d={dim} count {c}");
        }
    }
}

#[test]
fn neighbouring_first_steps_are_uncorrelated() {
    // Matching first directions at x and x + e1 over 10^4 sites.
    let field = WalkField::new(5, 0, 2).unwrap();
    let sites: Vec<Site> = LatticeBox::ball(2, 49).iter().take(10_000).collect();
    let matches = sites
        .iter()
        .filter(|x| {
            let y = x.step(0);
            field.position(**x, 1) - **x == field.position(y, 1) - y
        })
        .count() as f64;
    let n = sites.len() as f64;
    let sd = (n * 0.25 * 0.75).sqrt();
    assert!((matches - n * 0.25).abs() < 3.0 * sd, "{matches}");
}

#[test]
fn replicas_and_seeds_give_distinct_streams() {
    let o = Site::origin(2);
    let a = replay_positions(&WalkKey::new(1, 0, o), 64);
    let b = replay_positions(&WalkKey::new(1, 1, o), 64);
    let c = replay_positions(&WalkKey::new(2, 0, o), 64);
    assert_ne!(a, b);
    assert_ne!(a, c);
}

#[test]
fn rekey_touches_only_listed_sites() {
    let f = WalkField::new(3, 0, 2).unwrap();
    let z = Site::new(&[1, 0]);
    let g = f.resampled_at([z], 99);
    assert_eq!(g.key(z).replica, 99);
    for s in LatticeBox::ball(2, 3).iter().filter(|s| *s != z) {
        assert_eq!(g.key(s), f.key(s));
    }
    let h = f.resampled_outside(Site::origin(2), 2, 7);
    assert_eq!(h.key(Site::new(&[2, -2])).replica, 0);
    assert_eq!(h.key(Site::new(&[3, 0])).replica, 7);
}

#[test]
fn fault_hook_desynchronizes_queries() {
    let f = WalkField::new(3, 0, 2).unwrap();
    let bad = f.clone().with_fault(FaultHook::CorruptHittingKeys);
    let o = Site::origin(2);
    // Stepping is untouched, hitting queries read another replica.
    assert_eq!(bad.position(o, 40), f.position(o, 40));
    let differs = LatticeBox::ball(2, 2)
        .iter()
        .any(|t| bad.hitting_time(o, t, 500) != f.hitting_time(o, t, 500));
    assert!(differs);
}

#[test]
fn keyed_rng_below_is_in_range() {
    let mut r = KeyedRng::from_parts(1, 2, 3);
    for n in 1..200 {
        assert!(r.below(n) < n);
    }
}

fn site_strategy(dim: usize, r: i32) -> impl Strategy<Value = Site> {
    prop::collection::vec(-r..=r, dim).prop_map(|c| Site::new(&c))
}

proptest! {
    #[test]
    fn walk_steps_are_unit(seed in any::<u64>(), replica in 0u64..4, dim in 1usize..=4, j in 0u64..500) {
        let key = WalkKey::new(seed, replica, Site::origin(dim));
        let a = walk_position(&key, j);
        let b = walk_position(&key, j + 1);
        prop_assert_eq!(a.l1_dist(&b), 1);
        prop_assert_eq!(walk_position(&key, j), a);
    }

    #[test]
    fn hitting_bound_and_parity(seed in any::<u64>(), target in site_strategy(2, 4)) {
        let key = WalkKey::new(seed, 0, Site::origin(2));
        if let Hitting::Hit(t) = hitting_time(&key, target, 2_000) {
            let d = target.l1() as u64;
            prop_assert!(t >= d);
            prop_assert_eq!(t % 2, d % 2);
            prop_assert_eq!(walk_position(&key, t), target);
        }
    }

    #[test]
    fn hitting_is_monotone_in_horizon(seed in any::<u64>(), target in site_strategy(3, 2), h in 0u64..300) {
        let key = WalkKey::new(seed, 1, Site::origin(3));
        if let Hitting::Hit(t) = hitting_time(&key, target, h) {
            prop_assert_eq!(hitting_time(&key, target, h + 100), Hitting::Hit(t));
        }
    }
}
