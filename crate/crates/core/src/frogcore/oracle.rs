//! Independent reference computations used to cross-check the engine.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{
    passage_time_adaptive, removed_passage_time, FrogError, FrogMask, HorizonPolicy, T2Value,
};
use crate::walkfield::{LatticeBox, Site, WalkField};

/// Shortest chain from `source` to `destination` on the complete directed
/// graph over the unmasked sites of `source + [-box_radius, box_radius]^d`,
/// edge `u -> v` weighted by `t(u, v)` when that is at most `horizon`.
///
/// The destination may be masked: it then only terminates chains.
pub fn dijkstra_oracle(
    field: &WalkField,
    source: Site,
    destination: Site,
    mask: &FrogMask,
    box_radius: u32,
    horizon: u64,
) -> Result<u64, FrogError> {
    source.ensure_dim(field.dim())?;
    destination.ensure_dim(field.dim())?;
    if mask.contains(&source) {
        return Err(FrogError::SourceMasked(source));
    }
    let region = LatticeBox::centered(source, box_radius);
    if !region.contains(&destination) {
        return Err(FrogError::NotReached { horizon });
    }
    let mut dist: FxHashMap<Site, u64> = FxHashMap::default();
    let mut heap = BinaryHeap::new();
    dist.insert(source, 0);
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist.get(&u).is_some_and(|&best| best < d) {
            continue;
        }
        if u == destination {
            return Ok(d);
        }
        // Edges longer than the remaining budget cannot matter.
        let edges = field.first_visits(u, horizon - d, Some(&region));
        for (v, t) in edges {
            if v == u || (mask.contains(&v) && v != destination) {
                continue;
            }
            let nd = d + t;
            if dist.get(&v).is_none_or(|&best| nd < best) {
                dist.insert(v, nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Err(FrogError::NotReached { horizon })
}

/// `sup_z T^[z](u, v)` by sweeping every `z` in `u + [-radius, radius]^d`.
///
/// Sites farther than `T(u, v)` from `u` cannot lie on any chain of cost
/// `T(u, v)`, so `radius >= T(u, v)` makes the sweep exhaustive.
pub fn t2_by_sweep(
    field: &WalkField,
    u: Site,
    v: Site,
    radius: u32,
    policy: &HorizonPolicy,
) -> Result<T2Value, FrogError> {
    let base = passage_time_adaptive(field, u, v, &FrogMask::empty(), policy)?;
    let mut best = T2Value {
        value: base.value,
        maximizer: None,
    };
    for z in LatticeBox::centered(u, radius).iter() {
        let t = removed_passage_time(field, u, v, z, policy)?.value;
        if t > best.value {
            best = T2Value {
                value: t,
                maximizer: Some(z),
            };
        }
    }
    Ok(best)
}
