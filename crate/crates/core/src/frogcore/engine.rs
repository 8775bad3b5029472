//! Synchronous activation dynamics.
//!
//! At each integer time `s` every active frog (origin `w`, activated at
//! `T(w)`) sits at `S^w_{s - T(w)}`. A passive, unmasked site first occupied
//! at `s` activates at `s`; when several frogs arrive together the parent is
//! the lexicographically smallest origin. Frogs are created lazily and only
//! ever lie in the l1 ball of radius `s` around the source.

use rustc_hash::FxHashMap;

use super::{FrogError, FrogMask};
use crate::walkfield::{Site, Walk, WalkField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActivationRecord {
    pub site: Site,
    pub time: u64,
    pub parent: Option<Site>,
}

/// One exact passage-time computation with its genealogy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassageSample {
    pub source: Site,
    pub destination: Site,
    pub value: u64,
    /// Optimal chain from source to destination.
    pub genealogy: Vec<Site>,
    /// `hop_times[i]` is the hitting time from `genealogy[i]` to `genealogy[i+1]`.
    pub hop_times: Vec<u64>,
    pub max_jump: u32,
    /// Largest l1 distance from the source of any activated site.
    pub frontier_radius: u32,
}

impl PassageSample {
    /// Number of hops of the genealogy chain.
    pub fn hops(&self) -> usize {
        self.hop_times.len()
    }

    /// Interior chain vertices (excluding source and destination).
    pub fn intermediates(&self) -> &[Site] {
        if self.genealogy.len() <= 2 {
            &[]
        } else {
            &self.genealogy[1..self.genealogy.len() - 1]
        }
    }
}

struct Frog {
    origin: Site,
    walk: Walk,
}

/// Activation state after a run, for callers that need the whole table.
#[derive(Debug, Clone)]
pub struct ActivationTable {
    pub source: Site,
    pub records: FxHashMap<Site, ActivationRecord>,
    /// Time the run stopped at.
    pub time: u64,
}

impl ActivationTable {
    pub fn activation_time(&self, site: &Site) -> Option<u64> {
        self.records.get(site).map(|r| r.time)
    }

    /// Chain from the source to `site` through parent pointers.
    pub fn chain_to(&self, site: Site) -> Option<Vec<Site>> {
        let mut chain = vec![site];
        let mut cur = self.records.get(&site)?;
        while let Some(p) = cur.parent {
            chain.push(p);
            cur = &self.records[&p];
        }
        chain.reverse();
        Some(chain)
    }
}

struct Engine<'a> {
    field: &'a WalkField,
    mask: &'a FrogMask,
    source: Site,
    records: FxHashMap<Site, ActivationRecord>,
    frogs: Vec<Frog>,
    frontier: u32,
    time: u64,
}

impl<'a> Engine<'a> {
    fn new(field: &'a WalkField, source: Site, mask: &'a FrogMask) -> Self {
        let mut records = FxHashMap::default();
        records.insert(
            source,
            ActivationRecord {
                site: source,
                time: 0,
                parent: None,
            },
        );
        Engine {
            field,
            mask,
            source,
            records,
            frogs: vec![Frog {
                origin: source,
                walk: field.walk(source),
            }],
            frontier: 0,
            time: 0,
        }
    }

    /// Advance one time unit. Returns the parent of `target` when `target`
    /// is first occupied during this step.
    fn step(&mut self, target: Option<Site>) -> Option<Site> {
        self.time += 1;
        let s = self.time;
        let first_new = self.frogs.len();
        let mut new_sites: Vec<Site> = Vec::new();
        let mut target_parent: Option<Site> = None;
        let check_mask = !self.mask.is_empty();
        for frog in &mut self.frogs[..first_new] {
            let pos = frog.walk.advance();
            let origin = frog.origin;
            if Some(pos) == target && target_parent.is_none_or(|p| origin < p) {
                target_parent = Some(origin);
            }
            if check_mask && self.mask.contains(&pos) {
                continue;
            }
            match self.records.entry(pos) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(ActivationRecord {
                        site: pos,
                        time: s,
                        parent: Some(origin),
                    });
                    new_sites.push(pos);
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let rec = e.get_mut();
                    if rec.time == s && rec.parent.is_some_and(|p| origin < p) {
                        rec.parent = Some(origin);
                    }
                }
            }
        }
        new_sites.sort_unstable();
        for site in new_sites {
            self.frontier = self.frontier.max(site.l1_dist(&self.source));
            self.frogs.push(Frog {
                origin: site,
                walk: self.field.walk(site),
            });
        }
        target_parent
    }
}

fn check_inputs(
    field: &WalkField,
    source: &Site,
    destination: Option<&Site>,
    mask: &FrogMask,
) -> Result<(), FrogError> {
    source.ensure_dim(field.dim())?;
    if let Some(d) = destination {
        d.ensure_dim(field.dim())?;
    }
    if mask.contains(source) {
        return Err(FrogError::SourceMasked(*source));
    }
    Ok(())
}

/// Exact `T(source, destination)` with the frogs of `mask` removed, provided
/// it is at most `horizon`.
///
/// A masked destination is still reached by the first visit of an active
/// frog; masked sites are only excluded as intermediate chain vertices.
pub fn passage_time(
    field: &WalkField,
    source: Site,
    destination: Site,
    mask: &FrogMask,
    horizon: u64,
) -> Result<PassageSample, FrogError> {
    check_inputs(field, &source, Some(&destination), mask)?;
    if source == destination {
        return Ok(PassageSample {
            source,
            destination,
            value: 0,
            genealogy: vec![source],
            hop_times: Vec::new(),
            max_jump: 0,
            frontier_radius: 0,
        });
    }
    let mut engine = Engine::new(field, source, mask);
    while engine.time < horizon {
        if let Some(parent) = engine.step(Some(destination)) {
            return Ok(assemble(&engine, destination, parent));
        }
    }
    Err(FrogError::NotReached { horizon })
}

fn assemble(engine: &Engine<'_>, destination: Site, parent: Site) -> PassageSample {
    let mut chain = vec![destination];
    let mut times = vec![engine.time];
    let mut cur = engine.records[&parent];
    loop {
        chain.push(cur.site);
        times.push(cur.time);
        match cur.parent {
            Some(p) => cur = engine.records[&p],
            None => break,
        }
    }
    chain.reverse();
    times.reverse();
    let hop_times: Vec<u64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let max_jump = chain
        .windows(2)
        .map(|w| w[0].l1_dist(&w[1]))
        .max()
        .unwrap_or(0);
    PassageSample {
        source: engine.source,
        destination,
        value: engine.time,
        genealogy: chain,
        hop_times,
        max_jump,
        frontier_radius: engine.frontier,
    }
}

/// Runs the dynamics from `source` for exactly `horizon` time units and
/// returns every activation.
pub fn activation_table(
    field: &WalkField,
    source: Site,
    mask: &FrogMask,
    horizon: u64,
) -> Result<ActivationTable, FrogError> {
    check_inputs(field, &source, None, mask)?;
    let mut engine = Engine::new(field, source, mask);
    while engine.time < horizon {
        engine.step(None);
    }
    Ok(ActivationTable {
        source,
        records: engine.records,
        time: engine.time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(seed: u64) -> WalkField {
        WalkField::new(seed, 0, 2).unwrap()
    }

    #[test]
    fn trivial_chain_at_source() {
        let f = field(1);
        let o = Site::origin(2);
        let s = passage_time(&f, o, o, &FrogMask::empty(), 0).unwrap();
        assert_eq!(s.value, 0);
        assert_eq!(s.genealogy, vec![o]);
        assert!(s.hop_times.is_empty());
    }

    #[test]
    fn bounds_and_genealogy_identity() {
        for seed in 0..40 {
            let f = field(seed);
            let dst = Site::new(&[3, -2]);
            let s = passage_time(&f, Site::origin(2), dst, &FrogMask::empty(), 10_000).unwrap();
            assert!(s.value >= 5);
            assert_eq!(s.value % 2, 1);
            assert_eq!(s.hop_times.iter().sum::<u64>(), s.value);
            assert_eq!(s.genealogy.first(), Some(&Site::origin(2)));
            assert_eq!(s.genealogy.last(), Some(&dst));
        }
    }

    #[test]
    fn source_masked_is_rejected() {
        let f = field(1);
        let o = Site::origin(2);
        let m = FrogMask::from_sites([o]);
        assert_eq!(
            passage_time(&f, o, Site::new(&[1, 0]), &m, 10),
            Err(FrogError::SourceMasked(o))
        );
    }

    #[test]
    fn not_reached_reports_horizon() {
        let f = field(1);
        let r = passage_time(&f, Site::origin(2), Site::new(&[30, 0]), &FrogMask::empty(), 10);
        assert_eq!(r, Err(FrogError::NotReached { horizon: 10 }));
    }

    #[test]
    fn table_parent_recursion() {
        let f = field(5);
        let o = Site::origin(2);
        let t = activation_table(&f, o, &FrogMask::empty(), 12).unwrap();
        for rec in t.records.values() {
            if let Some(p) = rec.parent {
                let hop = f.hitting_time(p, rec.site, 12).time().unwrap();
                assert_eq!(rec.time, t.records[&p].time + hop);
            }
        }
        assert!(t.chain_to(o).unwrap() == vec![o]);
    }
}
